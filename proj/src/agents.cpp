#include "obcfp/agents.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace obcfp {

std::string_view to_string(TraderKind kind) noexcept {
    switch (kind) {
        case TraderKind::Fundamentalist: return "fundamentalist";
        case TraderKind::Chartist: return "chartist";
        case TraderKind::Random: return "random";
    }
    return "?";
}

std::string_view to_string(Status status) noexcept {
    switch (status) {
        case Status::Holder: return "holder";
        case Status::Bidder: return "bidder";
        case Status::Asker: return "asker";
    }
    return "?";
}

PriceHistory::PriceHistory(std::size_t capacity, double fill) : buf_(capacity, fill) {
    if (capacity == 0) throw std::invalid_argument("price history capacity must be positive");
}

void PriceHistory::push(double price) {
    buf_[head_] = price;
    head_ = (head_ + 1) % buf_.size();
}

double PriceHistory::mean_last(std::size_t window) const {
    if (window == 0 || window > buf_.size())
        throw std::out_of_range("chartist window " + std::to_string(window) +
                                " exceeds price history of " + std::to_string(buf_.size()));
    // Summed newest to oldest so the result does not depend on ring position.
    double sum = 0.0;
    std::size_t idx = head_;
    for (std::size_t k = 0; k < window; ++k) {
        idx = (idx + buf_.size() - 1) % buf_.size();
        sum += buf_[idx];
    }
    return sum / static_cast<double>(window);
}

double expect_fundamentalist(double price, double personal_fund, double phi, double eps) noexcept {
    return price + phi * (personal_fund - price) + eps;
}

double expect_chartist(double price, const PriceHistory& history, std::uint32_t window, double kappa,
                       double eps) {
    const double trend = price - history.mean_last(window);
    return price + kappa / static_cast<double>(window) * trend + eps;
}

double draw_noise(double sigma, Rng& rng) noexcept {
    if (sigma == 0.0) return 0.0;
    return rng.uniform_open(-sigma, sigma);
}

Status enforce_resources(Status status, double money, std::int64_t shares) noexcept {
    if (status == Status::Bidder && !(money > 0.0)) return Status::Holder;
    if (status == Status::Asker && shares <= 0) return Status::Holder;
    return status;
}

Status decide_status(double expected, double price, double tau, double money,
                     std::int64_t shares) noexcept {
    Status s = Status::Holder;
    if (expected - price > tau)
        s = Status::Bidder;
    else if (price - expected > tau)
        s = Status::Asker;
    return enforce_resources(s, money, shares);
}

Status decide_status_random(double money, std::int64_t shares, Rng& rng) noexcept {
    static constexpr Status kChoices[3] = {Status::Bidder, Status::Asker, Status::Holder};
    return enforce_resources(kChoices[rng.below(3)], money, shares);
}

std::optional<double> draw_order_price(Status status, double expected, double price, double money,
                                       Rng& rng, double bid_floor) {
    switch (status) {
        case Status::Bidder: {
            const double hi = std::min(money, expected);
            if (!(hi > bid_floor) || !(hi > 0.0)) return std::nullopt;
            return rng.uniform_open(bid_floor, hi);
        }
        case Status::Asker: {
            const double lo = std::max(std::min(expected, price), 0.0);
            const double hi = std::max(expected, price);
            if (!(hi > 0.0)) return std::nullopt;
            if (!(hi > lo)) return hi;
            return rng.uniform_open(lo, hi);
        }
        case Status::Holder: break;
    }
    throw std::invalid_argument("holders place no orders");
}

}  // namespace obcfp
