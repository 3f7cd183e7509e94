#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "obcfp/network.hpp"
#include "obcfp/rng.hpp"

namespace obcfp {

enum class TraderKind : std::uint8_t { Fundamentalist, Chartist, Random };
enum class Status : std::uint8_t { Holder, Bidder, Asker };

std::string_view to_string(TraderKind kind) noexcept;
std::string_view to_string(Status status) noexcept;

struct Trader {
    NodeId id = 0;
    TraderKind kind = TraderKind::Fundamentalist;
    double money = 0.0;
    std::int64_t shares = 0;
    double personal_fund = 0.0;  // fundamentalists only
    std::uint32_t window = 0;     // chartists only
    double expected = 0.0;
    Status status = Status::Holder;
    std::optional<double> order_price;

    double wealth(double price) const noexcept {
        return money + static_cast<double>(shares) * price;
    }
};

/// Last `capacity` global prices; the newest is the current price.
class PriceHistory {
public:
    PriceHistory(std::size_t capacity, double fill);

    void push(double price);
    double current() const noexcept { return buf_[(head_ + buf_.size() - 1) % buf_.size()]; }
    std::size_t capacity() const noexcept { return buf_.size(); }

    /// Mean of the newest `window` prices (current price included).
    /// Throws std::out_of_range if window is 0 or exceeds capacity.
    double mean_last(std::size_t window) const;

private:
    std::vector<double> buf_;
    std::size_t head_ = 0;  // slot the next push overwrites
};

/// Fundamentalist expectation: p + phi (p_f - p) + eps.
double expect_fundamentalist(double price, double personal_fund, double phi, double eps) noexcept;

/// Chartist expectation: p + (kappa / T)(p - mean of last T prices) + eps.
double expect_chartist(double price, const PriceHistory& history, std::uint32_t window,
                       double kappa, double eps);

/// Uniform on (-sigma, sigma); exactly 0 when sigma is 0.
double draw_noise(double sigma, Rng& rng) noexcept;

/// Threshold rule for fundamentalists and chartists.
Status decide_status(double expected, double price, double tau, double money,
                     std::int64_t shares) noexcept;

/// Uniform over {Bidder, Asker, Holder}, then downgraded to Holder when the
/// trader cannot fund the chosen side.
Status decide_status_random(double money, std::int64_t shares, Rng& rng) noexcept;

/// Bidder: uniform on (bid_floor, min(money, expected)). Asker: uniform
/// between expected and price, lower bound floored at 0. Returns nullopt when
/// the interval is empty, which callers treat as a downgrade to Holder.
std::optional<double> draw_order_price(Status status, double expected, double price, double money,
                                       Rng& rng, double bid_floor = 0.0);

/// Applies the money/share preconditions to a status that may have been imposed
/// from outside (imitation).
Status enforce_resources(Status status, double money, std::int64_t shares) noexcept;

}  // namespace obcfp
