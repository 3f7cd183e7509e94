#include "obcfp/orderbook.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <string>

namespace obcfp {
namespace {

bool bid_before(const Order& a, const Order& b) { return a.price > b.price; }
bool ask_before(const Order& a, const Order& b) { return a.price < b.price; }

void check_price(const Order& order) {
    if (!(order.price > 0.0) || !std::isfinite(order.price))
        throw std::invalid_argument("order price must be positive and finite");
}

}  // namespace

void OrderBook::insert(const Order& order) {
    check_price(order);
    auto& side = order.side == Side::Bid ? bids_ : asks_;
    const auto pos = order.side == Side::Bid
                         ? std::upper_bound(side.begin(), side.end(), order, bid_before)
                         : std::upper_bound(side.begin(), side.end(), order, ask_before);
    side.insert(pos, order);
}

OrderBook OrderBook::from_orders(std::vector<Order> orders) {
    OrderBook book;
    for (const auto& o : orders) {
        check_price(o);
        (o.side == Side::Bid ? book.bids_ : book.asks_).push_back(o);
    }
    std::stable_sort(book.bids_.begin(), book.bids_.end(), bid_before);
    std::stable_sort(book.asks_.begin(), book.asks_.end(), ask_before);
    return book;
}

void OrderBook::write_csv(std::ostream& out) const {
    auto row = [&out](const Order& o) {
        char buf[32];
        const auto end = std::to_chars(buf, buf + sizeof buf, o.price).ptr;
        out << o.agent << ',' << std::string_view(buf, static_cast<std::size_t>(end - buf)) << '\n';
    };
    out << "# bids\nagent_id,price\n";
    for (const auto& o : bids_) row(o);
    out << "# asks\nagent_id,price\n";
    for (const auto& o : asks_) row(o);
}

std::vector<Trade> match(const OrderBook& book) {
    const auto& bids = book.bids();
    const auto& asks = book.asks();
    std::vector<Trade> trades;
    for (std::size_t i = 0; i < bids.size() && i < asks.size(); ++i) {
        if (bids[i].price < asks[i].price) break;
        trades.push_back({bids[i].agent, asks[i].agent, asks[i].price});
    }
    return trades;
}

void settle(std::span<const Trade> trades, std::span<Trader> traders) {
    for (const auto& t : trades) {
        Trader& buyer = traders[t.buyer];
        Trader& seller = traders[t.seller];
        if (buyer.money < t.price)
            throw std::logic_error("settle: buyer " + std::to_string(t.buyer) + " cannot pay");
        if (seller.shares < 1)
            throw std::logic_error("settle: seller " + std::to_string(t.seller) + " holds no share");
        buyer.money -= t.price;
        buyer.shares += 1;
        seller.money += t.price;
        seller.shares -= 1;
    }
}

PriceUpdate update_price(double price, std::size_t n_asks, std::size_t n_bids, std::size_t n_trades,
                         std::optional<double> last_price, double delta, double price_floor) {
    if ((n_trades > 0) != last_price.has_value())
        throw std::invalid_argument("update_price: last_price must be present iff trades occurred");
    const auto na = static_cast<double>(n_asks);
    const auto nb = static_cast<double>(n_bids);
    const auto nt = static_cast<double>(n_trades);

    PriceUpdate u;
    if (n_asks == 0 && n_bids == 0) {
        u = {price, 0.0, PriceCase::EmptyBook};
    } else if (n_asks == 0) {
        u = {price + delta * nb, nb, PriceCase::ExcessDemandNoAsks};
    } else if (n_bids == 0) {
        u = {price - delta * na, na, PriceCase::ExcessSupplyNoBids};
    } else if (n_asks < n_bids) {
        if (n_trades == 0)
            u = {price + delta * nb, nb, PriceCase::ExcessDemandNoTrades};
        else
            u = {*last_price + delta * (nb - nt), nb - nt, PriceCase::ExcessDemandTrades};
    } else if (n_bids < n_asks) {
        if (n_trades == 0)
            u = {price - delta * na, na, PriceCase::ExcessSupplyNoTrades};
        else
            u = {*last_price - delta * (na - nt), na - nt, PriceCase::ExcessSupplyTrades};
    } else {
        if (n_trades == 0)
            u = {price, 0.0, PriceCase::BalancedNoTrades};
        else
            u = {*last_price, 0.0, PriceCase::BalancedTrades};
    }
    u.price = std::max(u.price, price_floor);
    return u;
}

MatchOutcome clear(const OrderBook& book, double price, double delta, double price_floor) {
    MatchOutcome out;
    out.trades = match(book);
    out.n_bids = book.bids().size();
    out.n_asks = book.asks().size();
    if (!out.trades.empty()) out.last_price = out.trades.back().price;
    const auto u = update_price(price, out.n_asks, out.n_bids, out.trades.size(), out.last_price,
                                delta, price_floor);
    out.omega = u.omega;
    out.new_price = u.price;
    out.price_case = u.price_case;
    return out;
}

}  // namespace obcfp
