#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "obcfp/agents.hpp"

namespace obcfp {

enum class Side : std::uint8_t { Bid, Ask };

/// A one-share limit order.
struct Order {
    NodeId agent = 0;
    Side side = Side::Bid;
    double price = 0.0;

    bool operator==(const Order&) const = default;
};

struct Trade {
    NodeId buyer = 0;
    NodeId seller = 0;
    double price = 0.0;  // the matched ask

    bool operator==(const Trade&) const = default;
};

/// Bids ranked by descending price, asks by ascending price; equal prices keep
/// arrival order.
class OrderBook {
public:
    /// Throws std::invalid_argument for a non-positive or non-finite price.
    void insert(const Order& order);

    /// Same ranking as inserting each order in sequence, in O(n log n).
    static OrderBook from_orders(std::vector<Order> orders);

    const std::vector<Order>& bids() const noexcept { return bids_; }
    const std::vector<Order>& asks() const noexcept { return asks_; }

    void write_csv(std::ostream& out) const;

private:
    std::vector<Order> bids_;
    std::vector<Order> asks_;
};

/// Which branch of the price rule produced the new price. Cases 1-6 are the
/// imbalance-driven cases; the balanced ones cover n_a == n_b.
enum class PriceCase : std::uint8_t {
    ExcessDemandNoAsks = 1,
    ExcessSupplyNoBids = 2,
    ExcessDemandNoTrades = 3,
    ExcessDemandTrades = 4,
    ExcessSupplyNoTrades = 5,
    ExcessSupplyTrades = 6,
    EmptyBook = 7,
    BalancedNoTrades = 8,
    BalancedTrades = 9,
};

struct MatchOutcome {
    std::vector<Trade> trades;
    std::size_t n_bids = 0;
    std::size_t n_asks = 0;
    std::optional<double> last_price;
    double omega = 0.0;
    double new_price = 0.0;
    PriceCase price_case = PriceCase::EmptyBook;

    std::size_t n_trades() const noexcept { return trades.size(); }
};

/// Pairs the i-th best bid with the i-th best ask while bid >= ask.
std::vector<Trade> match(const OrderBook& book);

/// Moves one share and the execution price per trade. Throws std::logic_error
/// if a buyer cannot pay or a seller holds no share.
void settle(std::span<const Trade> trades, std::span<Trader> traders);

struct PriceUpdate {
    double price = 0.0;
    double omega = 0.0;
    PriceCase price_case = PriceCase::EmptyBook;
};

/// New global price from order counts, trade count and last execution price.
/// Clamped below at price_floor. `last_price` must be set iff n_trades > 0.
PriceUpdate update_price(double price, std::size_t n_asks, std::size_t n_bids, std::size_t n_trades,
                         std::optional<double> last_price, double delta, double price_floor);

/// match + update_price in one call, without settlement.
MatchOutcome clear(const OrderBook& book, double price, double delta, double price_floor);

}  // namespace obcfp
