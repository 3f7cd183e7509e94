#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "obcfp/agents.hpp"
#include "obcfp/config.hpp"
#include "obcfp/network.hpp"
#include "obcfp/orderbook.hpp"
#include "obcfp/soc.hpp"

namespace obcfp {

/// One trading step. Step t moves the price from p_{t-1} to p_t; ret is
/// log(p_t) - log(p_{t-1}).
struct StepRecord {
    std::int64_t t = 0;
    double price = 0.0;
    double ret = 0.0;
    std::uint32_t n_bids = 0;
    std::uint32_t n_asks = 0;
    std::uint32_t n_trades = 0;
    std::uint64_t avalanche_size = 0;  // topplings summed over the step's cascades
};

/// One cascade. Transient steps carry t <= 0 (t = 1 - t_soc for the first).
struct AvalancheLogRow {
    std::int64_t t = 0;
    std::uint64_t size = 0;
    std::uint32_t initiator_count = 0;
    Status imitated = Status::Holder;
};

struct AgentSnapshot {
    std::int64_t t = 0;
    double price = 0.0;
    std::vector<Trader> traders;
    std::vector<double> info;
};

struct RunOptions {
    std::vector<std::int64_t> snapshot_steps{0, 100, 360, 1000, 20000};
    /// Called with each trading step's ranked book before matching.
    std::function<void(std::int64_t t, const OrderBook& book)> book_observer;
};

struct RunResult {
    ModelConfig config;
    SmallWorldNet network;
    std::vector<StepRecord> series;
    std::vector<AvalancheLogRow> avalanches;
    std::vector<AgentSnapshot> snapshots;
    std::vector<Trader> final_traders;
    double final_price = 0.0;
};

/// A single market instance. Not thread-safe; distinct instances share nothing.
class Simulation {
public:
    /// Builds the network and traders from a validated config.
    explicit Simulation(const ModelConfig& config);

    /// t_soc steps of information dynamics with the order book suspended.
    void run_transient();

    /// One trading step. Requires run_transient() to have completed.
    StepRecord step(const RunOptions* options = nullptr);

    /// Information dynamics only, every status a placeholder Holder.
    void soc_step();

    AgentSnapshot snapshot() const;

    const ModelConfig& config() const noexcept { return cfg_; }
    const SmallWorldNet& network() const noexcept { return net_; }
    const std::vector<Trader>& traders() const noexcept { return traders_; }
    std::vector<Trader>& traders_mut() noexcept { return traders_; }
    const InfoField& field() const noexcept { return field_; }
    InfoField& field_mut() noexcept { return field_; }
    const PriceHistory& history() const noexcept { return history_; }
    double price() const noexcept { return price_; }
    /// Post-transient step index of the last completed step; <= 0 during the transient.
    std::int64_t t() const noexcept { return t_; }
    bool transient_done() const noexcept { return transient_done_; }
    const std::vector<AvalancheLogRow>& avalanche_log() const noexcept { return avalanche_log_; }

private:
    std::uint64_t global_step() const noexcept;
    void form_statuses(std::uint64_t s);
    std::uint64_t relax_step(std::uint64_t s);

    ModelConfig cfg_;
    SmallWorldNet net_;
    std::vector<Trader> traders_;
    std::vector<TraderKind> kinds_;
    std::vector<Status> statuses_;
    InfoField field_;
    PriceHistory history_;
    double price_;
    std::int64_t t_;
    bool transient_done_ = false;
    std::vector<AvalancheLogRow> avalanche_log_;
};

/// Initialize, transient, then t_run trading steps.
RunResult run(const ModelConfig& config, const RunOptions& options = {});

}  // namespace obcfp
