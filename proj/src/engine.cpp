#include "obcfp/engine.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace obcfp {

Simulation::Simulation(const ModelConfig& config)
    : cfg_((validate(config), config)),
      history_(config.t_max_window, config.p0),
      price_(config.p0),
      t_(-static_cast<std::int64_t>(config.t_soc)) {
    Rng net_rng = substream(cfg_.seed, Stream::Network);
    net_ = rewire(build_lattice(cfg_.lattice_side), cfg_.rewire_prob, net_rng);
    if (!net_.is_connected())
        std::cerr << "warning: trader network is not connected (rewire_prob=" << cfg_.rewire_prob
                  << ", seed=" << cfg_.seed << ")\n";

    const std::size_t n = cfg_.n_agents;
    const KindCounts counts = apportion(cfg_);
    kinds_.reserve(n);
    for (std::size_t k = 0; k < counts.size(); ++k)
        kinds_.insert(kinds_.end(), counts[k], static_cast<TraderKind>(k));
    Rng placement = substream(cfg_.seed, Stream::Init);
    for (std::size_t i = n; i > 1; --i) std::swap(kinds_[i - 1], kinds_[placement.below(i)]);

    field_.threshold = cfg_.i_threshold;
    field_.alpha = cfg_.alpha;
    field_.level.resize(n);
    statuses_.assign(n, Status::Holder);
    traders_.resize(n);
    for (NodeId i = 0; i < n; ++i) {
        Rng rng = substream(cfg_.seed, Stream::Init, 1, i);
        Trader& tr = traders_[i];
        tr.id = i;
        tr.kind = kinds_[i];
        tr.money = cfg_.m_init;
        tr.shares = cfg_.q_init;
        tr.expected = cfg_.p0;
        field_.level[i] = rng.uniform(0.0, cfg_.i_threshold);
        const double p_f = rng.uniform(cfg_.p_fund_global - cfg_.theta, cfg_.p_fund_global + cfg_.theta);
        const auto window = static_cast<std::uint32_t>(2 + rng.below(cfg_.t_max_window - 1));
        if (tr.kind == TraderKind::Fundamentalist) tr.personal_fund = p_f;
        if (tr.kind == TraderKind::Chartist) tr.window = window;
    }
}

std::uint64_t Simulation::global_step() const noexcept {
    return static_cast<std::uint64_t>(t_ + static_cast<std::int64_t>(cfg_.t_soc));
}

std::uint64_t Simulation::relax_step(std::uint64_t s) {
    drive(field_, [&](NodeId i) { return substream(cfg_.seed, Stream::Drive, s, i); });
    Rng cascade_rng = substream(cfg_.seed, Stream::Cascade, s);
    const auto reports = relax(field_, net_, statuses_, kinds_, cascade_rng,
                               cfg_.avalanche_topple_cap, t_ + 1);
    std::uint64_t total = 0;
    for (const auto& r : reports) {
        total += r.size;
        avalanche_log_.push_back({r.step, r.size, static_cast<std::uint32_t>(r.initiators.size()),
                                  r.imitated});
    }
    return total;
}

void Simulation::soc_step() {
    const std::uint64_t s = global_step() + 1;
    std::fill(statuses_.begin(), statuses_.end(), Status::Holder);
    relax_step(s);
    history_.push(price_);
    ++t_;
}

void Simulation::run_transient() {
    while (t_ < 0) soc_step();
    transient_done_ = true;
}

void Simulation::form_statuses(std::uint64_t s) {
    for (NodeId i = 0; i < traders_.size(); ++i) {
        Trader& tr = traders_[i];
        Rng rng = substream(cfg_.seed, Stream::Expectation, s, i);
        switch (tr.kind) {
            case TraderKind::Fundamentalist:
                tr.expected = expect_fundamentalist(price_, tr.personal_fund, cfg_.phi,
                                                    draw_noise(cfg_.sigma, rng));
                statuses_[i] = decide_status(tr.expected, price_, cfg_.tau, tr.money, tr.shares);
                break;
            case TraderKind::Chartist:
                tr.expected = expect_chartist(price_, history_, tr.window, cfg_.kappa,
                                              draw_noise(cfg_.sigma, rng));
                statuses_[i] = decide_status(tr.expected, price_, cfg_.tau, tr.money, tr.shares);
                break;
            case TraderKind::Random:
                statuses_[i] = decide_status_random(tr.money, tr.shares, rng);
                // Random traders form no view; their order prices straddle p_t by noise alone.
                tr.expected = price_ + draw_noise(cfg_.sigma, rng);
                break;
        }
    }
}

StepRecord Simulation::step(const RunOptions* options) {
    if (!transient_done_) throw std::logic_error("step: transient has not been run");
    const std::uint64_t s = global_step() + 1;

    form_statuses(s);
    const std::uint64_t avalanche_size = relax_step(s);

    std::vector<Order> orders;
    orders.reserve(traders_.size());
    for (NodeId i = 0; i < traders_.size(); ++i) {
        Trader& tr = traders_[i];
        tr.status = enforce_resources(statuses_[i], tr.money, tr.shares);
        tr.order_price.reset();
        if (tr.status == Status::Holder) continue;
        Rng rng = substream(cfg_.seed, Stream::Order, s, i);
        const double bid_floor = cfg_.bid_floor == BidFloor::Price ? price_ : 0.0;
        tr.order_price = draw_order_price(tr.status, tr.expected, price_, tr.money, rng, bid_floor);
        if (!tr.order_price) {
            tr.status = Status::Holder;
            continue;
        }
        orders.push_back({i, tr.status == Status::Bidder ? Side::Bid : Side::Ask, *tr.order_price});
    }
    const OrderBook book = OrderBook::from_orders(std::move(orders));
    if (options && options->book_observer) options->book_observer(t_ + 1, book);

    const MatchOutcome outcome = clear(book, price_, cfg_.delta, cfg_.price_floor);
    settle(outcome.trades, traders_);

    const double previous = price_;
    price_ = outcome.new_price;
    history_.push(price_);
    ++t_;

    StepRecord rec;
    rec.t = t_;
    rec.price = price_;
    rec.ret = std::log(price_) - std::log(previous);
    rec.n_bids = static_cast<std::uint32_t>(outcome.n_bids);
    rec.n_asks = static_cast<std::uint32_t>(outcome.n_asks);
    rec.n_trades = static_cast<std::uint32_t>(outcome.n_trades());
    rec.avalanche_size = avalanche_size;
    return rec;
}

AgentSnapshot Simulation::snapshot() const {
    return {t_, price_, traders_, field_.level};
}

RunResult run(const ModelConfig& config, const RunOptions& options) {
    Simulation sim(config);
    sim.run_transient();

    RunResult result;
    result.config = config;
    result.network = sim.network();
    result.series.reserve(config.t_run);
    auto wants_snapshot = [&](std::int64_t t) {
        return std::find(options.snapshot_steps.begin(), options.snapshot_steps.end(), t) !=
               options.snapshot_steps.end();
    };
    if (wants_snapshot(0)) result.snapshots.push_back(sim.snapshot());
    for (std::uint64_t k = 0; k < config.t_run; ++k) {
        result.series.push_back(sim.step(&options));
        if (wants_snapshot(sim.t())) result.snapshots.push_back(sim.snapshot());
    }
    result.avalanches = sim.avalanche_log();
    result.final_traders = sim.traders();
    result.final_price = sim.price();
    return result;
}

}  // namespace obcfp
