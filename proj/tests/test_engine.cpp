#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>
#include <numeric>

#include "obcfp/engine.hpp"

using namespace obcfp;

namespace {

ModelConfig small_config(std::uint64_t seed = 1) {
    ModelConfig c = default_config();
    c.n_agents = 100;
    c.lattice_side = 10;
    c.t_soc = 500;
    c.t_run = 400;
    c.seed = seed;
    return c;
}

std::int64_t total_shares(const std::vector<Trader>& ts) {
    std::int64_t s = 0;
    for (const auto& t : ts) s += t.shares;
    return s;
}

double total_money(const std::vector<Trader>& ts) {
    double m = 0;
    for (const auto& t : ts) m += t.money;
    return m;
}

}  // namespace

TEST_CASE("initial traders") {
    Simulation sim(default_config());
    const auto& ts = sim.traders();
    REQUIRE(ts.size() == 1600);
    std::map<TraderKind, int> kinds;
    for (const auto& t : ts) {
        ++kinds[t.kind];
        CHECK(t.wealth(100.0) == 40000.0);
        if (t.kind == TraderKind::Fundamentalist) {
            CHECK(t.personal_fund >= 90.0);
            CHECK(t.personal_fund <= 150.0);
        }
        if (t.kind == TraderKind::Chartist) {
            CHECK(t.window >= 2);
            CHECK(t.window <= 15);
        }
    }
    CHECK(kinds[TraderKind::Fundamentalist] == 800);
    CHECK(kinds[TraderKind::Chartist] == 800);
    for (double v : sim.field().level) {
        CHECK(v >= 0.0);
        CHECK(v < 1.0);
    }
    CHECK(sim.price() == 100.0);
    CHECK(sim.t() == -10000);
    CHECK(sim.network().size() == 1600);
}

TEST_CASE("chartist windows cover the whole range") {
    Simulation sim(default_config());
    std::map<std::uint32_t, int> w;
    for (const auto& t : sim.traders())
        if (t.kind == TraderKind::Chartist) ++w[t.window];
    CHECK(w.size() == 14);
}

TEST_CASE("initialisation is reproducible") {
    Simulation a(default_config()), b(default_config());
    CHECK(a.field().level == b.field().level);
    CHECK(a.network() == b.network());
    for (std::size_t i = 0; i < a.traders().size(); ++i) {
        CHECK(a.traders()[i].kind == b.traders()[i].kind);
        CHECK(a.traders()[i].personal_fund == b.traders()[i].personal_fund);
        CHECK(a.traders()[i].window == b.traders()[i].window);
    }
}

TEST_CASE("transient moves information only") {
    Simulation sim(small_config());
    CHECK_THROWS_AS(sim.step(), std::logic_error);
    sim.run_transient();
    CHECK(sim.t() == 0);
    CHECK(sim.price() == 100.0);
    CHECK(sim.field().max() < 1.0);
    CHECK(sim.history().mean_last(15) == 100.0);
    CHECK_FALSE(sim.avalanche_log().empty());
    for (const auto& row : sim.avalanche_log()) {
        CHECK(row.t <= 0);
        CHECK(row.t >= -499);
    }
    for (const auto& t : sim.traders()) CHECK(t.wealth(100.0) == 40000.0);
}

TEST_CASE("an all-holder market leaves the price alone") {
    ModelConfig c = small_config();
    c.tau = 1e9;
    Simulation sim(c);
    sim.run_transient();
    for (int i = 0; i < 20; ++i) {
        const auto rec = sim.step();
        CHECK(rec.n_bids == 0);
        CHECK(rec.n_asks == 0);
        CHECK(rec.price == 100.0);
        CHECK(rec.ret == 0.0);
    }
}

TEST_CASE("fundamentalist excess demand lifts the price on the first step") {
    ModelConfig c = small_config();
    c.frac_fundamentalists = 1.0;
    c.frac_chartists = 0.0;
    c.sigma = 0.0;
    c.theta = 0.0;  // every p_f = 120, every expectation = 140
    Simulation sim(c);
    sim.run_transient();
    const auto rec = sim.step();
    CHECK(rec.n_bids == 100);
    CHECK(rec.n_asks == 0);
    CHECK(rec.price == doctest::Approx(105.0));
}

TEST_CASE("conservation and wealth identity on every step") {
    for (std::uint64_t seed : {1, 2, 3}) {
        ModelConfig c = small_config(seed);
        c.frac_random = 0.2;
        c.frac_fundamentalists = 0.4;
        c.frac_chartists = 0.4;
        Simulation sim(c);
        sim.run_transient();
        const double money0 = total_money(sim.traders());
        for (int i = 0; i < 400; ++i) {
            const auto rec = sim.step();
            REQUIRE(total_shares(sim.traders()) == 100 * 50);
            REQUIRE(std::abs(total_money(sim.traders()) - money0) <= 1e-9 * money0);
            CHECK(rec.n_trades <= std::min(rec.n_bids, rec.n_asks));
            CHECK(rec.price >= c.price_floor);
            for (const auto& t : sim.traders()) {
                REQUIRE(t.money >= 0.0);
                REQUIRE(t.shares >= 0);
            }
        }
        const auto snap = sim.snapshot();
        for (const auto& t : snap.traders) CHECK(t.wealth(snap.price) == t.money + t.shares * snap.price);
    }
}

TEST_CASE("returns are consistent with recorded prices") {
    const auto r = run(small_config());
    REQUIRE(r.series.size() == 400);
    double prev = 100.0;
    for (std::size_t i = 0; i < r.series.size(); ++i) {
        CHECK(r.series[i].t == static_cast<std::int64_t>(i + 1));
        CHECK(r.series[i].ret == std::log(r.series[i].price) - std::log(prev));
        prev = r.series[i].price;
    }
    CHECK(r.final_price == r.series.back().price);
}

TEST_CASE("runs are bit-reproducible and seed-sensitive") {
    const auto a = run(small_config(4));
    const auto b = run(small_config(4));
    const auto c = run(small_config(5));
    REQUIRE(a.series.size() == b.series.size());
    bool differs = false;
    for (std::size_t i = 0; i < a.series.size(); ++i) {
        CHECK(a.series[i].price == b.series[i].price);
        CHECK(a.series[i].n_trades == b.series[i].n_trades);
        CHECK(a.series[i].avalanche_size == b.series[i].avalanche_size);
        differs |= a.series[i].price != c.series[i].price;
    }
    CHECK(differs);
    CHECK(a.avalanches.size() == b.avalanches.size());
}

TEST_CASE("snapshots at the requested steps") {
    RunOptions o;
    o.snapshot_steps = {0, 100, 360};
    const auto r = run(small_config(), o);
    REQUIRE(r.snapshots.size() == 3);
    CHECK(r.snapshots[0].t == 0);
    CHECK(r.snapshots[1].t == 100);
    CHECK(r.snapshots[2].t == 360);
    CHECK(r.snapshots[1].price == r.series[99].price);
    CHECK(r.snapshots[2].info.size() == 100);
}

TEST_CASE("book observer sees every ranked book") {
    RunOptions o;
    std::int64_t calls = 0;
    std::size_t orders = 0;
    o.book_observer = [&](std::int64_t t, const OrderBook& book) {
        CHECK(t == calls + 1);
        ++calls;
        orders += book.bids().size() + book.asks().size();
    };
    const auto r = run(small_config(), o);
    CHECK(calls == 400);
    std::size_t recorded = 0;
    for (const auto& s : r.series) recorded += s.n_bids + s.n_asks;
    CHECK(orders == recorded);
}

TEST_CASE("noise-free market without price pressure settles") {
    ModelConfig c = small_config();
    c.delta = 0.0;
    c.sigma = 0.0;
    const auto r = run(c);
    const double last = r.series.back().price;
    for (std::size_t i = r.series.size() - 50; i < r.series.size(); ++i) CHECK(r.series[i].price == last);
}

TEST_CASE("full-size default run") {
    const auto r = run(default_config());
    CHECK(r.series.size() == 20000);
    CHECK(r.snapshots.size() == 5);
    CHECK(total_shares(r.final_traders) == 1600 * 50);
    CHECK(total_money(r.final_traders) == doctest::Approx(1600 * 35000.0).epsilon(1e-9));

    // Share holdings spread out over time.
    auto variance = [](const AgentSnapshot& s) {
        double m = 0, v = 0;
        for (const auto& t : s.traders) m += t.shares;
        m /= s.traders.size();
        for (const auto& t : s.traders) v += (t.shares - m) * (t.shares - m);
        return v / s.traders.size();
    };
    for (std::size_t i = 1; i < r.snapshots.size(); ++i)
        CHECK(variance(r.snapshots[i]) >= variance(r.snapshots[i - 1]));
    auto zeros = [](const AgentSnapshot& s) {
        return std::count_if(s.traders.begin(), s.traders.end(), [](const Trader& t) { return t.shares == 0; });
    };
    CHECK(zeros(r.snapshots[4]) > zeros(r.snapshots[1]));
}
