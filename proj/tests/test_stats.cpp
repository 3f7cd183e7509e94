#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "obcfp/stats.hpp"
#include "oracles.hpp"

using namespace obcfp;
using namespace obcfp::stats;

TEST_CASE("normalisation identities") {
    std::mt19937_64 g(1);
    std::lognormal_distribution<double> step(0.0, 0.02);
    std::vector<double> prices{100.0};
    for (int i = 0; i < 5000; ++i) prices.push_back(prices.back() * step(g));
    const auto r = normalize_returns(prices);
    REQUIRE(r.normalized.size() == 5000);
    double m = 0, v = 0;
    for (double x : r.normalized) m += x;
    m /= 5000;
    for (double x : r.normalized) v += (x - m) * (x - m);
    CHECK(std::abs(m) < 1e-9);
    CHECK(std::abs(std::sqrt(v / 5000) - 1.0) < 1e-9);
    CHECK(r.raw[0] == std::log(prices[1]) - std::log(prices[0]));
}

TEST_CASE("two-valued returns normalise to plus and minus one") {
    std::vector<double> prices;
    for (int i = 0; i < 101; ++i) prices.push_back(i % 2 == 0 ? 100.0 : 110.0);
    const auto r = normalize_returns(prices);
    for (std::size_t i = 0; i < r.normalized.size(); ++i) {
        // 100 returns, 50 up and 50 down, so the mean is exactly zero.
        CHECK(std::abs(std::abs(r.normalized[i]) - 1.0) < 1e-12);
        CHECK((r.normalized[i] > 0) == (i % 2 == 0));
    }
}

TEST_CASE("normalisation errors") {
    const std::vector<double> flat(10, 100.0);
    CHECK_THROWS_AS(normalize_returns(flat), StatsError);
    CHECK_THROWS_AS(normalize_returns(std::vector<double>{100, 101}), StatsError);
    CHECK_THROWS_AS(normalize_returns(std::vector<double>{100, 0, 101}), StatsError);
    CHECK_THROWS_AS(normalize_returns(std::vector<double>{100, -1, 101}), StatsError);
}

TEST_CASE("q-Gaussian density") {
    CHECK(q_gaussian(0.0, 1.5, 0.98, 7.0) == 0.98);
    CHECK(q_gaussian(0.0, 1.3, 0.5, 2.0) == 0.5);
    CHECK(q_gaussian(1.0, 1.5, 1.0, 2.0) == doctest::Approx(std::pow(2.0, -2.0)));
    double prev = 1.0;
    for (double q : {1.1, 1.01, 1.001, 1.0001}) {
        const double gap = std::abs(q_gaussian(1.0, q, 1.0, 1.0) - std::exp(-1.0));
        CHECK(gap < prev);
        prev = gap;
    }
    CHECK(prev < 1e-4);
    CHECK_THROWS_AS(q_gaussian(0.0, 1.0, 1.0, 1.0), StatsError);
    CHECK_THROWS_AS(q_gaussian(2.0, 0.5, 1.0, 1.0), StatsError);  // beyond the compact support
    CHECK(q_gaussian(0.5, 0.5, 1.0, 1.0) == doctest::Approx(0.875 * 0.875));
}

TEST_CASE("histogram densities") {
    const std::vector<double> x{-20.0, 0.0, 0.1, 20.0};
    const auto h = histogram(x);
    CHECK(h.total == 4);
    CHECK(h.counts.size() == 61);
    CHECK(h.centers[30] == doctest::Approx(0.0).epsilon(1e-12));
    const double width = 20.0 / 61.0;
    CHECK(h.counts[30] == 2);
    CHECK(h.density[30] == doctest::Approx(2.0 / (4.0 * width)));
}

TEST_CASE("q = 1.5 samples are recovered") {
    std::mt19937_64 g(7);
    std::vector<double> x(100000);
    for (auto& v : x) v = oracle::sample_q15(7.0, g);
    const auto fit = fit_q_gaussian(x);
    CHECK(std::abs(fit.q - 1.5) <= 0.1);
    CHECK(fit.B > 0.0);
    CHECK(fit.A > 0.0);

    // Scale consistency: z-scoring the same samples does not move q much.
    const auto norm = normalize_log_returns(x);
    const auto fit2 = fit_q_gaussian(norm.normalized);
    CHECK(std::abs(fit2.q - 1.5) <= 0.1);
}

TEST_CASE("Gaussian samples fit close to the q = 1 limit") {
    std::mt19937_64 g(11);
    std::normal_distribution<double> n;
    std::vector<double> x(100000);
    for (auto& v : x) v = n(g);
    CHECK(fit_q_gaussian(x).q <= 1.15);
}

TEST_CASE("fit preconditions") {
    CHECK_THROWS_AS(fit_q_gaussian(std::vector<double>(999, 0.0)), StatsError);
    CHECK_THROWS_AS(fit_q_gaussian(std::vector<double>(2000, 0.0)), StatsError);
}

TEST_CASE("transition detection") {
    CHECK_FALSE(detect_transition(std::vector<double>(1000, 150.0)).t_star);
    std::vector<double> step(1000, 150.0);
    for (std::size_t i = 349; i < step.size(); ++i) step[i] = 50.0;  // t = 350 onwards
    const auto split = detect_transition(step);
    REQUIRE(split.t_star);
    CHECK(*split.t_star == 375);
    CHECK(*split.t_star >= 350);
    CHECK(*split.t_star <= 400);
    CHECK_FALSE(detect_transition(std::vector<double>(10, 0.0)).t_star);

    std::mt19937_64 g(3);
    std::uniform_real_distribution<double> u(0, 200);
    std::vector<double> noisy(2000);
    for (auto& v : noisy) v = u(g);
    std::optional<std::int64_t> last;
    for (double thr : {80.0, 90.0, 100.0, 110.0, 120.0}) {
        const auto t = detect_transition(noisy, 50, thr).t_star;
        if (last && t) CHECK(*t <= *last);
        if (t) last = t;
    }
}

TEST_CASE("excess kurtosis") {
    std::vector<double> pm;
    for (int i = 0; i < 1000; ++i) pm.push_back(i % 2 ? 1.0 : -1.0);
    CHECK(excess_kurtosis(pm) == doctest::Approx(-2.0));
    std::mt19937_64 g(5);
    std::normal_distribution<double> n;
    std::vector<double> x(1000000);
    for (auto& v : x) v = n(g);
    CHECK(std::abs(excess_kurtosis(x)) < 0.1);
    CHECK(excess_kurtosis(x) == doctest::Approx(oracle::kurtosis(x)).epsilon(1e-9));
    CHECK_THROWS_AS(excess_kurtosis(std::vector<double>(10, 3.0)), StatsError);
    CHECK_THROWS_AS(excess_kurtosis(std::vector<double>{1, 2, 3}), StatsError);
}

TEST_CASE("Hurwitz zeta against known values") {
    const double pi = std::acos(-1.0);
    CHECK(hurwitz_zeta(2.0, 1.0) == doctest::Approx(pi * pi / 6).epsilon(1e-12));
    CHECK(hurwitz_zeta(4.0, 1.0) == doctest::Approx(std::pow(pi, 4) / 90).epsilon(1e-12));
    CHECK(hurwitz_zeta(2.0, 2.0) == doctest::Approx(pi * pi / 6 - 1).epsilon(1e-12));
    CHECK(hurwitz_zeta(3.0, 0.5) == doctest::Approx(7 * 1.2020569031595942).epsilon(1e-12));
    CHECK(hurwitz_zeta(1.5, 1.0) == doctest::Approx(2.612375348685488).epsilon(1e-12));
    CHECK_THROWS_AS(hurwitz_zeta(1.0, 1.0), StatsError);
}

TEST_CASE("Zipf tail exponent is recovered") {
    for (std::uint64_t seed : {1, 2, 3}) {
        std::mt19937_64 g(seed);
        std::vector<std::uint64_t> s(10000);
        for (auto& v : s) v = oracle::sample_zipf(1.8, g);
        const auto t = avalanche_tail_stats(s);
        CHECK(std::abs(t.exponent - 1.8) <= 0.15);
        CHECK(t.s_min == 2);
        CHECK(t.decades > 2.0);
    }
}

TEST_CASE("tail statistics preconditions") {
    CHECK_THROWS_AS(avalanche_tail_stats(std::vector<std::uint64_t>(500, 7)), StatsError);
    CHECK_THROWS_AS(avalanche_tail_stats(std::vector<std::uint64_t>(99, 7)), StatsError);
    CHECK_THROWS_AS(avalanche_tail_stats(std::vector<std::uint64_t>(500, 1)), StatsError);
    std::vector<std::uint64_t> mixed(200, 1);
    mixed.push_back(10);
    mixed.push_back(100);
    mixed.insert(mixed.end(), 50, 0);
    const auto t = avalanche_tail_stats(mixed);
    CHECK(t.decades == doctest::Approx(2.0));
    CHECK(t.s_min == 10);
    CHECK(t.tail_count == 2);
}
