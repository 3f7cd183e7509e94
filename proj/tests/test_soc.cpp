#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "obcfp/soc.hpp"

using namespace obcfp;

namespace {

InfoField make_field(std::size_t n, double alpha = 0.95) {
    InfoField f;
    f.level.assign(n, 0.0);
    f.threshold = 1.0;
    f.alpha = alpha;
    return f;
}

auto streams(std::uint64_t seed, std::uint64_t step) {
    return [=](NodeId i) { return substream(seed, Stream::Drive, step, i); };
}

}  // namespace

TEST_CASE("drive increments lie in [0, threshold - max]") {
    InfoField f = make_field(100);
    Rng init(1);
    for (auto& v : f.level) v = init.uniform(0.0, 0.8);
    f.level[42] = 0.8;
    const auto before = f.level;
    drive(f, streams(1, 1));
    for (std::size_t i = 0; i < f.level.size(); ++i) {
        const double inc = f.level[i] - before[i];
        CHECK(inc >= 0.0);
        CHECK(inc <= 0.2 + 1e-12);
    }
    // The trader holding the maximum is brought exactly to the threshold.
    CHECK(f.level[42] == 1.0);
    CHECK(f.max() == 1.0);
}

TEST_CASE("drive at the threshold adds nothing") {
    InfoField f = make_field(4);
    f.level = {0.3, 1.0, 0.5, 0.0};
    const auto before = f.level;
    drive(f, streams(1, 1));
    CHECK(f.level == before);
}

TEST_CASE("drive draws independently per trader") {
    InfoField f = make_field(2);
    f.level = {0.5, 0.8};
    drive(f, streams(3, 9));
    const double inc0 = f.level[0] - 0.5;
    CHECK(inc0 >= 0.0);
    CHECK(inc0 < 0.2);
    CHECK(f.level[1] == 1.0);
    // Same streams give the same increments regardless of the other trader.
    InfoField g = make_field(3);
    g.level = {0.5, 0.8, 0.1};
    drive(g, streams(3, 9));
    CHECK(g.level[0] == f.level[0]);
}

TEST_CASE("topple on an interior trader") {
    const auto net = build_lattice(3);
    InfoField f = make_field(9);
    f.level[4] = 1.1;
    topple(f, 4, net);
    CHECK(f.level[4] == 0.0);
    for (NodeId j : {1u, 3u, 5u, 7u}) CHECK(f.level[j] == doctest::Approx(0.26125));
    CHECK(f.level[0] == 0.0);
}

TEST_CASE("topple on a corner divides by its own degree") {
    const auto net = build_lattice(3);
    InfoField f = make_field(9);
    f.level[0] = 1.2;
    topple(f, 0, net);
    CHECK(f.level[1] == doctest::Approx(0.57));
    CHECK(f.level[3] == doctest::Approx(0.57));
}

TEST_CASE("topple conserves info when alpha = 1 and dissipates (1 - alpha) I otherwise") {
    const auto net = build_lattice(5);
    for (double alpha : {1.0, 0.95, 0.5}) {
        InfoField f = make_field(25, alpha);
        Rng r(4);
        for (auto& v : f.level) v = r.uniform(0.0, 0.9);
        f.level[12] = 1.3;
        const double before = f.total();
        topple(f, 12, net);
        CHECK(f.total() - before == doctest::Approx(-(1.0 - alpha) * 1.3).epsilon(1e-9));
    }
}

TEST_CASE("topple below threshold is a logic error") {
    const auto net = build_lattice(3);
    InfoField f = make_field(9);
    f.level[4] = 0.5;
    CHECK_THROWS_AS(topple(f, 4, net), std::logic_error);
}

TEST_CASE("quiescent field relaxes to nothing") {
    const auto net = build_lattice(3);
    InfoField f = make_field(9);
    f.level.assign(9, 0.5);
    std::vector<Status> st(9, Status::Bidder);
    std::vector<TraderKind> kinds(9, TraderKind::Chartist);
    Rng r(1);
    CHECK(relax(f, net, st, kinds, r, 1000).empty());
    CHECK(f.level == std::vector<double>(9, 0.5));
}

TEST_CASE("single toppling") {
    const auto net = build_lattice(3);
    InfoField f = make_field(9);
    f.level[4] = 1.05;
    for (NodeId j : {1u, 3u, 5u, 7u}) f.level[j] = 0.5;  // below 1 - 0.95 * 1.05 / 4
    std::vector<Status> st(9, Status::Holder);
    st[4] = Status::Asker;
    std::vector<TraderKind> kinds(9, TraderKind::Fundamentalist);
    Rng r(1);
    const auto reports = relax(f, net, st, kinds, r, 1000, 7);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].size == 1);
    CHECK(reports[0].step == 7);
    CHECK(reports[0].initiators == std::vector<NodeId>{4});
    CHECK(reports[0].participants.empty());
    CHECK(std::count(st.begin(), st.end(), Status::Asker) == 1);
}

TEST_CASE("two-step cascade imitates the initiator") {
    const auto net = build_lattice(3);
    InfoField f = make_field(9);
    f.level[4] = 1.05;
    f.level[1] = 0.99;
    std::vector<Status> st(9, Status::Holder);
    st[4] = Status::Bidder;
    st[1] = Status::Asker;
    std::vector<TraderKind> kinds(9, TraderKind::Chartist);
    Rng r(1);
    const auto reports = relax(f, net, st, kinds, r, 1000);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].size == 2);
    CHECK(reports[0].imitated == Status::Bidder);
    CHECK(reports[0].participants == std::vector<NodeId>{1});
    CHECK(st[1] == Status::Bidder);
    CHECK(f.max() < 1.0);
}

TEST_CASE("random traders absorb without passing on or imitating") {
    const auto net = build_lattice(3);
    InfoField f = make_field(9);
    f.level[4] = 1.05;
    f.level[1] = 0.99;  // a random trader pushed over threshold
    f.level[0] = 0.9;   // neighbour of 1 only among the supercritical candidates
    std::vector<Status> st(9, Status::Holder);
    st[4] = Status::Bidder;
    std::vector<TraderKind> kinds(9, TraderKind::Fundamentalist);
    kinds[1] = TraderKind::Random;
    Rng r(1);
    const auto reports = relax(f, net, st, kinds, r, 1000);
    REQUIRE(reports.size() == 1);
    CHECK(reports[0].size == 1);
    CHECK(f.level[1] == 0.0);
    CHECK(f.level[0] == 0.9);
    CHECK(st[1] == Status::Holder);
    CHECK(reports[0].participants.empty());
}

TEST_CASE("supercritical random traders reset without a report") {
    const auto net = build_lattice(3);
    InfoField f = make_field(9);
    f.level[4] = 1.5;
    std::vector<Status> st(9, Status::Holder);
    std::vector<TraderKind> kinds(9, TraderKind::Random);
    Rng r(1);
    CHECK(relax(f, net, st, kinds, r, 1000).empty());
    CHECK(f.total() == 0.0);
}

TEST_CASE("relaxation invariants on a driven field") {
    const auto base = build_lattice(20);
    Rng nr(2);
    const auto net = rewire(base, 0.02, nr);
    const std::size_t n = net.size();
    std::vector<TraderKind> kinds(n);
    Rng kr(3);
    for (auto& k : kinds) k = static_cast<TraderKind>(kr.below(3));
    InfoField f = make_field(n);
    Rng ir(4);
    for (auto& v : f.level) v = ir.uniform(0.0, 1.0);

    for (std::uint64_t s = 1; s <= 2000; ++s) {
        drive(f, streams(5, s));
        std::vector<Status> st(n);
        Rng sr = substream(5, Stream::Expectation, s);
        for (auto& x : st) x = static_cast<Status>(sr.below(3));
        const auto before = st;
        Rng cr = substream(5, Stream::Cascade, s);
        const auto reports = relax(f, net, st, kinds, cr, 10'000'000, static_cast<std::int64_t>(s));
        REQUIRE(f.max() < 1.0);
        for (const auto& rep : reports) {
            CHECK(rep.size >= rep.initiators.size());
            for (NodeId p : rep.participants) CHECK(kinds[p] != TraderKind::Random);
        }
        for (std::size_t i = 0; i < n; ++i)
            if (kinds[i] == TraderKind::Random) CHECK(st[i] == before[i]);
        Rng again = substream(6, Stream::Cascade, s);
        CHECK(relax(f, net, st, kinds, again, 10'000'000).empty());
    }
}

TEST_CASE("conservative runaway hits the cap") {
    const auto net = build_lattice(2);
    InfoField f = make_field(4, 1.0);
    f.level.assign(4, 1.0);
    std::vector<Status> st(4, Status::Holder);
    std::vector<TraderKind> kinds(4, TraderKind::Chartist);
    Rng r(1);
    CHECK_THROWS_AS(relax(f, net, st, kinds, r, 1000), AvalancheCapExceeded);
}
