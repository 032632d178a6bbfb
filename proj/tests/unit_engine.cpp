#include <random>

#include "doctest.h"
#include "gasketpile/construct.hpp"
#include "gasketpile/engine.hpp"
#include "gasketpile/laplacian.hpp"

using namespace gp;

namespace {

// input - Laplacian * odometer = output, componentwise, in exact integers.
void check_laplacian_identity(const SandpileConfig& in,
                              const StabilizeResult& r) {
    const GasketGraph& g = *in.graph;
    const auto& u = r.odometer.topple_counts;
    for (std::size_t v = 0; v < in.heights.size(); ++v) {
        BigInt expect = in.heights[v];
        expect -= BigInt(g.degree(v)) * u[v];
        for (const auto& e : g.neighbors(v))
            expect += BigInt(e.multiplicity) * u[e.to];
        CHECK(expect == BigInt(r.config.heights[v]));
    }
}

SandpileConfig seeded_config(const GasketGraph& g, std::uint64_t seed,
                             std::uint64_t lo, std::uint64_t span) {
    std::mt19937_64 rng(seed);
    SandpileConfig c{&g, std::vector<std::uint64_t>(g.vertex_count())};
    for (auto& h : c.heights) h = lo + rng() % span;
    return c;
}

}  // namespace

TEST_SUITE("engine") {

TEST_CASE("all-fours on SG_1 stabilizes and satisfies the Laplacian identity") {
    const GasketGraph& g = cached_gasket(1);
    SandpileConfig c{&g, std::vector<std::uint64_t>(g.vertex_count(), 4)};
    const StabilizeResult r = stabilize(c, ToppleOrder::Fifo);
    CHECK(r.config.stable());
    for (auto t : r.odometer.topple_counts) CHECK(t >= 1);
    check_laplacian_identity(c, r);
}

TEST_CASE("stable input passes through with a zero odometer") {
    const GasketGraph& g = cached_gasket(2);
    const SandpileConfig c = max_config(g);
    const StabilizeResult r = stabilize(c);
    CHECK(r.config.heights == c.heights);
    for (auto t : r.odometer.topple_counts) CHECK(t == 0);
}

TEST_CASE("single toppling moves chips along edges") {
    const GasketGraph& g = cached_gasket(1);
    SandpileConfig c{&g, std::vector<std::uint64_t>(g.vertex_count(), 0)};
    const std::int32_t mid = g.index_of({1, 0});
    c.heights[mid] = 5;
    const SandpileConfig after = topple(c, mid);
    CHECK(after.heights[mid] == 1);
    std::uint64_t moved = 0;
    for (const auto& e : g.neighbors(mid)) {
        CHECK(after.heights[e.to] ==
              static_cast<std::uint64_t>(e.multiplicity));
        moved += e.multiplicity;
    }
    CHECK(moved == 4);  // interior vertex: no sink edges
    CHECK_THROWS_AS(topple(after, mid), std::invalid_argument);
}

TEST_CASE("all toppling orders agree on result and odometer") {
    const GasketGraph& g = cached_gasket(3);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const SandpileConfig c = seeded_config(g, seed, 0, 12);
        const StabilizeResult ref = stabilize(c, ToppleOrder::Fifo);
        check_laplacian_identity(c, ref);
        for (ToppleOrder order : {ToppleOrder::Lifo, ToppleOrder::RandomOrder,
                                  ToppleOrder::Sweep, ToppleOrder::ParallelRounds}) {
            const StabilizeResult alt = stabilize(c, order, seed);
            CHECK(alt.config.heights == ref.config.heights);
            CHECK(alt.odometer.topple_counts == ref.odometer.topple_counts);
        }
    }
}

TEST_CASE("burning test separates recurrent from non-recurrent") {
    const GasketGraph& g = cached_gasket(1);
    const SandpileConfig zero{&g, std::vector<std::uint64_t>(g.vertex_count(), 0)};
    CHECK_FALSE(is_recurrent(zero).recurrent);
    const BurnReport full = is_recurrent(max_config(g));
    CHECK(full.recurrent);
    CHECK(full.burn_order.size() == g.vertex_count());

    SandpileConfig unstable = max_config(g);
    unstable.heights[0] += 1;
    CHECK_THROWS_AS(is_recurrent(unstable), std::invalid_argument);
}

TEST_CASE("identity is recurrent, idempotent and neutral") {
    for (int level : {2, 3}) {
        const GasketGraph& g = cached_gasket(level);
        const SandpileConfig id = identity(g);  // self-verifying
        CHECK(is_recurrent(id).recurrent);
        CHECK(group_add(id, id).heights == id.heights);
        for (std::uint64_t seed : {7ULL, 8ULL, 9ULL}) {
            const SandpileConfig r = random_recurrent(g, seed);
            CHECK(is_recurrent(r).recurrent);
            CHECK(group_add(id, r).heights == r.heights);
        }
    }
}

TEST_CASE("identity works on the alternate sinks") {
    for (SinkSpec sink : {SinkSpec::TopCorner, SinkSpec::TopAndRightCorners}) {
        const GasketGraph& g = cached_gasket(3, sink);
        const SandpileConfig id = identity(g);
        CHECK(is_recurrent(id).recurrent);
    }
}

TEST_CASE("group_add rejects mismatched graphs") {
    const SandpileConfig a = max_config(cached_gasket(2));
    const SandpileConfig b = max_config(cached_gasket(3));
    CHECK_THROWS_AS(group_add(a, b), std::invalid_argument);
}

TEST_CASE("group order matches hand determinants") {
    // SG_0 normal: triangle, every degree 4
    CHECK(group_order(cached_gasket(0)) == 50);
    // frozen independent oracle (exhaustive burning count agrees, see below)
    CHECK(group_order(cached_gasket(1)) == 1444);
    // 1x1 and empty determinants
    CHECK(bareiss_determinant({{BigInt(7)}}) == 7);
    CHECK(bareiss_determinant({}) == 1);
}

TEST_CASE("burning count over all stable configs equals the group order") {
    const GasketGraph& g = cached_gasket(1);
    REQUIRE(g.vertex_count() == 6);
    std::uint64_t count = 0;
    SandpileConfig c{&g, std::vector<std::uint64_t>(6, 0)};
    for (std::uint64_t code = 0; code < 4096; ++code) {
        std::uint64_t rest = code;
        for (std::size_t v = 0; v < 6; ++v, rest /= 4) c.heights[v] = rest % 4;
        count += is_recurrent(c).recurrent;
    }
    CHECK(BigInt(count) == group_order(g));
    CHECK(count == 1444);
}

TEST_CASE("nested-dissection solve inverts the reduced Laplacian exactly") {
    std::mt19937_64 rng(7);
    for (int level : {0, 1, 2, 3}) {
        for (SinkSpec sink :
             {SinkSpec::Normal, SinkSpec::TopCorner, SinkSpec::TopAndRightCorners}) {
            if (level < 1 && sink != SinkSpec::Normal) continue;
            const GasketGraph& g = cached_gasket(level, sink);
            std::vector<std::int64_t> b(g.vertex_count());
            for (auto& v : b) v = static_cast<std::int64_t>(rng() % 21) - 10;
            const auto x = solve_reduced_laplacian(g, b);
            for (std::size_t i = 0; i < b.size(); ++i) {
                boost::multiprecision::cpp_rational row = x[i] * g.degree(i);
                for (const auto& e : g.neighbors(i))
                    row -= x[e.to] * e.multiplicity;
                CHECK(row == b[i]);
            }
        }
    }
}

TEST_CASE("odometer lower bound never exceeds the true odometer") {
    const GasketGraph& g = cached_gasket(4);
    SandpileConfig c = max_config(g);
    for (auto& h : c.heights) h *= 2;
    const auto u0 = odometer_lower_bound(g, c.heights);
    const StabilizeResult truth = stabilize(c, ToppleOrder::Fifo);
    std::uint64_t covered = 0, total = 0;
    for (std::size_t v = 0; v < u0.size(); ++v) {
        CHECK(u0[v] <= truth.odometer.topple_counts[v]);
        covered += u0[v];
        total += truth.odometer.topple_counts[v];
    }
    CHECK(covered * 2 > total);  // the bound does real work
}

TEST_CASE("lane kernel agrees with the generic engine at level 7") {
    const GasketGraph& g = cached_gasket(7);
    SandpileConfig c = max_config(g);
    std::mt19937_64 rng(42);
    for (auto& h : c.heights) h += rng() & 3;
    const StabilizeResult fast = stabilize(c, ToppleOrder::Auto);
    const StabilizeResult slow = stabilize(c, ToppleOrder::Fifo);
    CHECK(fast.config.heights == slow.config.heights);
    CHECK(fast.odometer.topple_counts == slow.odometer.topple_counts);
    check_laplacian_identity(c, fast);
}

TEST_CASE("lane kernel agrees on the alternate sinks") {
    for (SinkSpec sink : {SinkSpec::TopCorner, SinkSpec::TopAndRightCorners}) {
        const GasketGraph& g = cached_gasket(7, sink);
        SandpileConfig c = max_config(g);
        for (auto& h : c.heights) h += 3;
        const StabilizeResult fast = stabilize(c, ToppleOrder::Auto);
        const StabilizeResult slow = stabilize(c, ToppleOrder::Lifo);
        CHECK(fast.config.heights == slow.config.heights);
        CHECK(fast.odometer.topple_counts == slow.odometer.topple_counts);
    }
}

}  // TEST_SUITE
