#pragma once

#include <cstdint>
#include <vector>

#include "gasketpile/graph.hpp"

namespace gp {

/// Chip heights on the non-sink vertices of one graph, canonical order.
/// Unsigned 64-bit so intermediate sums like 2*eta_max + zeta need no
/// overflow handling in the hot loop.
struct SandpileConfig {
    const GasketGraph* graph = nullptr;
    std::vector<std::uint64_t> heights;

    bool stable() const;
    std::uint64_t total_chips() const;
};

/// Per-vertex toppling counts of one stabilization. Satisfies
/// input - Laplacian * topple_counts = output, componentwise.
struct Odometer {
    std::vector<std::uint64_t> topple_counts;
};

struct StabilizeResult {
    SandpileConfig config;
    Odometer odometer;
};

/// Result of the burning test. recurrent iff every non-sink vertex burned;
/// burn_order lists vertex indices in the order the fire reached them.
struct BurnReport {
    bool recurrent = false;
    std::vector<std::int32_t> burn_order;
};

/// Toppling schedules. All yield identical results (abelian property);
/// Auto picks the fastest available for the graph at hand.
enum class ToppleOrder { Auto, Fifo, Lifo, RandomOrder, Sweep, ParallelRounds };

/// eta_max: height degree(v) - 1 everywhere.
SandpileConfig max_config(const GasketGraph& g);

/// Single legal toppling at vertex v. Throws if heights[v] < degree(v).
SandpileConfig topple(const SandpileConfig& c, std::int32_t v);

/// Exhaustive legal toppling until stable. Stable input passes through with
/// a zero odometer. Throws if the total toppling count exceeds the defensive
/// cap of 10^12 (cannot happen on a well-formed sinked graph).
StabilizeResult stabilize(const SandpileConfig& c,
                          ToppleOrder order = ToppleOrder::Auto,
                          std::uint64_t seed = 0);

/// Group operation: stabilize(a + b). Both configs must share one graph.
SandpileConfig group_add(const SandpileConfig& a, const SandpileConfig& b);

/// Dhar burning test. Requires a stable config.
BurnReport is_recurrent(const SandpileConfig& c);

/// Identity element of the sandpile group, via stabilize(2*eta_max),
/// subtract, stabilize again. Self-verifies recurrence and neutrality on
/// three sampled recurrent configs; a verification failure is an engine
/// bug and throws. Pass verify=false to skip the (cheap) check.
SandpileConfig identity(const GasketGraph& g, bool verify = true);

/// (eta_max + zeta)^o for zeta with i.i.d. heights uniform in {0..3} from a
/// seeded deterministic generator. Always recurrent.
SandpileConfig random_recurrent(const GasketGraph& g, std::uint64_t seed);

}  // namespace gp
