#pragma once

#include <cstdint>
#include <vector>

#include "gasketpile/graph.hpp"

namespace gp::detail {

/// Vectorized stabilizer exploiting the 27 translated copies of the
/// level-(n-3) block inside SG_n: block interiors share one adjacency
/// template, so a Gauss-Seidel sweep runs as 32-lane integer ops with a
/// small scalar skeleton pass for cell-corner vertices.
///
/// Handles graphs with level in [7, 12] and initial heights of magnitude
/// below 2^24 (interior degrees are uniformly 4 there, and all counters
/// fit int32). Heights are signed so callers may pre-topple a lower bound
/// of the odometer first: sites driven negative never fire and are refilled
/// by their neighbors. Returns false when the graph or config is out of
/// range; heights and odometer are then untouched.
bool lane_stabilize(const GasketGraph& g, std::vector<std::int64_t>& heights,
                    std::vector<std::uint64_t>& odometer,
                    std::uint64_t* topple_total);

}  // namespace gp::detail
