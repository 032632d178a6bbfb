#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <vector>

#include "gasketpile/graph.hpp"

namespace gp {

using BigInt = boost::multiprecision::cpp_int;

/// Reduced graph Laplacian (sink row/column deleted): diag(degree) minus the
/// internal adjacency, over non-sink vertices in canonical order.
std::vector<std::vector<BigInt>> reduced_laplacian(const GasketGraph& g);

/// Exact determinant by fraction-free Gaussian elimination (Bareiss).
/// Consumes the matrix. Empty matrix has determinant 1.
BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m);

/// Sandpile group order: det of the reduced Laplacian (matrix-tree theorem:
/// the number of spanning trees of the sinked graph).
BigInt group_order(const GasketGraph& g);

/// Exact solution x of (reduced Laplacian) x = b, by nested dissection
/// along the cell tree: a gasket cell meets the rest of the graph only in
/// its three corners, so every Schur complement is 3x3, and cells of equal
/// size share one complement. O(V) small rational operations.
std::vector<boost::multiprecision::cpp_rational> solve_reduced_laplacian(
    const GasketGraph& g, const std::vector<std::int64_t>& b);

/// Guaranteed pointwise lower bound on the stabilization odometer of
/// `heights`: u0 = max(0, floor(G (h - (deg - 1)))) with G the inverse of
/// the reduced Laplacian. G is entrywise nonnegative (M-matrix inverse)
/// and the stable result is <= deg - 1 everywhere, so
/// G (h - (deg-1)) <= G (h - result) = odometer, componentwise. Any
/// u0 <= odometer may be toppled up front: by the least action principle
/// the legal stabilization of h - L u0 ends in exactly the stabilization
/// of h, with odometer (true odometer) - u0.
std::vector<std::uint64_t> odometer_lower_bound(
    const GasketGraph& g, const std::vector<std::uint64_t>& heights);

}  // namespace gp
