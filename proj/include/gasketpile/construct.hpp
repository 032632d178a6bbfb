#pragma once

#include <vector>

#include "gasketpile/engine.hpp"
#include "gasketpile/graph.hpp"

namespace gp {

/// Shared immutable graph instances, keyed by (level, sink). ValueMaps and
/// configs built by this module point into the cache, so they stay valid for
/// the whole process. Thread-safe.
const GasketGraph& cached_gasket(int level, SinkSpec sink = SinkSpec::Normal);

/// Real-valued function on the vertices of one graph, canonical order.
/// Integer-valued for M_n and assembled identities; to_config checks that.
struct ValueMap {
    const GasketGraph* graph = nullptr;
    std::vector<double> values;

    double sum() const;
};

/// Rotation action on value maps. plus composed with plus acts like minus.
enum class RotationTag { Id, Plus, Minus };

/// Pull-back along the 120-degree automorphism: Plus gives result(w) =
/// v(rho^-1(w)) with rho the counterclockwise map, so the rendered picture
/// turns counterclockwise; Minus uses rho itself. Requires a rotatable graph.
ValueMap rotate_values(const ValueMap& v, RotationTag tag);

/// The generalized family f_n(x,y,z) with inner letters (a,b,c): base case
/// places (bottom-middle, left-middle, right-middle) = (a,b,c) and corners
/// (x,y,z); recursion splits into blocks f_{n-1}(x,a,b), f_{n-1}(a,y,c),
/// f_{n-1}(b,c,z). Cut vertices receive the shared value; any disagreement
/// throws (it would mean the recursion tables are transcribed wrong).
ValueMap build_f(int n, double a, double b, double c, double x, double y,
                 double z);

/// M_n(x,y,z): the (a,b,c) = (3,3,2) specialization of f_n.
ValueMap build_M(int n, int x, int y, int z);

/// Identity candidate on SG_m assembled without dynamics: lower-left block
/// M_{m-1}(2,2,2), lower-right its Plus rotation, upper its Minus rotation.
/// Requires m >= 2; asserts cut-value agreement.
ValueMap assemble_identity(int m);

/// iota-combination: three maps on SG_{n-1}, rotated by (alpha, beta, gamma)
/// and placed as (lower-left, lower-right, upper) blocks of SG_n; cut
/// vertices get the SUM of the two meeting blocks (unlike M-assembly).
ValueMap combine_iota(const ValueMap& fa, const ValueMap& gb,
                      const ValueMap& hc, RotationTag alpha, RotationTag beta,
                      RotationTag gamma);

/// Conversions to/from engine configs. to_config requires every value to be
/// a non-negative integer and throws otherwise.
SandpileConfig to_config(const ValueMap& v);
ValueMap from_config(const SandpileConfig& c);

}  // namespace gp
