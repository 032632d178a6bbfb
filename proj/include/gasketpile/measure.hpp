#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <cstdint>
#include <vector>

#include "gasketpile/construct.hpp"

namespace gp {

/// Always-reduced exact rational. Cell integrals produce denominators that
/// are powers of 3 (times the dyadic part of any real-valued inputs).
using ExactRational = boost::multiprecision::cpp_rational;

/// Exact conversion: every finite double is a dyadic rational.
ExactRational to_rational(double x);

/// Decimal rendering with the given number of significant digits.
std::string decimal_string(const ExactRational& r, int significant_digits);

/// Piecewise constant continuation f^triangle of a vertex function on SG_n:
/// constant on the interior of each depth-(n+1) cell, taking the value of
/// the unique SG_n vertex among that cell's corners.
struct ContinuationView {
    ValueMap map;

    int level() const { return map.graph->level(); }
};

ContinuationView make_view(ValueMap v);
ContinuationView make_view(const SandpileConfig& c);

/// Point of SG in slanted coordinates: Euclidean position is
/// p*(1,0) + q*(1/2, sqrt(3)/2). Finite words produce dyadic entries, so
/// all ball tests below stay exact.
struct DyadicPoint {
    ExactRational p, q;
};

/// psi_u(base) with the first letter applied innermost.
DyadicPoint apply_word(const CellWord& u, DyadicPoint base);

/// Literal ball evaluation: intersect the closed ball of radius 2^-(n+1)
/// around the point with the SG_n vertex set, exactly. One hit gives that
/// vertex's value; two hits resolve by smaller x-coordinate (never equal:
/// no SG edge is vertical). Zero hits or three or more are hard errors.
double continuation_at_point(const ContinuationView& view,
                             const DyadicPoint& point);

/// Exact integral of the continuation over the cell psi_w(SG):
/// 3^-(n+1) * sum_v m_w(v) * f(v), with m_w the elementary-triangle corner
/// multiplicity. Requires |w| <= n.
ExactRational cell_integral(const ContinuationView& view, const CellWord& w);

struct MonteCarloResult {
    double estimate = 0;
    double std_error = 0;
    std::uint64_t samples = 0;
};

/// Unbiased sampling oracle for cell_integral via the literal ball
/// definition: uniform words u of depth n+6, points psi_w(psi_u(u_1)).
/// Deterministic for a fixed seed.
MonteCarloResult monte_carlo_integral(const ContinuationView& view,
                                      const CellWord& w, std::uint64_t samples,
                                      std::uint64_t seed);

/// Families whose scaling limits the convergence tables witness.
enum class Family { IdNormal, IdTop, IdTwoCorner, M, F };

struct FamilySpec {
    Family family = Family::IdNormal;
    double a = 3, b = 3, c = 2;  // inner letters, F only
    double x = 0, y = 0, z = 0;  // corner values, M and F
};

struct ConvergenceRow {
    int level = 0;
    CellWord cell;
    ExactRational integral, target, abs_error;
};

/// One row per level: exact integral over psi_w(SG) against the exact limit
/// target, which is 3^-|w| times 8/3 (id_normal, id_two_corner, M), 2
/// (id_top), or (a+b+c)/3 (f).
std::vector<ConvergenceRow> convergence_table(const FamilySpec& spec,
                                              const CellWord& w, int level_lo,
                                              int level_hi);

/// The family member at one level (engine identity for the id families,
/// pure construction for M and f).
ContinuationView family_view(const FamilySpec& spec, int level);

/// The family's weak* limit over the whole space.
ExactRational family_limit(const FamilySpec& spec);

}  // namespace gp
