#include "gasketpile/measure.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace gp {

namespace {

using BigInteger = boost::multiprecision::cpp_int;

BigInteger pow3(int k) {
    BigInteger r = 1;
    for (int i = 0; i < k; ++i) r *= 3;
    return r;
}

int decimal_digits(const BigInteger& x) {
    return static_cast<int>(x.str().size());
}

}  // namespace

ExactRational to_rational(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
    return ExactRational(x);  // exact: doubles are dyadic rationals
}

std::string decimal_string(const ExactRational& r, int significant_digits) {
    if (r == 0) return "0";
    const bool neg = r < 0;
    BigInteger num = boost::multiprecision::abs(numerator(r));
    const BigInteger den = denominator(r);

    // Decimal exponent e with 10^e <= num/den < 10^(e+1).
    int e = decimal_digits(num) - decimal_digits(den);
    BigInteger p10 = 1;
    for (int i = 0; i < std::abs(e); ++i) p10 *= 10;
    if (e >= 0 ? num < den * p10 : num * p10 < den) e -= 1;

    // Round num/den * 10^(sig-1-e) half-up to an integer with sig digits.
    const int shift = significant_digits - 1 - e;
    BigInteger n2 = num, d2 = den;
    for (int i = 0; i < std::abs(shift); ++i) (shift >= 0 ? n2 : d2) *= 10;
    BigInteger scaled = (2 * n2 + d2) / (2 * d2);
    if (decimal_digits(scaled) > significant_digits) {
        scaled /= 10;
        e += 1;
    }

    std::string digits = scaled.str();
    std::string out = neg ? "-" : "";
    if (e >= 0) {
        if (e + 1 >= static_cast<int>(digits.size())) {
            out += digits;
            out.append(static_cast<std::size_t>(e + 1) - digits.size(), '0');
        } else {
            out += digits.substr(0, static_cast<std::size_t>(e + 1)) + "." +
                   digits.substr(static_cast<std::size_t>(e + 1));
        }
    } else {
        out += "0.";
        out.append(static_cast<std::size_t>(-e - 1), '0');
        out += digits;
    }
    return out;
}

ContinuationView make_view(ValueMap v) { return ContinuationView{std::move(v)}; }

ContinuationView make_view(const SandpileConfig& c) {
    return ContinuationView{from_config(c)};
}

DyadicPoint apply_word(const CellWord& u, DyadicPoint base) {
    // first letter innermost: apply psi_{u_1} first
    for (auto letter : u.letters) {
        switch (letter) {
            case 1: base = {base.p / 2, base.q / 2}; break;
            case 2: base = {(base.p + 1) / 2, base.q / 2}; break;
            case 3: base = {base.p / 2, (base.q + 1) / 2}; break;
            default: throw std::invalid_argument("bad cell letter");
        }
    }
    return base;
}

double continuation_at_point(const ContinuationView& view,
                             const DyadicPoint& point) {
    const GasketGraph& g = *view.map.graph;
    // Scale by 2^n so vertices sit at integer coordinates; the ball radius
    // 2^-(n+1) becomes 1/2 and the squared-distance threshold 1/4. The
    // quadratic form p^2 + pq + q^2 is the Euclidean metric in slanted
    // coordinates. Everything runs over a common denominator D in plain
    // big integers: rational normalization per vertex would dominate the
    // Monte Carlo oracle's runtime.
    const std::int64_t s = g.scale();
    const ExactRational pr = point.p * s, qr = point.q * s;
    const BigInteger pd = denominator(pr), qd = denominator(qr);
    const BigInteger den = boost::multiprecision::lcm(pd, qd);
    const BigInteger pn = numerator(pr) * (den / pd);
    const BigInteger qn = numerator(qr) * (den / qd);
    const BigInteger den2 = den * den;

    std::int32_t hits[2] = {-1, -1};
    int hit_count = 0;
    BigInteger dp, dq, t, d2;
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
        const VertexKey v = g.vertex(i);
        // d^2 = (dp + dq/2)^2 + (3/4) dq^2, so both |dq| <= 1 and
        // |dp + dq/2| <= 1/2 are necessary for d^2 <= 1/4 -- cheap rejects
        dq = qn - v.q * den;
        if (boost::multiprecision::abs(dq) > den) continue;
        dp = pn - v.p * den;
        t = 2 * dp + dq;
        if (boost::multiprecision::abs(t) > den) continue;
        d2 = dp * dp + dp * dq + dq * dq;
        if (4 * d2 <= den2) {
            if (hit_count >= 2)
                throw std::logic_error("ball test: three or more vertex hits");
            hits[hit_count++] = static_cast<std::int32_t>(i);
        }
    }
    if (hit_count == 0)
        throw std::runtime_error("point outside resolution reach");
    if (hit_count == 1) return view.map.values[hits[0]];

    // Tie-break: smaller x-coordinate. x = p + q/2, compared via 2p + q.
    const VertexKey a = g.vertex(hits[0]), b = g.vertex(hits[1]);
    const std::int64_t xa = 2 * a.p + a.q, xb = 2 * b.p + b.q;
    if (xa == xb)
        throw std::logic_error("ball test: tie with equal x-coordinates");
    return view.map.values[xa < xb ? hits[0] : hits[1]];
}

ExactRational cell_integral(const ContinuationView& view, const CellWord& w) {
    const GasketGraph& g = *view.map.graph;
    const auto mult = corner_multiplicity(g, w);  // validates |w| <= n
    ExactRational sum = 0;
    for (const auto& [v, m] : mult)
        sum += ExactRational(m) * to_rational(view.map.values[v]);
    return sum / ExactRational(pow3(g.level() + 1));
}

MonteCarloResult monte_carlo_integral(const ContinuationView& view,
                                      const CellWord& w, std::uint64_t samples,
                                      std::uint64_t seed) {
    const GasketGraph& g = *view.map.graph;
    cell_region(w, g.level());  // same resolution check as cell_integral
    if (samples == 0) throw std::invalid_argument("samples must be positive");

    const int depth = g.level() + 6;
    std::mt19937_64 rng(seed);
    double sum = 0, sumsq = 0;
    CellWord word;
    for (std::uint64_t i = 0; i < samples; ++i) {
        word.letters.clear();
        for (int d = 0; d < depth; ++d)
            word.letters.push_back(static_cast<std::uint8_t>(1 + rng() % 3));
        word.letters.insert(word.letters.end(), w.letters.begin(),
                            w.letters.end());
        const double v = continuation_at_point(view, apply_word(word, {0, 0}));
        sum += v;
        sumsq += v * v;
    }
    const double n = static_cast<double>(samples);
    const double mean = sum / n;
    const double var = samples > 1 ? std::max(0.0, (sumsq - n * mean * mean) / (n - 1)) : 0.0;
    const double cell_measure = std::pow(3.0, -static_cast<double>(w.depth()));
    return {mean * cell_measure, std::sqrt(var / n) * cell_measure, samples};
}

ContinuationView family_view(const FamilySpec& spec, int level) {
    switch (spec.family) {
        case Family::IdNormal:
            // equals the engine identity by the structure theorem (enforced
            // by its own acceptance test) and costs no dynamics
            return make_view(assemble_identity(level));
        case Family::IdTop:
            return make_view(
                identity(cached_gasket(level, SinkSpec::TopCorner), false));
        case Family::IdTwoCorner:
            return make_view(identity(
                cached_gasket(level, SinkSpec::TopAndRightCorners), false));
        case Family::M:
            return make_view(build_f(level, 3, 3, 2, spec.x, spec.y, spec.z));
        case Family::F:
            return make_view(
                build_f(level, spec.a, spec.b, spec.c, spec.x, spec.y, spec.z));
    }
    throw std::logic_error("unhandled family");
}

ExactRational family_limit(const FamilySpec& spec) {
    switch (spec.family) {
        case Family::IdNormal:
        case Family::IdTwoCorner:
        case Family::M:
            return ExactRational(8, 3);
        case Family::IdTop:
            return ExactRational(2);
        case Family::F:
            return (to_rational(spec.a) + to_rational(spec.b) +
                    to_rational(spec.c)) /
                   3;
    }
    throw std::logic_error("unhandled family");
}

std::vector<ConvergenceRow> convergence_table(const FamilySpec& spec,
                                              const CellWord& w, int level_lo,
                                              int level_hi) {
    const bool is_identity = spec.family == Family::IdNormal ||
                             spec.family == Family::IdTop ||
                             spec.family == Family::IdTwoCorner;
    const int min_level =
        std::max(static_cast<int>(w.depth()) + (is_identity ? 1 : 0),
                 is_identity ? 2 : 1);
    if (level_lo < min_level)
        throw std::invalid_argument("level range starts below the family's "
                                    "minimum for this cell");
    if (level_hi < level_lo)
        throw std::invalid_argument("empty level range");

    const ExactRational target =
        family_limit(spec) / ExactRational(pow3(static_cast<int>(w.depth())));
    std::vector<ConvergenceRow> rows;
    for (int m = level_lo; m <= level_hi; ++m) {
        const ExactRational integral = cell_integral(family_view(spec, m), w);
        rows.push_back(
            {m, w, integral, target, boost::multiprecision::abs(integral - target)});
    }
    return rows;
}

}  // namespace gp
