#include "gasketpile/laplacian.hpp"

#include <array>
#include <functional>
#include <stdexcept>
#include <utility>

namespace gp {

std::vector<std::vector<BigInt>> reduced_laplacian(const GasketGraph& g) {
    const std::size_t n = g.vertex_count();
    std::vector<std::vector<BigInt>> m(n, std::vector<BigInt>(n, 0));
    for (std::size_t i = 0; i < n; ++i) {
        m[i][i] = g.degree(i);
        for (const auto& e : g.neighbors(i)) m[i][e.to] -= e.multiplicity;
    }
    return m;
}

BigInt bareiss_determinant(std::vector<std::vector<BigInt>> m) {
    const std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw std::invalid_argument("matrix must be square");

    BigInt prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t p = k + 1;
            while (p < n && m[p][k] == 0) ++p;
            if (p == n) return 0;
            std::swap(m[k], m[p]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
            m[i][k] = 0;
        }
        prev = m[k][k];
    }
    return n == 0 ? BigInt(1) : BigInt(sign * m[n - 1][n - 1]);
}

BigInt group_order(const GasketGraph& g) {
    return bareiss_determinant(reduced_laplacian(g));
}

namespace {

using Rat = boost::multiprecision::cpp_rational;
using Vec3 = std::array<Rat, 3>;
using Mat3 = std::array<Vec3, 3>;

Mat3 mat_mul(const Mat3& a, const Mat3& b) {
    Mat3 r{};
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            for (int j = 0; j < 3; ++j) r[i][j] += a[i][k] * b[k][j];
    return r;
}

Vec3 mat_vec(const Mat3& a, const Vec3& v) {
    Vec3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i] += a[i][j] * v[j];
    return r;
}

Vec3 mat_transposed_vec(const Mat3& a, const Vec3& v) {
    Vec3 r{};
    for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) r[j] += a[i][j] * v[i];
    return r;
}

Mat3 mat_inverse(const Mat3& m) {
    Mat3 adj;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            const int i1 = (j + 1) % 3, i2 = (j + 2) % 3;
            const int j1 = (i + 1) % 3, j2 = (i + 2) % 3;
            adj[i][j] = m[i1][j1] * m[i2][j2] - m[i1][j2] * m[i2][j1];
        }
    const Rat det = m[0][0] * adj[0][0] + m[0][1] * adj[1][0] + m[0][2] * adj[2][0];
    if (det == 0) throw std::logic_error("singular interface block");
    for (auto& row : adj)
        for (auto& v : row) v /= det;
    return adj;
}

// Schur-complement recursion data. A cell of size 2^k is three cells of
// size 2^(k-1) glued at edge midpoints; retained variables are the parent
// corners (A lower-left, B lower-right, C top), eliminated ones the mids
// (ab bottom, ac left, bc diagonal). Assembled 6x6 index order:
// A, B, C, ab, ac, bc; each child's Schur complement lands at
// LL -> (A, ab, ac), LR -> (ab, B, bc), UP -> (ac, bc, C).
struct LevelData {
    Mat3 schur;    // complement of a size-2^k cell onto its corners
    Mat3 minv;     // inverse of the mid-mid block of the assembled 6x6
    Mat3 coupling; // T_CM * minv, corners x mids
};

std::vector<LevelData> build_levels(int n) {
    std::vector<LevelData> lv(static_cast<std::size_t>(n) + 1);
    // size-1 cell: a bare triangle, Laplacian of K_3
    lv[0].schur = Mat3{Vec3{2, -1, -1}, Vec3{-1, 2, -1}, Vec3{-1, -1, 2}};
    constexpr int kChildMap[3][3] = {{0, 3, 4}, {3, 1, 5}, {4, 5, 2}};
    for (int k = 1; k <= n; ++k) {
        std::array<std::array<Rat, 6>, 6> t{};
        const Mat3& s = lv[k - 1].schur;
        for (const auto& map : kChildMap)
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) t[map[i]][map[j]] += s[i][j];
        Mat3 tcc, tcm, tmm;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                tcc[i][j] = t[i][j];
                tcm[i][j] = t[i][j + 3];
                tmm[i][j] = t[i + 3][j + 3];
            }
        lv[k].minv = mat_inverse(tmm);
        lv[k].coupling = mat_mul(tcm, lv[k].minv);
        lv[k].schur = tcc;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int m = 0; m < 3; ++m)
                    lv[k].schur[i][j] -= lv[k].coupling[i][m] * tcm[j][m];
    }
    return lv;
}

// Dense exact solve for the at-most-3x3 root corner system.
std::vector<Rat> solve_dense(std::vector<std::vector<Rat>> m, std::vector<Rat> rhs) {
    const std::size_t n = m.size();
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t p = k;
        while (p < n && m[p][k] == 0) ++p;
        if (p == n) throw std::logic_error("singular root system");
        std::swap(m[k], m[p]);
        std::swap(rhs[k], rhs[p]);
        for (std::size_t i = 0; i < n; ++i) {
            if (i == k) continue;
            const Rat f = m[i][k] / m[k][k];
            if (f == 0) continue;
            for (std::size_t j = k; j < n; ++j) m[i][j] -= f * m[k][j];
            rhs[i] -= f * rhs[k];
        }
    }
    std::vector<Rat> x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = rhs[i] / m[i][i];
    return x;
}

}  // namespace

std::vector<Rat> solve_reduced_laplacian(const GasketGraph& g,
                                         const std::vector<std::int64_t>& b) {
    if (b.size() != g.vertex_count())
        throw std::invalid_argument("rhs length does not match vertex count");
    const int n = g.level();
    const std::int64_t s = g.scale();
    const auto lv = build_levels(n);

    const auto bval = [&](VertexKey key) {
        const std::int32_t i = g.index_of(key);
        return i < 0 ? Rat(0) : Rat(b[static_cast<std::size_t>(i)]);
    };

    // Upward pass: reduce the rhs onto cell corners. Mid-row loads are
    // stored per cell (preorder slots, so the downward pass can replay the
    // same traversal) for back substitution.
    std::vector<Vec3> mid_rho;
    std::size_t slot_counter = 0;
    std::function<Vec3(VertexKey, std::int64_t)> up =
        [&](VertexKey o, std::int64_t size) -> Vec3 {
        if (size == 1) return Vec3{};
        const std::size_t slot = slot_counter++;
        mid_rho.resize(std::max(mid_rho.size(), slot + 1));
        const std::int64_t h = size / 2;
        const Vec3 rll = up(o, h);
        const Vec3 rlr = up({o.p + h, o.q}, h);
        const Vec3 rup = up({o.p, o.q + h}, h);
        Vec3 rho_m{rll[1] + rlr[0] + bval({o.p + h, o.q}),
                   rll[2] + rup[0] + bval({o.p, o.q + h}),
                   rlr[2] + rup[1] + bval({o.p + h, o.q + h})};
        int level = 0;
        for (std::int64_t t = size; t > 1; t /= 2) ++level;
        const Vec3 rho_c{rll[0], rlr[1], rup[2]};
        const Vec3 w_rho = mat_vec(lv[static_cast<std::size_t>(level)].coupling, rho_m);
        mid_rho[slot] = std::move(rho_m);
        return Vec3{rho_c[0] - w_rho[0], rho_c[1] - w_rho[1], rho_c[2] - w_rho[2]};
    };
    const Vec3 r_root = up({0, 0}, s);

    // Root corner system: Schur complement plus sink edges on the diagonal;
    // sink corners are Dirichlet zeros and drop out.
    const std::array<VertexKey, 3> corners{VertexKey{0, 0}, VertexKey{s, 0},
                                           VertexKey{0, s}};
    std::vector<int> present;
    for (int c = 0; c < 3; ++c)
        if (g.index_of(corners[c]) >= 0) present.push_back(c);
    std::vector<std::vector<Rat>> root(present.size(),
                                       std::vector<Rat>(present.size()));
    std::vector<Rat> rhs(present.size());
    for (std::size_t i = 0; i < present.size(); ++i) {
        const std::int32_t canon = g.index_of(corners[present[i]]);
        for (std::size_t j = 0; j < present.size(); ++j)
            root[i][j] = lv[static_cast<std::size_t>(n)].schur[present[i]][present[j]];
        root[i][i] += g.sink_multiplicity(canon);
        rhs[i] = r_root[present[i]] + Rat(b[static_cast<std::size_t>(canon)]);
    }
    const std::vector<Rat> xc = solve_dense(std::move(root), std::move(rhs));

    std::vector<Rat> x(g.vertex_count());
    Vec3 x_root{};
    for (std::size_t i = 0; i < present.size(); ++i) {
        x_root[present[i]] = xc[i];
        x[static_cast<std::size_t>(g.index_of(corners[present[i]]))] = xc[i];
    }

    // Downward pass: every non-corner vertex is the midpoint of exactly one
    // cell; its mid row is complete there, so x_M = minv (rho_M - T_MC x_C).
    slot_counter = 0;
    std::function<void(VertexKey, std::int64_t, const Vec3&)> down =
        [&](VertexKey o, std::int64_t size, const Vec3& corner_x) {
        if (size == 1) return;
        const std::size_t slot = slot_counter++;
        int level = 0;
        for (std::int64_t t = size; t > 1; t /= 2) ++level;
        const auto& ld = lv[static_cast<std::size_t>(level)];
        const Vec3 xm_free = mat_vec(ld.minv, mid_rho[slot]);
        const Vec3 xm_bound = mat_transposed_vec(ld.coupling, corner_x);
        const Vec3 xm{xm_free[0] - xm_bound[0], xm_free[1] - xm_bound[1],
                      xm_free[2] - xm_bound[2]};
        const std::int64_t h = size / 2;
        x[static_cast<std::size_t>(g.index_of({o.p + h, o.q}))] = xm[0];
        x[static_cast<std::size_t>(g.index_of({o.p, o.q + h}))] = xm[1];
        x[static_cast<std::size_t>(g.index_of({o.p + h, o.q + h}))] = xm[2];
        down(o, h, {corner_x[0], xm[0], xm[1]});
        down({o.p + h, o.q}, h, {xm[0], corner_x[1], xm[2]});
        down({o.p, o.q + h}, h, {xm[1], xm[2], corner_x[2]});
    };
    down({0, 0}, s, x_root);
    return x;
}

std::vector<std::uint64_t> odometer_lower_bound(
    const GasketGraph& g, const std::vector<std::uint64_t>& heights) {
    if (heights.size() != g.vertex_count())
        throw std::invalid_argument("heights length does not match vertex count");
    std::vector<std::int64_t> b(heights.size());
    for (std::size_t v = 0; v < heights.size(); ++v) {
        if (heights[v] >= (std::uint64_t{1} << 62))
            throw std::invalid_argument("heights too large for exact rhs");
        b[v] = static_cast<std::int64_t>(heights[v]) - (g.degree(v) - 1);
    }
    const auto x = solve_reduced_laplacian(g, b);
    std::vector<std::uint64_t> u0(x.size(), 0);
    for (std::size_t v = 0; v < x.size(); ++v) {
        if (x[v] <= 0) continue;
        const BigInt f = numerator(x[v]) / denominator(x[v]);  // floor: both > 0
        u0[v] = f.convert_to<std::uint64_t>();
    }
    return u0;
}

}  // namespace gp
