#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gp {

/// Lattice address of a gasket vertex at level n. Euclidean position is
/// 2^-n * (p + q/2, q*sqrt(3)/2), so p runs along the base and q along the
/// left slanted side. Shared corners of adjacent small triangles collapse
/// to the same key by construction.
struct VertexKey {
    std::int64_t p = 0;
    std::int64_t q = 0;

    friend bool operator==(const VertexKey&, const VertexKey&) = default;

    /// Canonical order: lexicographic by (q, p). Fixes array layouts and
    /// every serialized format.
    friend bool operator<(const VertexKey& a, const VertexKey& b) {
        return a.q != b.q ? a.q < b.q : a.p < b.p;
    }
};

struct VertexKeyHash {
    std::size_t operator()(const VertexKey& v) const {
        return std::hash<std::int64_t>{}(v.p * 0x9e3779b97f4a7c15LL + v.q);
    }
};

/// 120-degree rotation about the centroid of the size-s triangle with
/// lower-left corner at the origin. ccw maps (0,0) -> (s,0) -> (0,s) -> (0,0).
inline VertexKey rotate_ccw(VertexKey v, std::int64_t s) {
    return {s - v.p - v.q, v.p};
}
inline VertexKey rotate_cw(VertexKey v, std::int64_t s) {
    return {v.q, s - v.p - v.q};
}

/// Word over {1,2,3} addressing the cell psi_w(SG). Maps compose with the
/// first letter applied innermost, so the last letter decides the depth-1
/// cell the image lands in. The cell has measure 3^-|w|.
struct CellWord {
    std::vector<std::uint8_t> letters;

    std::size_t depth() const { return letters.size(); }

    static CellWord parse(const std::string& digits) {
        CellWord w;
        for (char c : digits) {
            if (c < '1' || c > '3')
                throw std::invalid_argument("cell word digits must be 1, 2 or 3");
            w.letters.push_back(static_cast<std::uint8_t>(c - '0'));
        }
        return w;
    }

    std::string str() const {
        std::string s;
        for (auto l : letters) s.push_back(static_cast<char>('0' + l));
        return s;
    }
};

/// Sub-triangle of the level-n lattice: lower-left corner plus side length.
struct CellRegion {
    VertexKey origin;
    std::int64_t size = 0;

    bool contains(VertexKey v) const {
        return v.p >= origin.p && v.q >= origin.q &&
               (v.p - origin.p) + (v.q - origin.q) <= size;
    }

    VertexKey corner_lower_left() const { return origin; }
    VertexKey corner_lower_right() const { return {origin.p + size, origin.q}; }
    VertexKey corner_top() const { return {origin.p, origin.q + size}; }
};

/// Region covered by psi_w(SG) on the level-n lattice. Requires |w| <= n.
inline CellRegion cell_region(const CellWord& w, int level) {
    const std::int64_t s = std::int64_t{1} << level;
    if (static_cast<int>(w.depth()) > level)
        throw std::invalid_argument("cell below graph resolution");
    CellRegion r{{0, 0}, s};
    for (auto letter : w.letters) {
        // psi_1 contracts toward (0,0), psi_2 toward (s,0), psi_3 toward (0,s).
        switch (letter) {
            case 1: r.origin = {r.origin.p / 2, r.origin.q / 2}; break;
            case 2: r.origin = {(r.origin.p + s) / 2, r.origin.q / 2}; break;
            case 3: r.origin = {r.origin.p / 2, (r.origin.q + s) / 2}; break;
            default: throw std::invalid_argument("bad cell letter");
        }
        r.size /= 2;
    }
    return r;
}

}  // namespace gp
