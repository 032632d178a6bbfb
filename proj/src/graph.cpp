#include "gasketpile/graph.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace gp {

const char* sink_name(SinkSpec s) {
    switch (s) {
        case SinkSpec::Normal: return "normal";
        case SinkSpec::TopCorner: return "top";
        case SinkSpec::TopAndRightCorners: return "top_right";
    }
    return "?";
}

SinkSpec sink_from_name(const std::string& name) {
    if (name == "normal") return SinkSpec::Normal;
    if (name == "top") return SinkSpec::TopCorner;
    if (name == "top_right") return SinkSpec::TopAndRightCorners;
    throw std::invalid_argument("unknown sink spec: " + name);
}

namespace {

// Visits every elementary triangle of the sub-gasket with the given lower-left
// corner and size, in a fixed order (lower-left, lower-right, upper).
template <typename F>
void for_each_elementary_triangle(VertexKey origin, std::int64_t size, F&& f) {
    if (size == 1) {
        f(origin);
        return;
    }
    const std::int64_t h = size / 2;
    for_each_elementary_triangle(origin, h, f);
    for_each_elementary_triangle({origin.p + h, origin.q}, h, f);
    for_each_elementary_triangle({origin.p, origin.q + h}, h, f);
}

}  // namespace

GasketGraph build_gasket(int level, SinkSpec sink) {
    if (level < 0) throw std::invalid_argument("level must be non-negative");
    if (level > 19)
        throw std::invalid_argument(
            "level too large: vertex count (3^(n+1)+3)/2 exceeds supported "
            "range above level 19");
    if (sink == SinkSpec::TopAndRightCorners && level < 1)
        throw std::invalid_argument("top_right sink requires level >= 1");

    const std::int64_t s = std::int64_t{1} << level;
    const VertexKey top{0, s};
    const VertexKey right{s, 0};

    auto is_sink = [&](VertexKey v) {
        switch (sink) {
            case SinkSpec::Normal: return false;
            case SinkSpec::TopCorner: return v == top;
            case SinkSpec::TopAndRightCorners: return v == top || v == right;
        }
        return false;
    };

    // Collect vertices and (multiplicity-1) lattice edges. Every elementary
    // triangle contributes its three sides; distinct triangles never share a
    // side, so internal multiplicities are all 1.
    std::map<VertexKey, std::int32_t> order;  // canonical (q,p)-lex via operator<
    std::vector<std::pair<VertexKey, VertexKey>> lattice_edges;
    for_each_elementary_triangle({0, 0}, s, [&](VertexKey o) {
        const VertexKey a = o, b{o.p + 1, o.q}, c{o.p, o.q + 1};
        order.emplace(a, 0);
        order.emplace(b, 0);
        order.emplace(c, 0);
        lattice_edges.emplace_back(a, b);
        lattice_edges.emplace_back(a, c);
        lattice_edges.emplace_back(b, c);
    });

    GasketGraph g;
    g.level_ = level;
    g.sink_ = sink;
    for (auto& [v, idx] : order) {
        if (is_sink(v)) {
            idx = -1;
            continue;
        }
        idx = static_cast<std::int32_t>(g.vertices_.size());
        g.vertices_.push_back(v);
        g.index_.emplace(v, idx);
    }
    const auto n = g.vertices_.size();
    g.adjacency_.resize(n);
    g.sink_mult_.assign(n, 0);

    for (auto& [a, b] : lattice_edges) {
        const std::int32_t ia = order.at(a), ib = order.at(b);
        if (ia < 0 && ib < 0) continue;  // between merged sink corners: dropped
        if (ia < 0) {
            g.sink_mult_[ib] += 1;
        } else if (ib < 0) {
            g.sink_mult_[ia] += 1;
        } else {
            g.adjacency_[ia].push_back({ib, 1});
            g.adjacency_[ib].push_back({ia, 1});
            g.internal_edges_ += 1;
        }
    }
    if (sink == SinkSpec::Normal) {
        for (VertexKey c : {VertexKey{0, 0}, right, top})
            g.sink_mult_[g.index_.at(c)] += 2;
    }

    for (auto& adj : g.adjacency_)
        std::sort(adj.begin(), adj.end(),
                  [](const GasketGraph::Edge& x, const GasketGraph::Edge& y) {
                      return x.to < y.to;
                  });

    g.degree_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::int32_t d = g.sink_mult_[i];
        for (auto& e : g.adjacency_[i]) d += e.multiplicity;
        g.degree_[i] = d;
    }
    return g;
}

RotationMap rotation_map(const GasketGraph& g, RotationDirection dir) {
    if (!g.rotatable())
        throw std::invalid_argument(
            "rotation requires a Normal sink: other sink choices are not "
            "rotation invariant");
    const std::int64_t s = g.scale();
    RotationMap m;
    m.image.resize(g.vertex_count());
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
        const VertexKey v = g.vertex(i);
        const VertexKey w =
            dir == RotationDirection::CCW ? rotate_ccw(v, s) : rotate_cw(v, s);
        const std::int32_t j = g.index_of(w);
        if (j < 0) throw std::logic_error("rotation left the vertex set");
        m.image[i] = j;
    }
    return m;
}

std::vector<std::int32_t> cell_vertices(const GasketGraph& g, const CellWord& w) {
    const CellRegion r = cell_region(w, g.level());
    std::vector<std::int32_t> out;
    for (std::size_t i = 0; i < g.vertex_count(); ++i)
        if (r.contains(g.vertex(i))) out.push_back(static_cast<std::int32_t>(i));
    return out;
}

std::unordered_map<std::int32_t, std::int32_t>
corner_multiplicity(const GasketGraph& g, const CellWord& w) {
    const CellRegion r = cell_region(w, g.level());
    std::unordered_map<std::int32_t, std::int32_t> mult;
    for_each_elementary_triangle(r.origin, r.size, [&](VertexKey o) {
        for (VertexKey c : {o, VertexKey{o.p + 1, o.q}, VertexKey{o.p, o.q + 1}}) {
            const std::int32_t i = g.index_of(c);
            if (i >= 0) mult[i] += 1;
        }
    });
    return mult;
}

}  // namespace gp
