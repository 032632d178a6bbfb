#include "gasketpile/construct.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

namespace gp {

const GasketGraph& cached_gasket(int level, SinkSpec sink) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::unique_ptr<GasketGraph>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{level, static_cast<int>(sink)}];
    if (!slot) slot = std::make_unique<GasketGraph>(build_gasket(level, sink));
    return *slot;
}

double ValueMap::sum() const {
    double s = 0;
    for (double v : values) s += v;
    return s;
}

namespace {

// Value sink with cut-agreement checking: the recursions reach every cut
// vertex from both adjacent blocks, and both visits must agree.
struct Canvas {
    const GasketGraph* graph;
    std::vector<double> values;
    std::vector<char> assigned;

    explicit Canvas(const GasketGraph& g)
        : graph(&g),
          values(g.vertex_count(), 0.0),
          assigned(g.vertex_count(), 0) {}

    void set(VertexKey key, double v) {
        const std::int32_t i = graph->index_of(key);
        if (i < 0) throw std::logic_error("construction wrote outside the gasket");
        if (assigned[i] && values[i] != v)
            throw std::logic_error("cut-value disagreement at vertex " +
                                   std::to_string(key.p) + "," +
                                   std::to_string(key.q));
        values[i] = v;
        assigned[i] = 1;
    }

    ValueMap finish() && {
        for (char a : assigned)
            if (!a) throw std::logic_error("construction left a vertex unset");
        return ValueMap{graph, std::move(values)};
    }
};

// f_n recursion on the sub-triangle with lower-left corner o and side s.
void place_f(Canvas& canvas, VertexKey o, std::int64_t s, int n, double a,
             double b, double c, double x, double y, double z) {
    const std::int64_t h = s / 2;
    const VertexKey bm{o.p + h, o.q};      // bottom-middle
    const VertexKey lm{o.p, o.q + h};      // left-middle
    const VertexKey rm{o.p + h, o.q + h};  // right-middle
    if (n == 1) {
        canvas.set(o, x);
        canvas.set({o.p + s, o.q}, y);
        canvas.set({o.p, o.q + s}, z);
        canvas.set(bm, a);
        canvas.set(lm, b);
        canvas.set(rm, c);
        return;
    }
    place_f(canvas, o, h, n - 1, a, b, c, x, a, b);
    place_f(canvas, bm, h, n - 1, a, b, c, a, y, c);
    place_f(canvas, lm, h, n - 1, a, b, c, b, c, z);
}

// Copies a block map onto the half-size sub-triangle at the given offset.
void place_block(Canvas& canvas, const ValueMap& block, VertexKey offset,
                 bool sum_cuts) {
    const GasketGraph& bg = *block.graph;
    for (std::size_t i = 0; i < bg.vertex_count(); ++i) {
        const VertexKey v = bg.vertex(i);
        const VertexKey t{v.p + offset.p, v.q + offset.q};
        if (sum_cuts) {
            const std::int32_t j = canvas.graph->index_of(t);
            if (j < 0) throw std::logic_error("block placed outside the gasket");
            canvas.values[j] += block.values[i];
            canvas.assigned[j] = 1;
        } else {
            canvas.set(t, block.values[i]);
        }
    }
}

}  // namespace

ValueMap rotate_values(const ValueMap& v, RotationTag tag) {
    if (tag == RotationTag::Id) return v;
    const GasketGraph& g = *v.graph;
    const RotationMap rho = rotation_map(
        g, tag == RotationTag::Plus ? RotationDirection::CW : RotationDirection::CCW);
    ValueMap out{&g, std::vector<double>(v.values.size())};
    for (std::size_t i = 0; i < v.values.size(); ++i)
        out.values[i] = v.values[rho(static_cast<std::int32_t>(i))];
    return out;
}

ValueMap build_f(int n, double a, double b, double c, double x, double y,
                 double z) {
    if (n < 1) throw std::invalid_argument("f_n requires n >= 1");
    const GasketGraph& g = cached_gasket(n);
    Canvas canvas(g);
    place_f(canvas, {0, 0}, g.scale(), n, a, b, c, x, y, z);
    return std::move(canvas).finish();
}

ValueMap build_M(int n, int x, int y, int z) {
    return build_f(n, 3, 3, 2, x, y, z);
}

ValueMap assemble_identity(int m) {
    if (m < 2) throw std::invalid_argument("assembled identity requires m >= 2");
    const ValueMap block = build_M(m - 1, 2, 2, 2);
    const std::int64_t h = std::int64_t{1} << (m - 1);
    const GasketGraph& g = cached_gasket(m);
    Canvas canvas(g);
    place_block(canvas, block, {0, 0}, false);
    place_block(canvas, rotate_values(block, RotationTag::Plus), {h, 0}, false);
    place_block(canvas, rotate_values(block, RotationTag::Minus), {0, h}, false);
    return std::move(canvas).finish();
}

ValueMap combine_iota(const ValueMap& fa, const ValueMap& gb,
                      const ValueMap& hc, RotationTag alpha, RotationTag beta,
                      RotationTag gamma) {
    const int bl = fa.graph->level();
    if (gb.graph->level() != bl || hc.graph->level() != bl)
        throw std::invalid_argument("iota blocks must share one level");
    const std::int64_t h = std::int64_t{1} << bl;
    const GasketGraph& g = cached_gasket(bl + 1);
    Canvas canvas(g);
    place_block(canvas, rotate_values(fa, alpha), {0, 0}, true);
    place_block(canvas, rotate_values(gb, beta), {h, 0}, true);
    place_block(canvas, rotate_values(hc, gamma), {0, h}, true);
    return std::move(canvas).finish();
}

SandpileConfig to_config(const ValueMap& v) {
    SandpileConfig c{v.graph, std::vector<std::uint64_t>(v.values.size())};
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        const double x = v.values[i];
        if (x < 0 || x != std::floor(x))
            throw std::invalid_argument(
                "value map is not a chip configuration: non-integral or "
                "negative value");
        c.heights[i] = static_cast<std::uint64_t>(x);
    }
    return c;
}

ValueMap from_config(const SandpileConfig& c) {
    ValueMap v{c.graph, std::vector<double>(c.heights.size())};
    for (std::size_t i = 0; i < c.heights.size(); ++i)
        v.values[i] = static_cast<double>(c.heights[i]);
    return v;
}

}  // namespace gp
