#include "gasketpile/engine.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <stdexcept>

#include "gasketpile/laplacian.hpp"
#include "lane_kernel.hpp"

namespace gp {

namespace {

constexpr std::uint64_t kToppleCap = 1'000'000'000'000ULL;

void require_graph(const SandpileConfig& c) {
    if (!c.graph) throw std::invalid_argument("config has no graph");
    if (c.heights.size() != c.graph->vertex_count())
        throw std::invalid_argument("config height vector has wrong length");
}

bool same_graph(const GasketGraph& a, const GasketGraph& b) {
    return a.level() == b.level() && a.sink() == b.sink();
}

// Fires vertex v in full batches: k = h/deg topplings at once. Returns k.
std::uint64_t fire(const GasketGraph& g, std::vector<std::uint64_t>& h,
                   std::vector<std::uint64_t>& od, std::int32_t v) {
    const std::uint64_t deg = static_cast<std::uint64_t>(g.degree(v));
    const std::uint64_t k = h[v] / deg;
    if (k == 0) return 0;
    h[v] -= k * deg;
    od[v] += k;
    for (const auto& e : g.neighbors(v))
        h[e.to] += k * static_cast<std::uint64_t>(e.multiplicity);
    return k;
}

template <typename PopActive>
StabilizeResult drain(const SandpileConfig& c, PopActive&& pop) {
    const GasketGraph& g = *c.graph;
    StabilizeResult r{c, Odometer{std::vector<std::uint64_t>(c.heights.size(), 0)}};
    auto& h = r.config.heights;
    auto& od = r.odometer.topple_counts;

    std::vector<char> queued(h.size(), 0);
    std::vector<std::int32_t> active;
    for (std::size_t v = 0; v < h.size(); ++v)
        if (h[v] >= static_cast<std::uint64_t>(g.degree(v))) {
            active.push_back(static_cast<std::int32_t>(v));
            queued[v] = 1;
        }

    std::uint64_t total = 0;
    while (!active.empty()) {
        const std::int32_t v = pop(active);
        queued[v] = 0;
        total += fire(g, h, od, v);
        if (total > kToppleCap)
            throw std::runtime_error("stabilization exceeded the toppling cap");
        for (const auto& e : g.neighbors(v)) {
            if (!queued[e.to] &&
                h[e.to] >= static_cast<std::uint64_t>(g.degree(e.to))) {
                active.push_back(e.to);
                queued[e.to] = 1;
            }
        }
        // batch firing can leave v unstable only if a neighbour refilled it,
        // which the loop above already re-queues
        if (!queued[v] && h[v] >= static_cast<std::uint64_t>(g.degree(v))) {
            active.push_back(v);
            queued[v] = 1;
        }
    }
    return r;
}

StabilizeResult stabilize_sweep(const SandpileConfig& c) {
    const GasketGraph& g = *c.graph;
    StabilizeResult r{c, Odometer{std::vector<std::uint64_t>(c.heights.size(), 0)}};
    auto& h = r.config.heights;
    auto& od = r.odometer.topple_counts;
    std::uint64_t total = 0;
    bool any = true;
    while (any) {
        any = false;
        for (std::size_t v = 0; v < h.size(); ++v) {
            const std::uint64_t k = fire(g, h, od, static_cast<std::int32_t>(v));
            if (k) {
                any = true;
                total += k;
            }
        }
        if (total > kToppleCap)
            throw std::runtime_error("stabilization exceeded the toppling cap");
    }
    return r;
}

StabilizeResult stabilize_parallel(const SandpileConfig& c) {
    const GasketGraph& g = *c.graph;
    StabilizeResult r{c, Odometer{std::vector<std::uint64_t>(c.heights.size(), 0)}};
    auto& h = r.config.heights;
    auto& od = r.odometer.topple_counts;
    std::vector<std::uint64_t> k(h.size());
    std::uint64_t total = 0;
    bool any = true;
    while (any) {
        any = false;
        for (std::size_t v = 0; v < h.size(); ++v) {
            k[v] = h[v] / static_cast<std::uint64_t>(g.degree(v));
            if (k[v]) any = true;
        }
        if (!any) break;
        for (std::size_t v = 0; v < h.size(); ++v) {
            if (!k[v]) continue;
            h[v] -= k[v] * static_cast<std::uint64_t>(g.degree(v));
            od[v] += k[v];
            total += k[v];
            for (const auto& e : g.neighbors(v))
                h[e.to] += k[v] * static_cast<std::uint64_t>(e.multiplicity);
        }
        if (total > kToppleCap)
            throw std::runtime_error("stabilization exceeded the toppling cap");
    }
    return r;
}

}  // namespace

bool SandpileConfig::stable() const {
    for (std::size_t v = 0; v < heights.size(); ++v)
        if (heights[v] >= static_cast<std::uint64_t>(graph->degree(v))) return false;
    return true;
}

std::uint64_t SandpileConfig::total_chips() const {
    std::uint64_t t = 0;
    for (auto h : heights) t += h;
    return t;
}

SandpileConfig max_config(const GasketGraph& g) {
    SandpileConfig c{&g, std::vector<std::uint64_t>(g.vertex_count())};
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        c.heights[v] = static_cast<std::uint64_t>(g.degree(v)) - 1;
    return c;
}

SandpileConfig topple(const SandpileConfig& c, std::int32_t v) {
    require_graph(c);
    const GasketGraph& g = *c.graph;
    if (v < 0 || static_cast<std::size_t>(v) >= c.heights.size())
        throw std::out_of_range("topple: vertex index out of range");
    if (c.heights[v] < static_cast<std::uint64_t>(g.degree(v)))
        throw std::invalid_argument("topple: vertex is not unstable");
    SandpileConfig out = c;
    out.heights[v] -= static_cast<std::uint64_t>(g.degree(v));
    for (const auto& e : g.neighbors(v))
        out.heights[e.to] += static_cast<std::uint64_t>(e.multiplicity);
    return out;
}

StabilizeResult stabilize(const SandpileConfig& c, ToppleOrder order,
                          std::uint64_t seed) {
    require_graph(c);
    if (order == ToppleOrder::Auto) {
        const GasketGraph& g = *c.graph;
        bool lane_ok = g.level() >= 7 && g.level() <= 12;
        for (std::size_t v = 0; lane_ok && v < c.heights.size(); ++v)
            lane_ok = c.heights[v] < (std::uint64_t{1} << 24);
        if (lane_ok) {
            // Pre-topple an exact lower bound of the odometer (one rational
            // solve), then let the lane kernel finish legally from the
            // deficit heights. The least action principle makes the split
            // invisible in the result, and the bound soaks up the smooth
            // bulk of the odometer -- ~90% of all fires on heavy uniform
            // inputs like 2*eta_max.
            const std::vector<std::uint64_t> u0 = odometer_lower_bound(g, c.heights);
            std::vector<std::int64_t> h0(c.heights.begin(), c.heights.end());
            for (std::size_t v = 0; v < u0.size(); ++v) {
                if (u0[v] == 0) continue;
                const std::int64_t k = static_cast<std::int64_t>(u0[v]);
                h0[v] -= k * g.degree(v);
                for (const auto& e : g.neighbors(v))
                    h0[e.to] += k * e.multiplicity;
            }
            StabilizeResult r{
                c, Odometer{std::vector<std::uint64_t>(c.heights.size(), 0)}};
            std::uint64_t total = 0;
            if (detail::lane_stabilize(g, h0, r.odometer.topple_counts,
                                       &total)) {
                for (std::size_t v = 0; v < h0.size(); ++v) {
                    r.config.heights[v] = static_cast<std::uint64_t>(h0[v]);
                    r.odometer.topple_counts[v] += u0[v];
                }
                return r;
            }
        }
        order = ToppleOrder::Fifo;
    }
    switch (order) {
        case ToppleOrder::Fifo:
            // queue on a vector with a consumed-prefix head; the prefix is
            // compacted once it dominates, keeping pops amortized O(1)
            return drain(c, [head = std::size_t{0}](
                                std::vector<std::int32_t>& a) mutable {
                const std::int32_t v = a[head++];
                if (head == a.size() || head * 2 >= a.size() + 1024) {
                    a.erase(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(head));
                    head = 0;
                }
                return v;
            });
        case ToppleOrder::Lifo:
            return drain(c, [](std::vector<std::int32_t>& a) {
                const std::int32_t v = a.back();
                a.pop_back();
                return v;
            });
        case ToppleOrder::RandomOrder:
            return drain(c, [rng = std::mt19937_64(seed)](
                                std::vector<std::int32_t>& a) mutable {
                const std::size_t i = rng() % a.size();
                std::swap(a[i], a.back());
                const std::int32_t v = a.back();
                a.pop_back();
                return v;
            });
        case ToppleOrder::Sweep:
            return stabilize_sweep(c);
        case ToppleOrder::ParallelRounds:
            return stabilize_parallel(c);
        default:
            throw std::logic_error("unhandled topple order");
    }
}

SandpileConfig group_add(const SandpileConfig& a, const SandpileConfig& b) {
    require_graph(a);
    require_graph(b);
    if (!same_graph(*a.graph, *b.graph))
        throw std::invalid_argument("group_add: configs live on different graphs");
    SandpileConfig sum = a;
    for (std::size_t v = 0; v < sum.heights.size(); ++v)
        sum.heights[v] += b.heights[v];
    return stabilize(sum).config;
}

BurnReport is_recurrent(const SandpileConfig& c) {
    require_graph(c);
    if (!c.stable())
        throw std::invalid_argument("burning test requires a stable config");
    const GasketGraph& g = *c.graph;
    const std::size_t n = g.vertex_count();

    // Dhar's burning test: fire the sink once; v burns as soon as the number
    // of burnt edges into it exceeds h(v)'s slack, i.e.
    // h(v) >= deg(v) - (burnt edges into v).
    BurnReport rep;
    std::vector<std::int32_t> burnt_in(n, 0);
    std::vector<char> burnt(n, 0);
    std::deque<std::int32_t> frontier;
    auto try_ignite = [&](std::int32_t v) {
        if (!burnt[v] && c.heights[v] + static_cast<std::uint64_t>(burnt_in[v]) >=
                             static_cast<std::uint64_t>(g.degree(v))) {
            burnt[v] = 1;
            frontier.push_back(v);
        }
    };
    for (std::size_t v = 0; v < n; ++v) {
        burnt_in[v] = g.sink_multiplicity(v);
        try_ignite(static_cast<std::int32_t>(v));
    }
    while (!frontier.empty()) {
        const std::int32_t v = frontier.front();
        frontier.pop_front();
        rep.burn_order.push_back(v);
        for (const auto& e : g.neighbors(v)) {
            burnt_in[e.to] += e.multiplicity;
            try_ignite(e.to);
        }
    }
    rep.recurrent = rep.burn_order.size() == n;
    return rep;
}

SandpileConfig identity(const GasketGraph& g, bool verify) {
    // Creutz: id = (2*eta_max - (2*eta_max)^o)^o.
    SandpileConfig twice = max_config(g);
    for (auto& h : twice.heights) h *= 2;
    const SandpileConfig sigma = stabilize(twice).config;
    SandpileConfig diff = twice;
    for (std::size_t v = 0; v < diff.heights.size(); ++v)
        diff.heights[v] -= sigma.heights[v];
    SandpileConfig id = stabilize(diff).config;

    if (verify) {
        if (!is_recurrent(id).recurrent)
            throw std::logic_error("identity verification failed: not recurrent");
        for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
            const SandpileConfig r = random_recurrent(g, seed);
            if (group_add(id, r).heights != r.heights)
                throw std::logic_error(
                    "identity verification failed: not neutral on a recurrent "
                    "config");
        }
    }
    return id;
}

SandpileConfig random_recurrent(const GasketGraph& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    SandpileConfig c = max_config(g);
    for (auto& h : c.heights) h += rng() & 3;
    return stabilize(c).config;
}

}  // namespace gp
