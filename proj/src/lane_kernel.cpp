#include "lane_kernel.hpp"

#include <array>
#include <cstring>
#include <stdexcept>

namespace gp::detail {

namespace {

constexpr int kLaneBits = 5;
constexpr int kLanes = 32;      // padded; 27 in use
constexpr int kBlocks = 27;
constexpr int kBlockDepth = 3;

struct TemplateNeighbor {
    std::int32_t local = -1;   // local id, or -1 when the neighbor is a corner
    std::int32_t corner = -1;  // 0 lower-left, 1 lower-right, 2 top
};

// Depth-3 cell origins of the size-s triangle, in recursion order
// (lower-left, lower-right, upper at every split).
void collect_block_origins(VertexKey o, std::int64_t size, int depth,
                           std::vector<VertexKey>& out) {
    if (depth == 0) {
        out.push_back(o);
        return;
    }
    const std::int64_t h = size / 2;
    collect_block_origins(o, h, depth - 1, out);
    collect_block_origins({o.p + h, o.q}, h, depth - 1, out);
    collect_block_origins({o.p, o.q + h}, h, depth - 1, out);
}

}  // namespace

bool lane_stabilize(const GasketGraph& g, std::vector<std::int64_t>& heights,
                    std::vector<std::uint64_t>& odometer,
                    std::uint64_t* topple_total) {
    const int n = g.level();
    if (n < 7 || n > 12) return false;
    for (auto h : heights)
        if (h >= (std::int64_t{1} << 24) || h <= -(std::int64_t{1} << 24))
            return false;

    const int b = n - kBlockDepth;
    const std::int64_t sb = std::int64_t{1} << b;

    // Block interior template from an unsinked copy of SG_b.
    const GasketGraph tmpl = build_gasket(b, SinkSpec::Normal);
    const std::array<VertexKey, 3> corner_keys{
        VertexKey{0, 0}, VertexKey{sb, 0}, VertexKey{0, sb}};
    auto corner_of = [&](VertexKey v) {
        for (int c = 0; c < 3; ++c)
            if (v == corner_keys[c]) return c;
        return -1;
    };

    std::vector<std::int32_t> local_of(tmpl.vertex_count(), -1);
    std::vector<std::int32_t> local_to_tmpl;
    for (std::size_t i = 0; i < tmpl.vertex_count(); ++i) {
        if (corner_of(tmpl.vertex(i)) >= 0) continue;
        local_of[i] = static_cast<std::int32_t>(local_to_tmpl.size());
        local_to_tmpl.push_back(static_cast<std::int32_t>(i));
    }
    const std::int32_t local_count = static_cast<std::int32_t>(local_to_tmpl.size());

    std::vector<std::array<TemplateNeighbor, 4>> tnbr(local_count);
    std::vector<std::int8_t> tnbr_count(local_count, 0);
    for (std::int32_t l = 0; l < local_count; ++l) {
        for (const auto& e : tmpl.neighbors(local_to_tmpl[l])) {
            const int c = corner_of(tmpl.vertex(e.to));
            auto& slot = tnbr[l][tnbr_count[l]++];
            if (c >= 0)
                slot = {-1, c};
            else
                slot = {local_of[e.to], -1};
        }
        if (tmpl.degree(local_to_tmpl[l]) - tmpl.sink_multiplicity(local_to_tmpl[l]) != 4)
            return false;  // interior template must be uniformly degree 4
    }

    std::vector<VertexKey> origins;
    collect_block_origins({0, 0}, g.scale(), kBlockDepth, origins);

    // Skeleton: corners of the 27 blocks, deduplicated; absent entries stand
    // in for merged-away sink corners and absorb chips without firing.
    struct SkeletonVertex {
        std::int32_t canon = -1;  // -1: absorbing (sink corner)
        std::int32_t deg = 0;
        std::array<std::int32_t, 4> nbr{};  // flat lane-array indices
        std::int32_t nbr_count = 0;
    };
    std::vector<SkeletonVertex> skeleton;
    std::unordered_map<VertexKey, std::int32_t, VertexKeyHash> skel_id;
    auto skeleton_slot = [&](VertexKey key) {
        auto it = skel_id.find(key);
        if (it != skel_id.end()) return it->second;
        const std::int32_t id = static_cast<std::int32_t>(skeleton.size());
        skel_id.emplace(key, id);
        SkeletonVertex sv;
        sv.canon = g.index_of(key);
        skeleton.push_back(sv);
        return id;
    };

    // corner_slot[c][lane]: skeleton id of corner c of block `lane`.
    std::array<std::array<std::int32_t, kBlocks>, 3> corner_slot{};
    for (int lane = 0; lane < kBlocks; ++lane)
        for (int c = 0; c < 3; ++c)
            corner_slot[c][lane] = skeleton_slot(
                {origins[lane].p + corner_keys[c].p, origins[lane].q + corner_keys[c].q});

    // Flat lane arrays and the canonical <-> lane permutation.
    const std::size_t flat_size = static_cast<std::size_t>(local_count) << kLaneBits;
    std::vector<std::int32_t> h(flat_size, 0), od(flat_size, 0);
    std::vector<std::int32_t> flat_to_canon(flat_size, -1);
    for (int lane = 0; lane < kBlocks; ++lane) {
        for (std::int32_t l = 0; l < local_count; ++l) {
            const VertexKey lv = tmpl.vertex(local_to_tmpl[l]);
            const std::int32_t canon =
                g.index_of({origins[lane].p + lv.p, origins[lane].q + lv.q});
            if (canon < 0) return false;
            flat_to_canon[(static_cast<std::size_t>(l) << kLaneBits) + lane] = canon;
            h[(static_cast<std::size_t>(l) << kLaneBits) + lane] =
                static_cast<std::int32_t>(heights[canon]);
        }
    }

    // Skeleton degrees and neighbor targets (always block-interior locals).
    for (auto& [key, id] : skel_id) {
        auto& sv = skeleton[id];
        if (sv.canon < 0) continue;
        sv.deg = g.degree(sv.canon);
        for (const auto& e : g.neighbors(sv.canon)) {
            const VertexKey nk = g.vertex(e.to);
            // locate the block containing nk as interior
            bool found = false;
            for (int lane = 0; lane < kBlocks && !found; ++lane) {
                const VertexKey rel{nk.p - origins[lane].p, nk.q - origins[lane].q};
                if (rel.p < 0 || rel.q < 0 || rel.p + rel.q > sb) continue;
                const std::int32_t ti = tmpl.index_of(rel);
                if (ti < 0 || local_of[ti] < 0) continue;
                // one template entry per multiplicity unit (internal edges have 1)
                for (int m = 0; m < e.multiplicity; ++m)
                    sv.nbr[sv.nbr_count++] =
                        static_cast<std::int32_t>((static_cast<std::size_t>(local_of[ti]) << kLaneBits) + lane);
                found = true;
            }
            if (!found) return false;
        }
    }

    std::vector<std::int32_t> skel_h(skeleton.size(), 0), skel_od(skeleton.size(), 0);
    for (std::size_t i = 0; i < skeleton.size(); ++i)
        if (skeleton[i].canon >= 0)
            skel_h[i] = static_cast<std::int32_t>(heights[skeleton[i].canon]);

    // Gauss-Seidel sweeps: vector pass over block interiors (32 lanes wide),
    // then a scalar pass over the skeleton. Every fire is a legal batch
    // toppling, so the abelian property pins the result. Locals are
    // revisited only while dirty (touched by a neighbor since last seen
    // stable), which makes late, sparse sweeps cheap.
    std::int32_t* __restrict__ hp = h.data();
    std::int32_t* __restrict__ odp = od.data();
    std::vector<char> dirty(local_count, 1);
    bool active = true;
    while (active) {
        std::int32_t any = 0;
        for (std::int32_t l = 0; l < local_count; ++l) {
            if (!dirty[l]) continue;
            dirty[l] = 0;
            const std::size_t base = static_cast<std::size_t>(l) << kLaneBits;
            std::int32_t kv[kLanes];
            std::int32_t lane_any = 0;
            for (int i = 0; i < kLanes; ++i) {
                const std::int32_t hv = hp[base + i];
                kv[i] = (hv < 0 ? 0 : hv) >> 2;  // negative sites never fire
                lane_any |= kv[i];
            }
            if (!lane_any) continue;
            any = 1;
            for (int i = 0; i < kLanes; ++i) {
                hp[base + i] -= kv[i] << 2;
                odp[base + i] += kv[i];
            }
            const auto& nb = tnbr[l];
            const int nc = tnbr_count[l];
            for (int j = 0; j < nc; ++j) {
                if (nb[j].local >= 0) {
                    std::int32_t* __restrict__ dst =
                        hp + (static_cast<std::size_t>(nb[j].local) << kLaneBits);
                    for (int i = 0; i < kLanes; ++i) dst[i] += kv[i];
                    dirty[nb[j].local] = 1;
                } else {
                    const auto& slots = corner_slot[nb[j].corner];
                    for (int lane = 0; lane < kBlocks; ++lane)
                        skel_h[slots[lane]] += kv[lane];
                }
            }
        }
        for (std::size_t sid = 0; sid < skeleton.size(); ++sid) {
            const auto& sv = skeleton[sid];
            if (sv.canon < 0 || sv.deg == 0) continue;
            const std::int32_t k = skel_h[sid] / sv.deg;
            if (k <= 0) continue;
            any = 1;
            skel_h[sid] -= k * sv.deg;
            skel_od[sid] += k;
            for (std::int32_t j = 0; j < sv.nbr_count; ++j) {
                hp[sv.nbr[j]] += k;
                dirty[sv.nbr[j] >> kLaneBits] = 1;
            }
        }
        active = any != 0;
    }

    // Export back to canonical order.
    std::uint64_t total = 0;
    for (std::size_t f = 0; f < flat_size; ++f) {
        if (flat_to_canon[f] < 0) continue;
        heights[flat_to_canon[f]] = h[f];
        odometer[flat_to_canon[f]] += static_cast<std::uint64_t>(od[f]);
        total += static_cast<std::uint64_t>(od[f]);
    }
    for (std::size_t i = 0; i < skeleton.size(); ++i) {
        if (skeleton[i].canon < 0) continue;
        heights[skeleton[i].canon] = skel_h[i];
        odometer[skeleton[i].canon] += static_cast<std::uint64_t>(skel_od[i]);
        total += static_cast<std::uint64_t>(skel_od[i]);
    }
    if (topple_total) *topple_total += total;
    return true;
}

}  // namespace gp::detail
