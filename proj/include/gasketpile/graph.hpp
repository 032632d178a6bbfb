#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "gasketpile/geometry.hpp"

namespace gp {

/// Boundary wiring of the approximation graph.
///   Normal          — auxiliary sink joined to each corner by 2 edges,
///                     every vertex ends up with degree 4.
///   TopCorner       — the top corner itself is the sink; its edges become
///                     sink edges of its former neighbours.
///   TopAndRightCorners — top and lower-right corners merged into one sink.
enum class SinkSpec { Normal, TopCorner, TopAndRightCorners };

const char* sink_name(SinkSpec s);
SinkSpec sink_from_name(const std::string& name);

/// Level-n gasket approximation graph with sink wiring. Vertices are the
/// non-sink vertices in canonical (q,p)-lexicographic order; the sink is
/// implicit and only shows up through per-vertex sink edge multiplicities.
/// Immutable after construction.
class GasketGraph {
  public:
    struct Edge {
        std::int32_t to;
        std::int32_t multiplicity;
    };

    int level() const { return level_; }
    SinkSpec sink() const { return sink_; }
    std::int64_t scale() const { return std::int64_t{1} << level_; }

    std::size_t vertex_count() const { return vertices_.size(); }
    const std::vector<VertexKey>& vertices() const { return vertices_; }
    VertexKey vertex(std::size_t i) const { return vertices_[i]; }

    /// Index of a key, or -1 when the key is no vertex of this graph
    /// (outside the gasket, or designated as sink).
    std::int32_t index_of(VertexKey v) const {
        auto it = index_.find(v);
        return it == index_.end() ? -1 : it->second;
    }

    const std::vector<Edge>& neighbors(std::size_t i) const { return adjacency_[i]; }
    std::int32_t sink_multiplicity(std::size_t i) const { return sink_mult_[i]; }
    std::int32_t degree(std::size_t i) const { return degree_[i]; }

    std::int64_t internal_edge_count() const { return internal_edges_; }

    bool rotatable() const { return sink_ == SinkSpec::Normal; }

    friend GasketGraph build_gasket(int level, SinkSpec sink);

  private:
    int level_ = 0;
    SinkSpec sink_ = SinkSpec::Normal;
    std::vector<VertexKey> vertices_;
    std::unordered_map<VertexKey, std::int32_t, VertexKeyHash> index_;
    std::vector<std::vector<Edge>> adjacency_;
    std::vector<std::int32_t> sink_mult_;
    std::vector<std::int32_t> degree_;
    std::int64_t internal_edges_ = 0;
};

/// Builds the canonical multigraph for SG_level with the given wiring.
/// Deterministic: same input gives bit-identical structure.
GasketGraph build_gasket(int level, SinkSpec sink);

/// Vertex permutation realizing the 120-degree rotation about the centroid.
/// Only Normal-sinked graphs admit one (the rotation must fix the sink set).
struct RotationMap {
    std::vector<std::int32_t> image;  // image[i] = index of rho(vertex i)

    std::int32_t operator()(std::int32_t i) const { return image[i]; }
};

enum class RotationDirection { CCW, CW };

RotationMap rotation_map(const GasketGraph& g, RotationDirection dir);

/// All graph vertices lying in the closed cell psi_w(SG), cut vertices on
/// the cell boundary included. Indices into the canonical vertex order.
std::vector<std::int32_t> cell_vertices(const GasketGraph& g, const CellWord& w);

/// m_w(v): the number of level-n elementary triangles inside psi_w(SG)
/// having v as a corner. Sparse map over vertex indices; lattice corners
/// that are sink vertices are skipped. For Normal wiring the values sum
/// to 3 * 3^(n - |w|).
std::unordered_map<std::int32_t, std::int32_t>
corner_multiplicity(const GasketGraph& g, const CellWord& w);

}  // namespace gp
