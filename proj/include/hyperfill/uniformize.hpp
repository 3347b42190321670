#pragma once

#include <string>
#include <vector>

#include "hyperfill/filling.hpp"

namespace hyperfill {

enum class UEdgeKind { horizontal, vertical, tail };

/// Edge of the uniformized (augmented) graph. For vertical edges `a` is
/// the lower-level endpoint; for tail edges `a` is the interior vertex and
/// `b` the boundary node. rho-arclength along the edge is measured from `a`.
struct UEdge {
    int a, b;            // augmented node ids
    UEdgeKind kind;
    int level;           // h(a) for vertical/tail, common level for horizontal
    double rho_length;
};

/// The filling decorated with rho-lengths and boundary nodes. Augmented
/// node ids: [0, V) are interior vertices, [V, V + |Z|) are boundary points
/// (boundary node for point z is V + z). Immutable after build.
class UniformizedGraph {
public:
    FillingGraph graph;
    std::size_t n_interior = 0;
    std::size_t n_boundary = 0;
    std::vector<UEdge> edges;
    std::vector<std::vector<int>> adjacency;  // node -> incident edge ids

    std::size_t node_count() const { return n_interior + n_boundary; }
    bool is_boundary(int node) const { return node >= static_cast<int>(n_interior); }
    int boundary_node(int point) const { return static_cast<int>(n_interior) + point; }
    int boundary_point(int node) const { return node - static_cast<int>(n_interior); }
    int other_end(int edge, int node) const {
        return edges[edge].a == node ? edges[edge].b : edges[edge].a;
    }

    /// Single-source shortest rho-path distances over the augmented graph.
    std::vector<double> dijkstra(int source) const;
    /// As above, also reporting the predecessor edge of each node.
    std::vector<double> dijkstra(int source, std::vector<int>& pred_edge) const;

    double d_rho(int x, int y) const;
    double d_rho_boundary(int x) const;  // min over boundary nodes

    /// Height Gromov product (x|y)_h = (h(x)+h(y)-|xy|)/2 with |xy| the
    /// unit-edge graph distance; interior vertices only.
    double gromov_product_h(int x, int y) const;

    /// Unit-edge graph distances on the interior skeleton from one source.
    std::vector<int> unit_distances(int source) const;

    std::string to_json() const;
};

UniformizedGraph uniformize(const PointCloudSpace& space, const FillingGraph& graph);

/// Exact rho-lengths of the three edge kinds (h linear along each edge).
double rho_length_horizontal(double alpha, int level);
double rho_length_vertical(double alpha, int level);
double rho_length_tail(double alpha, int level);

}  // namespace hyperfill
