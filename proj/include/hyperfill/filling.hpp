#pragma once

#include <map>
#include <string>
#include <vector>

#include "hyperfill/space.hpp"

namespace hyperfill {

struct FillingParams {
    double alpha = 2.0;  // scale base, > 1
    double tau = 4.0;    // ball dilation, > max{3, alpha/(alpha-1)}
    int n_min = 0;
    int n_max = 0;

    /// Throws std::invalid_argument on violation of the parameter
    /// constraints (tau too small, alpha <= 1, empty level range).
    void validate() const;

    double scale(int n) const;  // alpha^{-n}

    /// n_min = largest n with alpha^{-n} >= diameter (root level),
    /// n_max = saturation level + 2.
    static FillingParams with_defaults(const PointCloudSpace& space, double alpha,
                                       double tau);
    static int saturation_level(const PointCloudSpace& space, double alpha);
};

/// Per-level maximal separated nets (greedy, ascending point index).
struct Net {
    int n_min = 0;
    int n_max = 0;
    std::vector<std::vector<int>> centers;  // centers[n - n_min] = point indices

    const std::vector<int>& level(int n) const { return centers[n - n_min]; }
};

enum class EdgeKind { horizontal, vertical };

struct FillingVertex {
    int point;  // pi(v), index into the space
    int level;  // h(v)
};

struct FillingEdge {
    int a, b;  // vertex ids; for vertical edges a is the lower level
    EdgeKind kind;
};

class FillingGraph {
public:
    FillingParams params;
    std::vector<FillingVertex> vertices;
    std::vector<FillingEdge> edges;
    std::vector<std::vector<int>> adjacency;     // vertex -> incident edge ids
    std::vector<std::vector<int>> level_offset;  // vertex ids per level (n - n_min indexed)

    int height(int v) const { return vertices[v].level; }
    int project(int v) const { return vertices[v].point; }
    double ball_radius(int v) const { return params.tau * params.scale(height(v)); }
    const std::vector<int>& level_vertices(int n) const {
        return level_offset[n - params.n_min];
    }
    int other_end(int edge, int v) const {
        return edges[edge].a == v ? edges[edge].b : edges[edge].a;
    }
    int find_vertex(int point, int level) const;  // -1 if absent
};

/// Hull H^B of a boundary ball B = B_Z(z,r): qualifying vertices plus the
/// edge pieces of the half-ball union (full edges and half-edges).
struct Hull {
    int center_point = -1;
    double radius = 0.0;
    std::vector<int> vertices;
    std::vector<int> full_edges;                       // both endpoints qualify
    std::vector<std::pair<int, int>> half_edges;       // (edge id, qualifying vertex)
    std::vector<char> vertex_mask;                     // per graph vertex

    bool empty() const { return vertices.empty(); }
};

struct DegreeStats {
    int max_degree = 0;
    std::vector<int> per_level_max;  // indexed by n - n_min
    std::map<int, int> histogram;    // degree -> count
};

Net build_nets(const PointCloudSpace& space, const FillingParams& params);

FillingGraph build_filling(const PointCloudSpace& space, const Net& nets,
                           const FillingParams& params);

/// Anchored ascending vertical path: one vertex per level in [n_from, n_to]
/// with d(pi(v_k), z) < alpha^{-k}; tie-break nearest center then lowest id.
std::vector<int> vertical_geodesic(const PointCloudSpace& space, const FillingGraph& graph,
                                   int z, int n_from, int n_to);

Hull hull(const PointCloudSpace& space, const FillingGraph& graph, int z, double r);

DegreeStats degree_stats(const FillingGraph& graph);

/// True iff the dilated balls B(v), B(w) share a witness point of Z.
bool balls_intersect(const PointCloudSpace& space, const FillingGraph& graph, int v, int w);

std::string graph_to_json(const FillingGraph& graph,
                          const std::vector<double>* rho_lengths = nullptr);
std::string graph_to_dot(const FillingGraph& graph);

}  // namespace hyperfill
