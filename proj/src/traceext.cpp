#include "hyperfill/traceext.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

namespace hyperfill {

TraceResult trace(const PointCloudSpace& space, const UniformizedGraph& ugraph,
                  const std::vector<PartitionOfUnity>& pous, const GraphFunction& u,
                  int n_from, int n_to, double p) {
    TraceResult res;
    res.n_from = n_from;
    res.n_to = n_to;
    for (int n = n_from; n <= n_to; ++n) {
        const auto& pou = pous[n - ugraph.graph.params.n_min];
        BoundaryFunction tn(space.size(), 0.0);
        for (std::size_t c = 0; c < pou.centers.size(); ++c) {
            const double uv = u[pou.center_vertex[c]];
            for (std::size_t z = 0; z < space.size(); ++z) tn[z] += uv * pou.psi[c][z];
        }
        res.levels.push_back(std::move(tn));
    }
    for (std::size_t k = 0; k + 1 < res.levels.size(); ++k) {
        BoundaryFunction diff(space.size());
        for (std::size_t z = 0; z < space.size(); ++z)
            diff[z] = res.levels[k + 1][z] - res.levels[k][z];
        res.decay.push_back(lp_norm_boundary(space, diff, p));
    }
    return res;
}

ExtensionResult poisson_extension(const PointCloudSpace& space,
                                  const UniformizedGraph& ugraph, const BoundaryFunction& f) {
    if (f.size() != space.size())
        throw std::invalid_argument("poisson_extension: function size mismatch");
    ExtensionResult ext;
    ext.values.assign(ugraph.node_count(), 0.0);
    const auto& g = ugraph.graph;
    for (std::size_t v = 0; v < ugraph.n_interior; ++v) {
        const int pv = g.project(static_cast<int>(v));
        const double rv = g.ball_radius(static_cast<int>(v));
        double num = 0.0, den = 0.0;
        for (std::size_t z = 0; z < space.size(); ++z)
            if (space.dist(pv, z) < rv) {
                num += f[z] * space.weight(z);
                den += space.weight(z);
            }
        ext.values[v] = num / den;
    }
    for (std::size_t z = 0; z < space.size(); ++z)
        ext.values[ugraph.boundary_node(static_cast<int>(z))] = f[z];
    return ext;
}

GraphFunction truncate_extension(const UniformizedGraph& ugraph, const ExtensionResult& ext,
                                 int n) {
    GraphFunction out(ext.values);
    for (std::size_t v = 0; v < ugraph.n_interior; ++v)
        if (ugraph.graph.height(static_cast<int>(v)) <= n) out[v] = 0.0;
    return out;
}

std::vector<BoundaryFunction> hajlasz_gradients(const PointCloudSpace& space,
                                                const UniformizedGraph& ugraph,
                                                const std::vector<double>& g_edges,
                                                double theta, int k_from, int k_to) {
    if (g_edges.size() != ugraph.edges.size())
        throw std::invalid_argument("hajlasz_gradients: edge value size mismatch");
    const auto& graph = ugraph.graph;
    const double alpha = graph.params.alpha;
    const int n_max = graph.params.n_max;
    std::vector<BoundaryFunction> out;

    // edge id lookup for the interior skeleton plus tails
    auto edge_between = [&](int a, int b) -> int {
        for (int e : ugraph.adjacency[a])
            if (ugraph.other_end(e, a) == b) return e;
        return -1;
    };

    for (int k = k_from; k <= k_to; ++k) {
        BoundaryFunction gk(space.size(), 0.0);
        for (std::size_t z = 0; z < space.size(); ++z) {
            // v_{k,z}: anchored center, nearest then lowest id
            const auto ray =
                vertical_geodesic(space, graph, static_cast<int>(z), k, n_max);
            double line = 0.0;
            for (std::size_t i = 0; i + 1 < ray.size(); ++i) {
                const int e = edge_between(ray[i], ray[i + 1]);
                line += g_edges[e] * ugraph.edges[e].rho_length;
            }
            // the anchored ray continues through the tail edge to z
            const int tail =
                edge_between(ray.back(), ugraph.boundary_node(static_cast<int>(z)));
            if (tail >= 0) line += g_edges[tail] * ugraph.edges[tail].rho_length;
            double star = 0.0;
            for (int e : ugraph.adjacency[ray.front()])
                if (ugraph.edges[e].kind == UEdgeKind::horizontal)
                    star += g_edges[e] * ugraph.edges[e].rho_length;
            gk[z] = std::pow(alpha, theta * (k + 1)) * (line + star);
        }
        out.push_back(std::move(gk));
    }
    return out;
}

namespace {

std::vector<int> extract_path(const std::vector<int>& pred_edge,
                              const UniformizedGraph& ugraph, int target) {
    std::vector<int> edges;
    int v = target;
    while (pred_edge[v] >= 0) {
        edges.push_back(pred_edge[v]);
        v = ugraph.other_end(pred_edge[v], v);
    }
    std::reverse(edges.begin(), edges.end());
    return edges;
}

}  // namespace

std::vector<GradientViolation> check_hyperbolic_upper_gradient(
    [[maybe_unused]] const PointCloudSpace& space, const UniformizedGraph& ugraph,
    const BoundaryFunction& f,
    const std::vector<double>& g_edges, int path_budget,
    const std::vector<std::pair<int, int>>& pairs) {
    if (path_budget < 1)
        throw std::invalid_argument("check_hyperbolic_upper_gradient: path_budget >= 1");
    std::vector<GradientViolation> violations;
    auto path_integral = [&](const std::vector<int>& edges) {
        double acc = 0.0;
        for (int e : edges) acc += g_edges[e] * ugraph.edges[e].rho_length;
        return acc;
    };
    for (auto [x, y] : pairs) {
        const int nx = ugraph.boundary_node(x), ny = ugraph.boundary_node(y);
        const double lhs = std::abs(f[x] - f[y]);
        std::vector<int> pred_x;
        const auto dist_x = ugraph.dijkstra(nx, pred_x);
        // candidate near-shortest paths: shortest, plus shortest through
        // each via-node, cheapest first
        std::vector<std::pair<double, int>> vias;  // (length, via node; -1 = direct)
        vias.emplace_back(dist_x[ny], -1);
        for (std::size_t m = 0; m < ugraph.node_count(); ++m)
            if (static_cast<int>(m) != nx && static_cast<int>(m) != ny)
                vias.emplace_back(dist_x[m] + ugraph.dijkstra(static_cast<int>(m))[ny],
                                  static_cast<int>(m));
        std::sort(vias.begin(), vias.end());
        std::set<std::vector<int>> seen;
        int tested = 0;
        for (const auto& [len, via] : vias) {
            if (tested >= path_budget) break;
            std::vector<int> path;
            if (via < 0) {
                path = extract_path(pred_x, ugraph, ny);
            } else {
                std::vector<int> pred_via;
                ugraph.dijkstra(via, pred_via);
                path = extract_path(pred_via, ugraph, nx);
                std::reverse(path.begin(), path.end());
                const auto second = extract_path(pred_via, ugraph, ny);
                path.insert(path.end(), second.begin(), second.end());
            }
            if (!seen.insert(path).second) continue;
            ++tested;
            const double rhs = path_integral(path);
            if (lhs > rhs + 1e-12 * (1.0 + lhs)) violations.push_back({x, y, lhs, rhs});
        }
    }
    return violations;
}

}  // namespace hyperfill
