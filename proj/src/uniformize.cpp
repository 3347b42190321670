#include "hyperfill/uniformize.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>

#include <json.hpp>

namespace hyperfill {

double rho_length_horizontal(double alpha, int level) { return std::pow(alpha, -level); }

double rho_length_vertical(double alpha, int level) {
    // int_0^1 alpha^{-(level+t)} dt
    return std::pow(alpha, -level) * (1.0 - 1.0 / alpha) / std::log(alpha);
}

double rho_length_tail(double alpha, int level) {
    // int_0^inf alpha^{-(level+t)} dt
    return std::pow(alpha, -level) / std::log(alpha);
}

UniformizedGraph uniformize(const PointCloudSpace& space, const FillingGraph& graph) {
    UniformizedGraph u;
    u.graph = graph;
    u.n_interior = graph.vertices.size();
    u.n_boundary = space.size();
    u.adjacency.resize(u.node_count());

    const double alpha = graph.params.alpha;
    auto add_edge = [&](UEdge e) {
        const int id = static_cast<int>(u.edges.size());
        u.adjacency[e.a].push_back(id);
        u.adjacency[e.b].push_back(id);
        u.edges.push_back(e);
    };

    for (const auto& e : graph.edges) {
        if (e.kind == EdgeKind::horizontal) {
            const int n = graph.height(e.a);
            add_edge({e.a, e.b, UEdgeKind::horizontal, n, rho_length_horizontal(alpha, n)});
        } else {
            const int n = graph.height(e.a);
            add_edge({e.a, e.b, UEdgeKind::vertical, n, rho_length_vertical(alpha, n)});
        }
    }

    // Boundary attachment: tail edge from every anchored top-level vertex.
    const int n_max = graph.params.n_max;
    const double anchor = graph.params.scale(n_max);
    std::vector<char> attached(space.size(), 0);
    for (int v : graph.level_vertices(n_max))
        for (std::size_t z = 0; z < space.size(); ++z)
            if (space.dist(graph.project(v), z) < anchor) {
                add_edge({v, u.boundary_node(static_cast<int>(z)), UEdgeKind::tail, n_max,
                          rho_length_tail(alpha, n_max)});
                attached[z] = 1;
            }
    for (std::size_t z = 0; z < space.size(); ++z)
        if (!attached[z])
            throw std::runtime_error(
                "uniformize: internal consistency failure, boundary point without tail edge");
    return u;
}

std::vector<double> UniformizedGraph::dijkstra(int source, std::vector<int>& pred_edge) const {
    std::vector<double> dist(node_count(), std::numeric_limits<double>::infinity());
    pred_edge.assign(node_count(), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[source] = 0.0;
    pq.emplace(0.0, source);
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d > dist[v]) continue;
        for (int e : adjacency[v]) {
            const int w = other_end(e, v);
            const double nd = d + edges[e].rho_length;
            if (nd < dist[w]) {
                dist[w] = nd;
                pred_edge[w] = e;
                pq.emplace(nd, w);
            }
        }
    }
    return dist;
}

std::vector<double> UniformizedGraph::dijkstra(int source) const {
    std::vector<int> pred;
    return dijkstra(source, pred);
}

double UniformizedGraph::d_rho(int x, int y) const {
    if (x == y) return 0.0;
    return dijkstra(x)[y];
}

double UniformizedGraph::d_rho_boundary(int x) const {
    const auto dist = dijkstra(x);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t z = 0; z < n_boundary; ++z)
        best = std::min(best, dist[n_interior + z]);
    return best;
}

std::vector<int> UniformizedGraph::unit_distances(int source) const {
    std::vector<int> dist(n_interior, -1);
    std::queue<int> q;
    dist[source] = 0;
    q.push(source);
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (int e : graph.adjacency[v]) {
            const int w = graph.other_end(e, v);
            if (dist[w] < 0) {
                dist[w] = dist[v] + 1;
                q.push(w);
            }
        }
    }
    return dist;
}

double UniformizedGraph::gromov_product_h(int x, int y) const {
    if (x >= static_cast<int>(n_interior) || y >= static_cast<int>(n_interior))
        throw std::invalid_argument("gromov_product_h: interior vertices only");
    const int d = unit_distances(x)[y];
    return 0.5 * (graph.height(x) + graph.height(y) - d);
}

std::string UniformizedGraph::to_json() const {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (std::size_t v = 0; v < n_interior; ++v)
        j["vertices"].push_back({{"id", v},
                                 {"level", graph.height(static_cast<int>(v))},
                                 {"center", graph.project(static_cast<int>(v))},
                                 {"ball_radius", graph.ball_radius(static_cast<int>(v))}});
    j["boundary"] = nlohmann::json::array();
    for (std::size_t z = 0; z < n_boundary; ++z)
        j["boundary"].push_back({{"id", n_interior + z}, {"point", z}});
    j["edges"] = nlohmann::json::array();
    for (const auto& e : edges) {
        const char* kind = e.kind == UEdgeKind::horizontal ? "horizontal"
                           : e.kind == UEdgeKind::vertical ? "vertical"
                                                           : "tail";
        j["edges"].push_back(
            {{"a", e.a}, {"b", e.b}, {"kind", kind}, {"rho_length", e.rho_length}});
    }
    return j.dump(2);
}

}  // namespace hyperfill
