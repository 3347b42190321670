#include "hyperfill/filling.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hyperfill {

void FillingParams::validate() const {
    if (!(alpha > 1.0)) throw std::invalid_argument("filling: alpha must exceed 1");
    const double bound = std::max(3.0, alpha / (alpha - 1.0));
    if (!(tau > bound))
        throw std::invalid_argument("filling: tau must exceed max{3, alpha/(alpha-1)} = " +
                                    std::to_string(bound));
    if (n_min > n_max) throw std::invalid_argument("filling: n_min must not exceed n_max");
}

double FillingParams::scale(int n) const { return std::pow(alpha, -n); }

int FillingParams::saturation_level(const PointCloudSpace& space, double alpha) {
    const double dmin = space.min_positive_distance();
    // smallest n with alpha^{-n} < dmin
    int n = static_cast<int>(std::floor(-std::log(dmin) / std::log(alpha))) - 1;
    while (std::pow(alpha, -n) >= dmin) ++n;
    return n;
}

FillingParams FillingParams::with_defaults(const PointCloudSpace& space, double alpha,
                                           double tau) {
    FillingParams p;
    p.alpha = alpha;
    p.tau = tau;
    const double diam = space.diameter();
    // largest n with alpha^{-n} >= diam
    int n = static_cast<int>(std::ceil(-std::log(diam) / std::log(alpha))) + 1;
    while (std::pow(alpha, -n) < diam) --n;
    p.n_min = n;
    p.n_max = saturation_level(space, alpha) + 2;
    p.validate();
    return p;
}

Net build_nets(const PointCloudSpace& space, const FillingParams& params) {
    params.validate();
    Net net;
    net.n_min = params.n_min;
    net.n_max = params.n_max;
    net.centers.resize(params.n_max - params.n_min + 1);
    for (int n = params.n_min; n <= params.n_max; ++n) {
        const double sep = params.scale(n);
        auto& centers = net.centers[n - params.n_min];
        for (std::size_t z = 0; z < space.size(); ++z) {
            bool ok = true;
            for (int c : centers)
                if (space.dist(z, c) < sep) {
                    ok = false;
                    break;
                }
            if (ok) centers.push_back(static_cast<int>(z));
        }
    }
    return net;
}

bool balls_intersect(const PointCloudSpace& space, const FillingGraph& graph, int v, int w) {
    const double rv = graph.ball_radius(v), rw = graph.ball_radius(w);
    const int pv = graph.project(v), pw = graph.project(w);
    for (std::size_t z = 0; z < space.size(); ++z)
        if (space.dist(pv, z) < rv && space.dist(pw, z) < rw) return true;
    return false;
}

FillingGraph build_filling(const PointCloudSpace& space, const Net& nets,
                           const FillingParams& params) {
    params.validate();
    FillingGraph g;
    g.params = params;
    g.level_offset.resize(params.n_max - params.n_min + 1);
    for (int n = params.n_min; n <= params.n_max; ++n)
        for (int z : nets.level(n)) {
            g.level_offset[n - params.n_min].push_back(static_cast<int>(g.vertices.size()));
            g.vertices.push_back({z, n});
        }
    g.adjacency.resize(g.vertices.size());

    auto add_edge = [&](int a, int b, EdgeKind kind) {
        const int id = static_cast<int>(g.edges.size());
        g.edges.push_back({a, b, kind});
        g.adjacency[a].push_back(id);
        g.adjacency[b].push_back(id);
    };

    for (int n = params.n_min; n <= params.n_max; ++n) {
        const auto& lv = g.level_vertices(n);
        for (std::size_t i = 0; i < lv.size(); ++i)
            for (std::size_t j = i + 1; j < lv.size(); ++j)
                if (balls_intersect(space, g, lv[i], lv[j]))
                    add_edge(lv[i], lv[j], EdgeKind::horizontal);
        if (n < params.n_max) {
            const auto& up = g.level_vertices(n + 1);
            for (int v : lv)
                for (int w : up)
                    if (balls_intersect(space, g, v, w))
                        add_edge(v, w, EdgeKind::vertical);
        }
    }

    // connectivity check
    if (!g.vertices.empty()) {
        std::vector<char> seen(g.vertices.size(), 0);
        std::queue<int> q;
        q.push(0);
        seen[0] = 1;
        std::size_t count = 1;
        while (!q.empty()) {
            const int v = q.front();
            q.pop();
            for (int e : g.adjacency[v]) {
                const int w = g.other_end(e, v);
                if (!seen[w]) {
                    seen[w] = 1;
                    ++count;
                    q.push(w);
                }
            }
        }
        if (count != g.vertices.size())
            throw std::runtime_error("build_filling: internal consistency failure, graph disconnected");
    }
    return g;
}

int FillingGraph::find_vertex(int point, int level) const {
    for (int v : level_vertices(level))
        if (vertices[v].point == point) return v;
    return -1;
}

std::vector<int> vertical_geodesic(const PointCloudSpace& space, const FillingGraph& graph,
                                   int z, int n_from, int n_to) {
    if (n_from < graph.params.n_min || n_to > graph.params.n_max || n_from > n_to)
        throw std::invalid_argument("vertical_geodesic: level range out of bounds");
    std::vector<int> path;
    for (int n = n_from; n <= n_to; ++n) {
        const double anchor = graph.params.scale(n);
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (int v : graph.level_vertices(n)) {
            const double d = space.dist(graph.project(v), z);
            if (d < anchor && d < best_d) {
                best = v;
                best_d = d;
            }
        }
        if (best < 0)
            throw std::runtime_error("vertical_geodesic: no anchored center (maximality broken)");
        path.push_back(best);
    }
    return path;
}

Hull hull(const PointCloudSpace& space, const FillingGraph& graph, int z, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("hull: radius must be positive");
    Hull h;
    h.center_point = z;
    h.radius = r;
    h.vertex_mask.assign(graph.vertices.size(), 0);
    for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
        if (graph.params.scale(graph.height(static_cast<int>(v))) > r) continue;
        // B(v) meets B_Z(z,r) iff a witness point lies in both
        const int pv = graph.project(static_cast<int>(v));
        const double rv = graph.ball_radius(static_cast<int>(v));
        for (std::size_t w = 0; w < space.size(); ++w)
            if (space.dist(pv, w) < rv && space.dist(z, w) < r) {
                h.vertex_mask[v] = 1;
                h.vertices.push_back(static_cast<int>(v));
                break;
            }
    }
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
        const auto& edge = graph.edges[e];
        const bool in_a = h.vertex_mask[edge.a], in_b = h.vertex_mask[edge.b];
        if (in_a && in_b)
            h.full_edges.push_back(static_cast<int>(e));
        else if (in_a)
            h.half_edges.emplace_back(static_cast<int>(e), edge.a);
        else if (in_b)
            h.half_edges.emplace_back(static_cast<int>(e), edge.b);
    }
    return h;
}

DegreeStats degree_stats(const FillingGraph& graph) {
    DegreeStats s;
    s.per_level_max.assign(graph.level_offset.size(), 0);
    for (std::size_t v = 0; v < graph.vertices.size(); ++v) {
        const int deg = static_cast<int>(graph.adjacency[v].size());
        s.max_degree = std::max(s.max_degree, deg);
        auto& lvl = s.per_level_max[graph.height(static_cast<int>(v)) - graph.params.n_min];
        lvl = std::max(lvl, deg);
        ++s.histogram[deg];
    }
    return s;
}

std::string graph_to_json(const FillingGraph& graph, const std::vector<double>* rho_lengths) {
    nlohmann::json j;
    j["vertices"] = nlohmann::json::array();
    for (std::size_t v = 0; v < graph.vertices.size(); ++v)
        j["vertices"].push_back({{"id", v},
                                 {"level", graph.height(static_cast<int>(v))},
                                 {"center", graph.project(static_cast<int>(v))},
                                 {"ball_radius", graph.ball_radius(static_cast<int>(v))}});
    j["edges"] = nlohmann::json::array();
    for (std::size_t e = 0; e < graph.edges.size(); ++e) {
        nlohmann::json je = {{"a", graph.edges[e].a},
                             {"b", graph.edges[e].b},
                             {"kind", graph.edges[e].kind == EdgeKind::horizontal
                                          ? "horizontal"
                                          : "vertical"}};
        if (rho_lengths) je["rho_length"] = (*rho_lengths)[e];
        j["edges"].push_back(std::move(je));
    }
    return j.dump(2);
}

std::string graph_to_dot(const FillingGraph& graph) {
    std::ostringstream out;
    out << "graph filling {\n";
    for (std::size_t v = 0; v < graph.vertices.size(); ++v)
        out << "  v" << v << " [label=\"(" << graph.project(static_cast<int>(v)) << ","
            << graph.height(static_cast<int>(v)) << ")\"];\n";
    for (const auto& e : graph.edges)
        out << "  v" << e.a << " -- v" << e.b
            << (e.kind == EdgeKind::vertical ? " [style=bold];\n" : ";\n");
    out << "}\n";
    return out.str();
}

}  // namespace hyperfill
