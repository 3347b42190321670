#include "hyperfill/measure.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hyperfill {

namespace {

struct EdgeForms {
    double alpha, beta, log_alpha;

    // closed-form masses; S = mu_hat(a) + mu_hat(b), n = level of the edge
    double horizontal(double S, int n) const { return std::pow(alpha, -beta * n) * S; }
    double vertical(double S, int n) const {
        return S * std::pow(alpha, -beta * n) * (1.0 - std::pow(alpha, -beta)) /
               (beta * log_alpha);
    }
    double tail(double S, int n) const {
        return S * std::pow(alpha, -beta * n) / (beta * log_alpha);
    }
    // mass of t in [t0,t1] along a vertical/tail edge rooted at level n
    double vertical_segment(double S, int n, double t0, double t1) const {
        return S * std::pow(alpha, -beta * n) *
               (std::pow(alpha, -beta * t0) - std::pow(alpha, -beta * t1)) /
               (beta * log_alpha);
    }
    // invert rho-arclength s (from the level-n endpoint) to the unit parameter t
    double t_of_s(double s, int n) const {
        const double x = 1.0 - s * std::pow(alpha, n) * log_alpha;
        if (x <= 0.0) return std::numeric_limits<double>::infinity();
        return -std::log(x) / log_alpha;
    }
};

}  // namespace

LiftedMeasure lift_measure(const UniformizedGraph& ugraph, const PointCloudSpace& space,
                           double beta) {
    if (!(beta > 0.0)) throw std::invalid_argument("lift_measure: beta must be positive");
    LiftedMeasure m;
    m.beta = beta;
    const auto& g = ugraph.graph;
    const EdgeForms forms{g.params.alpha, beta, std::log(g.params.alpha)};

    m.mu_hat.resize(ugraph.n_interior);
    for (std::size_t v = 0; v < ugraph.n_interior; ++v)
        m.mu_hat[v] =
            space.ball_measure(g.project(static_cast<int>(v)), g.ball_radius(static_cast<int>(v)));

    m.edge_mass.resize(ugraph.edges.size());
    for (std::size_t e = 0; e < ugraph.edges.size(); ++e) {
        const auto& edge = ugraph.edges[e];
        switch (edge.kind) {
            case UEdgeKind::horizontal:
                m.edge_mass[e] =
                    forms.horizontal(m.mu_hat[edge.a] + m.mu_hat[edge.b], edge.level);
                break;
            case UEdgeKind::vertical:
                m.edge_mass[e] =
                    forms.vertical(m.mu_hat[edge.a] + m.mu_hat[edge.b], edge.level);
                break;
            case UEdgeKind::tail: {
                const double S =
                    m.mu_hat[edge.a] + space.weight(ugraph.boundary_point(edge.b));
                m.edge_mass[e] = forms.tail(S, edge.level);
                break;
            }
        }
    }
    return m;
}

double LiftedMeasure::edge_mass_segment(const UniformizedGraph& ugraph, int e, double s0,
                                        double s1) const {
    const auto& edge = ugraph.edges[e];
    s0 = std::clamp(s0, 0.0, edge.rho_length);
    s1 = std::clamp(s1, 0.0, edge.rho_length);
    if (s1 <= s0) return 0.0;
    if (edge.kind == UEdgeKind::horizontal)
        return edge_mass[e] * (s1 - s0) / edge.rho_length;
    const double alpha = ugraph.graph.params.alpha;
    const EdgeForms forms{alpha, beta, std::log(alpha)};
    const double S = edge_mass[e] /
                     (edge.kind == UEdgeKind::vertical
                          ? forms.vertical(1.0, edge.level)
                          : forms.tail(1.0, edge.level));
    const double t_end = edge.kind == UEdgeKind::vertical
                             ? 1.0
                             : std::numeric_limits<double>::infinity();
    const double t0 = std::min(t_end, forms.t_of_s(s0, edge.level));
    const double t1 = s1 >= edge.rho_length * (1.0 - 1e-15)
                          ? t_end
                          : std::min(t_end, forms.t_of_s(s1, edge.level));
    return forms.vertical_segment(S, edge.level, t0, t1);
}

double LiftedMeasure::total_mass() const {
    double m = 0.0;
    for (double v : edge_mass) m += v;
    return m;
}

double half_edge_mass(const LiftedMeasure& measure, const UniformizedGraph& ugraph,
                      int e, int toward) {
    const auto& edge = ugraph.edges[e];
    // half toward the qualifying endpoint in the unit-length (Lebesgue)
    // parametrization
    if (edge.kind == UEdgeKind::horizontal) return 0.5 * measure.edge_mass[e];
    const double alpha = ugraph.graph.params.alpha;
    const EdgeForms forms{alpha, measure.beta, std::log(alpha)};
    const double S = measure.mu_hat[edge.a] + measure.mu_hat[edge.b];
    return toward == edge.a ? forms.vertical_segment(S, edge.level, 0.0, 0.5)
                            : forms.vertical_segment(S, edge.level, 0.5, 1.0);
}

double hull_mass(const LiftedMeasure& measure, const UniformizedGraph& ugraph,
                 const Hull& h) {
    double m = 0.0;
    for (int e : h.full_edges) m += measure.edge_mass[e];
    for (auto [e, v] : h.half_edges) m += half_edge_mass(measure, ugraph, e, v);
    return m;
}

std::vector<EdgeSegment> ball_segments(const UniformizedGraph& ugraph,
                                       const std::vector<double>& dist, double r) {
    std::vector<EdgeSegment> segs;
    for (std::size_t e = 0; e < ugraph.edges.size(); ++e) {
        const auto& edge = ugraph.edges[e];
        const double L = edge.rho_length;
        const double from_a = std::min(L, r - dist[edge.a]);  // reachable from a-side
        const double from_b = std::min(L, r - dist[edge.b]);
        if (from_a <= 0.0 && from_b <= 0.0) continue;
        if (from_a + from_b >= L) {
            segs.push_back({static_cast<int>(e), 0.0, L});
            continue;
        }
        if (from_a > 0.0) segs.push_back({static_cast<int>(e), 0.0, from_a});
        if (from_b > 0.0) segs.push_back({static_cast<int>(e), L - from_b, L});
    }
    return segs;
}

double ball_mass_rho(const LiftedMeasure& measure, const UniformizedGraph& ugraph,
                     const std::vector<double>& dist, double r) {
    double m = 0.0;
    for (const auto& seg : ball_segments(ugraph, dist, r)) {
        const double L = ugraph.edges[seg.edge].rho_length;
        if (seg.s0 == 0.0 && seg.s1 == L)
            m += measure.edge_mass[seg.edge];
        else
            m += measure.edge_mass_segment(ugraph, seg.edge, seg.s0, seg.s1);
    }
    return m;
}

double ball_mass_rho(const LiftedMeasure& measure, const UniformizedGraph& ugraph,
                     int center_node, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("ball_mass_rho: radius must be positive");
    return ball_mass_rho(measure, ugraph, ugraph.dijkstra(center_node), r);
}

double level_mass(const LiftedMeasure& measure, const UniformizedGraph& ugraph, int n) {
    double m = 0.0;
    for (std::size_t e = 0; e < ugraph.edges.size(); ++e) {
        const auto& edge = ugraph.edges[e];
        const int ha = ugraph.graph.height(edge.a);
        const bool touches = ha == n ||
                             (edge.kind != UEdgeKind::tail && ugraph.graph.height(edge.b) == n) ||
                             (edge.kind == UEdgeKind::vertical && ha + 1 == n);
        if (touches) m += measure.edge_mass[e];
    }
    return m;
}

ReportTable doubling_sweep(const LiftedMeasure& measure, const UniformizedGraph& ugraph,
                           const std::vector<BallSample>& samples) {
    ReportTable t;
    t.name = "mu_beta_doubling";
    for (const auto& s : samples) {
        const auto dist = ugraph.dijkstra(s.node);
        const double small = ball_mass_rho(measure, ugraph, dist, s.r);
        const double big = ball_mass_rho(measure, ugraph, dist, 2.0 * s.r);
        if (small <= 0.0) continue;
        t.add("doubling", s.node, s.r, big, small, big / small);
    }
    return t;
}

DecayFit lower_decay_fit(const LiftedMeasure& measure, const UniformizedGraph& ugraph,
                         const std::vector<int>& centers, const std::vector<double>& radii) {
    // Pooled least-squares slope of log mass vs log r over all samples with
    // positive mass; C is the smallest envelope constant making
    // mass(r')/mass(r) >= C^{-1} (r'/r)^Q hold on the sampled pairs.
    std::vector<double> xs, ys;
    for (int c : centers) {
        const auto dist = ugraph.dijkstra(c);
        for (double r : radii) {
            const double m = ball_mass_rho(measure, ugraph, dist, r);
            if (m > 0.0) {
                xs.push_back(std::log(r));
                ys.push_back(std::log(m));
            }
        }
    }
    DecayFit fit;
    if (xs.size() < 2) return fit;
    const auto slope = fit_slope(xs, ys);
    fit.Q = slope.slope;
    double lo = 0.0, hi = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double resid = ys[i] - (slope.intercept + slope.slope * xs[i]);
        lo = std::min(lo, resid);
        hi = std::max(hi, resid);
    }
    fit.C = std::exp(hi - lo);
    return fit;
}

}  // namespace hyperfill
