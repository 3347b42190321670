#include "hyperfill/funcspace.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace hyperfill {

void BesovParams::validate() const {
    if (!(p >= 1.0)) throw std::invalid_argument("besov: p must be >= 1");
    if (!(theta > 0.0 && theta < 1.0))
        throw std::invalid_argument("besov: theta must lie in (0,1)");
}

double besov_norm(const PointCloudSpace& space, const BoundaryFunction& f, double p,
                  double theta) {
    const std::size_t n = space.size();
    if (f.size() != n) throw std::invalid_argument("besov_norm: function size mismatch");
    double acc = 0.0;
    for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y) {
            if (x == y) continue;
            const double d = space.dist(x, y);
            const double diff = std::abs(f[x] - f[y]);
            if (diff == 0.0) continue;
            acc += std::pow(diff, p) / std::pow(d, p * theta) * space.weight(x) *
                   space.weight(y) / space.ball_measure(x, d);
        }
    return std::pow(acc, 1.0 / p);
}

double besov_norm_dyadic(const PointCloudSpace& space, const BoundaryFunction& f, double p,
                         double theta, double alpha) {
    if (!(alpha > 1.0)) throw std::invalid_argument("besov_norm_dyadic: alpha must exceed 1");
    const std::size_t npts = space.size();
    if (f.size() != npts) throw std::invalid_argument("besov_norm_dyadic: size mismatch");
    const double dmin = space.min_positive_distance();
    // finest contributing level: alpha^{-n} > dmin
    int n_hi = static_cast<int>(std::ceil(-std::log(dmin) / std::log(alpha))) + 1;
    while (std::pow(alpha, -n_hi) <= dmin) --n_hi;

    double acc = 0.0;
    for (int n = n_hi;; --n) {
        const double r = std::pow(alpha, -n);
        double term = 0.0;
        for (std::size_t x = 0; x < npts; ++x) {
            double inner = 0.0, mass = 0.0;
            for (std::size_t y = 0; y < npts; ++y)
                if (space.dist(x, y) < r) {
                    inner += std::pow(std::abs(f[x] - f[y]), p) * space.weight(y);
                    mass += space.weight(y);
                }
            term += space.weight(x) * inner / mass;
        }
        term /= std::pow(r, theta * p);
        acc += term;
        if (term <= 1e-12 * acc) break;
        if (n < n_hi - 200) break;  // safeguard; cannot trigger before the relative cutoff
    }
    return std::pow(acc, 1.0 / p);
}

double lp_norm_boundary(const PointCloudSpace& space, const BoundaryFunction& f, double p) {
    if (f.size() != space.size())
        throw std::invalid_argument("lp_norm_boundary: size mismatch");
    double acc = 0.0;
    for (std::size_t z = 0; z < space.size(); ++z)
        acc += std::pow(std::abs(f[z]), p) * space.weight(z);
    return std::pow(acc, 1.0 / p);
}

double edge_gradient(const UniformizedGraph& ugraph, const GraphFunction& u, int edge) {
    const auto& e = ugraph.edges[edge];
    return std::abs(u[e.a] - u[e.b]) / e.rho_length;
}

std::vector<double> edge_gradients(const UniformizedGraph& ugraph, const GraphFunction& u) {
    std::vector<double> g(ugraph.edges.size());
    for (std::size_t e = 0; e < ugraph.edges.size(); ++e)
        g[e] = edge_gradient(ugraph, u, static_cast<int>(e));
    return g;
}

double dirichlet_norm(const UniformizedGraph& ugraph, const LiftedMeasure& measure,
                      const GraphFunction& u, double p) {
    double acc = 0.0;
    for (std::size_t e = 0; e < ugraph.edges.size(); ++e)
        acc += std::pow(edge_gradient(ugraph, u, static_cast<int>(e)), p) *
               measure.edge_mass[e];
    return std::pow(acc, 1.0 / p);
}

namespace {

// 16-node Gauss-Legendre on [0,1]
constexpr int kGL = 16;
constexpr double kGLx[kGL] = {
    0.0052995325041750, 0.0277124884633837, 0.0671843988060841, 0.1222977958224985,
    0.1910618777986781, 0.2709916111713863, 0.3591982246103705, 0.4524937450811813,
    0.5475062549188187, 0.6408017753896295, 0.7290083888286137, 0.8089381222013219,
    0.8777022041775015, 0.9328156011939159, 0.9722875115366163, 0.9947004674958250};
constexpr double kGLw[kGL] = {
    0.0135762297058770, 0.0311267619693239, 0.0475792558412464, 0.0623144856277669,
    0.0747979944082884, 0.0845782596975013, 0.0913017075224618, 0.0947253052275343,
    0.0947253052275343, 0.0913017075224618, 0.0845782596975013, 0.0747979944082884,
    0.0623144856277669, 0.0475792558412464, 0.0311267619693239, 0.0135762297058770};

}  // namespace

double lp_norm_graph(const UniformizedGraph& ugraph, const LiftedMeasure& measure,
                     const GraphFunction& u, double p) {
    const double alpha = ugraph.graph.params.alpha;
    const double beta = measure.beta;
    const double log_alpha = std::log(alpha);
    double acc = 0.0;
    for (std::size_t e = 0; e < ugraph.edges.size(); ++e) {
        const auto& edge = ugraph.edges[e];
        const double ua = u[edge.a], ub = u[edge.b];
        const double L = edge.rho_length;
        // density per unit Lebesgue length at parameter t; S recovered from
        // the closed-form edge mass so tail endpoints need no space lookup
        double S_density;  // S * alpha^{-beta*level}
        double segment_sum = 0.0;
        auto rho_arc = [&](double t) {
            // arclength from the a-endpoint at parameter t
            switch (edge.kind) {
                case UEdgeKind::horizontal:
                    return t * L;
                default:
                    return std::pow(alpha, -edge.level) * (1.0 - std::pow(alpha, -t)) /
                           log_alpha;
            }
        };
        auto interp = [&](double t) {
            return ua + (ub - ua) * rho_arc(t) / L;
        };
        switch (edge.kind) {
            case UEdgeKind::horizontal: {
                S_density = measure.edge_mass[e];  // constant density, unit t-interval
                for (int k = 0; k < kGL; ++k)
                    segment_sum +=
                        kGLw[k] * std::pow(std::abs(interp(kGLx[k])), p) * S_density;
                break;
            }
            case UEdgeKind::vertical: {
                const double unit = (1.0 - std::pow(alpha, -beta)) / (beta * log_alpha);
                S_density = measure.edge_mass[e] / unit;  // = S * alpha^{-beta*level}
                for (int k = 0; k < kGL; ++k)
                    segment_sum += kGLw[k] * std::pow(std::abs(interp(kGLx[k])), p) *
                                   S_density * std::pow(alpha, -beta * kGLx[k]);
                break;
            }
            case UEdgeKind::tail: {
                const double unit = 1.0 / (beta * log_alpha);
                S_density = measure.edge_mass[e] / unit;
                // composite GL over unit t-segments until the tail weight dies
                for (int seg = 0;; ++seg) {
                    const double damp = std::pow(alpha, -beta * seg);
                    if (damp < 1e-16) break;
                    for (int k = 0; k < kGL; ++k) {
                        const double t = seg + kGLx[k];
                        segment_sum += kGLw[k] * std::pow(std::abs(interp(t)), p) *
                                       S_density * std::pow(alpha, -beta * t);
                    }
                }
                break;
            }
        }
        acc += segment_sum;
    }
    return std::pow(acc, 1.0 / p);
}

double segment_integral(const UniformizedGraph& ugraph, const LiftedMeasure& measure,
                        const GraphFunction& u, int e, double s0, double s1) {
    const auto& edge = ugraph.edges[e];
    const double L = edge.rho_length;
    s0 = std::clamp(s0, 0.0, L);
    s1 = std::clamp(s1, 0.0, L);
    if (s1 <= s0) return 0.0;
    const double ua = u[edge.a], ub = u[edge.b];
    if (edge.kind == UEdgeKind::horizontal) {
        const double density = measure.edge_mass[e] / L;
        return density * (ua * (s1 - s0) +
                          (ub - ua) * (s1 * s1 - s0 * s0) / (2.0 * L));
    }
    const double alpha = ugraph.graph.params.alpha;
    const double beta = measure.beta;
    const double log_alpha = std::log(alpha);
    const double scale = std::pow(alpha, -edge.level);
    // invert s(t) = scale (1 - alpha^{-t}) / log_alpha
    auto t_of_s = [&](double s) {
        const double arg = 1.0 - s * log_alpha / scale;
        if (arg <= 0.0) return std::numeric_limits<double>::infinity();
        return -std::log(arg) / log_alpha;
    };
    const double t_end = edge.kind == UEdgeKind::vertical
                             ? 1.0
                             : std::numeric_limits<double>::infinity();
    const double t0 = std::min(t_of_s(s0), t_end);
    const double t1 = s1 >= L * (1.0 - 1e-15) ? t_end : std::min(t_of_s(s1), t_end);
    const double unit = edge.kind == UEdgeKind::vertical
                            ? (1.0 - std::pow(alpha, -beta)) / (beta * log_alpha)
                            : 1.0 / (beta * log_alpha);
    const double S_density = measure.edge_mass[e] / unit;  // S * alpha^{-beta*level}
    auto interp = [&](double t) {
        const double arc = scale * (1.0 - std::pow(alpha, -t)) / log_alpha;
        return ua + (ub - ua) * arc / L;
    };
    double acc = 0.0;
    // composite GL over unit t-segments (single partial segment for vertical)
    for (double lo = t0; lo < t1;) {
        const double hi = std::min(t1, std::floor(lo) + 1.0);
        if (std::pow(alpha, -beta * lo) < 1e-16) break;
        const double len = hi - lo;
        if (!(len > 0.0) || !std::isfinite(len)) break;
        for (int k = 0; k < kGL; ++k) {
            const double t = lo + len * kGLx[k];
            acc += kGLw[k] * len * interp(t) * S_density * std::pow(alpha, -beta * t);
        }
        lo = hi;
    }
    return acc;
}

PartitionOfUnity partition_of_unity(const PointCloudSpace& space, const FillingGraph& graph,
                                    int level) {
    if (level < graph.params.n_min || level > graph.params.n_max)
        throw std::invalid_argument("partition_of_unity: level out of range");
    PartitionOfUnity pou;
    pou.level = level;
    const double r = graph.params.scale(level);
    for (int v : graph.level_vertices(level)) {
        pou.center_vertex.push_back(v);
        pou.centers.push_back(graph.project(v));
    }
    const std::size_t nc = pou.centers.size();
    pou.psi.assign(nc, std::vector<double>(space.size(), 0.0));
    for (std::size_t z = 0; z < space.size(); ++z) {
        double total = 0.0;
        for (std::size_t c = 0; c < nc; ++c) {
            const double phi =
                std::clamp(2.0 - space.dist(pou.centers[c], z) / r, 0.0, 1.0);
            pou.psi[c][z] = phi;
            total += phi;
        }
        // maximality guarantees total >= 1
        for (std::size_t c = 0; c < nc; ++c) pou.psi[c][z] /= total;
    }
    return pou;
}

}  // namespace hyperfill
