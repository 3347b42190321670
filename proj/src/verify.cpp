#include "hyperfill/verify.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <set>

#include <json.hpp>

#include "hyperfill/traceext.hpp"

namespace hyperfill {

namespace {

std::vector<int> sampled_centers(std::size_t size, int max_centers) {
    const std::size_t stride = std::max<std::size_t>(1, size / max_centers);
    std::vector<int> centers;
    for (std::size_t z = 0; z < size; z += stride) centers.push_back(static_cast<int>(z));
    return centers;
}

}  // namespace

Pipeline build_pipeline(PointCloudSpace space, double alpha, double tau, double beta,
                        int n_max_bump) {
    Pipeline pipe;
    pipe.space = std::move(space);
    pipe.params = FillingParams::with_defaults(pipe.space, alpha, tau);
    pipe.params.n_max += n_max_bump;
    pipe.params.validate();
    pipe.nets = build_nets(pipe.space, pipe.params);
    pipe.graph = build_filling(pipe.space, pipe.nets, pipe.params);
    pipe.ugraph = uniformize(pipe.space, pipe.graph);
    pipe.measure = lift_measure(pipe.ugraph, pipe.space, beta);
    for (int n = pipe.params.n_min; n <= pipe.params.n_max; ++n)
        pipe.pous.push_back(partition_of_unity(pipe.space, pipe.graph, n));
    // ensure the exponent-fit grid spans at least a decade even when the
    // level range of a tiny space is shallow
    const int extra = static_cast<int>(std::ceil(std::log(10.0) / std::log(alpha)));
    std::vector<double> grid;
    for (int n = pipe.params.n_min; n <= std::max(pipe.params.n_max, pipe.params.n_min + extra);
         ++n)
        grid.push_back(pipe.params.scale(n));
    pipe.exponents = estimate_exponents(pipe.space, grid);
    return pipe;
}

namespace {

BoundaryFunction rough_function(const Pipeline& pipe, double theta, std::mt19937_64& rng) {
    const std::size_t npts = pipe.space.size();
    BoundaryFunction f(npts, 0.0);
    std::uniform_int_distribution<int> sign(0, 1);
    for (const auto& pou : pipe.pous) {
        const double amp =
            std::pow(pipe.params.alpha, -theta * (pou.level - pipe.params.n_min));
        std::vector<double> a(pou.centers.size());
        for (auto& v : a) v = sign(rng) ? 1.0 : -1.0;
        BoundaryFunction comp(npts, 0.0);
        for (std::size_t z = 0; z < npts; ++z)
            for (std::size_t c = 0; c < pou.centers.size(); ++c)
                comp[z] += a[c] * pou.psi[c][z];
        // remove the mean and normalize in L^2(nu) so every level carries
        // exactly alpha^{-theta k} worth of oscillation; without this the
        // heavily overlapping coarse-level tents nearly cancel and the
        // function under-saturates the Besov decay rate
        double mean = 0.0;
        for (std::size_t z = 0; z < npts; ++z) mean += comp[z] * pipe.space.weight(z);
        mean /= pipe.space.total_mass();
        for (auto& v : comp) v -= mean;
        const double norm = lp_norm_boundary(pipe.space, comp, 2.0);
        if (norm < 1e-12) continue;
        for (std::size_t z = 0; z < npts; ++z) f[z] += amp * comp[z] / norm;
    }
    return f;
}

}  // namespace

Corpus make_corpus(const Pipeline& pipe, double theta, std::uint64_t seed) {
    const std::size_t npts = pipe.space.size();
    const double diam = pipe.space.diameter();
    Corpus corpus;
    auto push = [&](std::string name, BoundaryFunction f) {
        corpus.names.push_back(std::move(name));
        corpus.functions.push_back(std::move(f));
    };

    push("constant", BoundaryFunction(npts, 1.0));

    BoundaryFunction coord(npts);
    for (std::size_t z = 0; z < npts; ++z) coord[z] = pipe.space.dist(z, 0);
    push("coordinate", std::move(coord));

    auto bump = [&](std::size_t center, double radius) {
        BoundaryFunction f(npts);
        for (std::size_t z = 0; z < npts; ++z)
            f[z] = std::max(0.0, 1.0 - pipe.space.dist(z, center) / radius);
        return f;
    };
    push("bump_wide", bump(npts / 2, 0.5 * diam));
    push("bump_narrow", bump(npts / 4, 0.15 * diam));

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (const char* name : {"random_a", "random_b"}) {
        BoundaryFunction f(npts);
        for (auto& v : f) v = unif(rng);
        push(name, std::move(f));
    }

    // piecewise constant on the mid-level net (nearest center, lowest id)
    {
        const int mid = (pipe.params.n_min + pipe.params.n_max) / 2;
        const auto& centers = pipe.nets.level(mid);
        std::vector<double> vals(centers.size());
        for (auto& v : vals) v = unif(rng);
        BoundaryFunction f(npts);
        for (std::size_t z = 0; z < npts; ++z) {
            std::size_t best = 0;
            for (std::size_t c = 1; c < centers.size(); ++c)
                if (pipe.space.dist(z, centers[c]) < pipe.space.dist(z, centers[best]))
                    best = c;
            f[z] = vals[best];
        }
        push("net_piecewise", std::move(f));
    }

    for (const char* name : {"rough_a", "rough_b", "rough_c"})
        push(name, rough_function(pipe, theta, rng));
    return corpus;
}

Corpus make_rough_corpus(const Pipeline& pipe, double theta, std::uint64_t seed,
                         int count) {
    Corpus corpus;
    std::mt19937_64 rng(seed);
    for (int k = 0; k < count; ++k) {
        corpus.names.push_back("rough_" + std::to_string(k));
        corpus.functions.push_back(rough_function(pipe, theta, rng));
    }
    return corpus;
}

std::vector<BoundaryBall> sample_boundary_balls(const Pipeline& pipe, int max_centers,
                                                int n_radii) {
    const double diam = pipe.space.diameter();
    std::vector<BoundaryBall> balls;
    for (int z : sampled_centers(pipe.space.size(), max_centers))
        for (int j = 1; j <= n_radii; ++j)
            balls.push_back({z, diam * std::pow(pipe.params.alpha, -j)});
    return balls;
}

double hull_constant(const Pipeline& pipe, const std::vector<BoundaryBall>& balls) {
    double c = 1.0;
    for (const auto& b : balls) {
        const Hull h = hull(pipe.space, pipe.graph, b.z, b.r);
        if (h.empty()) continue;
        const auto dist = pipe.ugraph.dijkstra(pipe.ugraph.boundary_node(b.z));
        for (int v : h.vertices) c = std::max(c, dist[v] / b.r);
        double nearest_outside = std::numeric_limits<double>::infinity();
        for (std::size_t v = 0; v < pipe.ugraph.n_interior; ++v)
            if (!h.vertex_mask[v]) nearest_outside = std::min(nearest_outside, dist[v]);
        if (nearest_outside < b.r) c = std::max(c, b.r / nearest_outside);
    }
    return c;
}

ReportTable check_hull_scaling(const Pipeline& pipe) {
    ReportTable t;
    t.name = "hull_scaling";
    const double beta = pipe.measure.beta;
    const double diam = pipe.space.diameter();
    // start below the dilation saturation scale: for r with tau * r
    // comparable to the diameter the vertex balls nu(B(v)) cap out at the
    // total mass and the power law flattens
    const int j0 = std::max(
        1, static_cast<int>(std::ceil(std::log(2.0 * pipe.params.tau) / std::log(2.0))));
    // ... and above the resolution scale: sub-resolution balls are singleton
    // atoms and break the power law from the other side
    const double res = pipe.space.min_positive_distance();
    int j1 = static_cast<int>(std::floor(std::log(diam / res) / std::log(2.0)));
    j1 = std::max(j1, j0 + 1);
    std::vector<double> log_r, log_lhs, log_rhs;
    for (int j = j0; j <= std::min(j1, j0 + 4); ++j) {
        const double r = diam * std::pow(2.0, -j);
        for (std::size_t z = 0; z < pipe.space.size(); ++z) {
            const Hull h = hull(pipe.space, pipe.graph, static_cast<int>(z), r);
            if (h.empty()) {
                t.note += "empty hull skipped; ";
                continue;
            }
            const double lhs = hull_mass(pipe.measure, pipe.ugraph, h);
            const double nu_b = pipe.space.ball_measure(z, r);
            const double rhs = std::pow(r, beta) * nu_b;
            t.add("hull", static_cast<double>(z), r, lhs, rhs, lhs / rhs);
            log_r.push_back(std::log(r));
            log_lhs.push_back(std::log(lhs));
            log_rhs.push_back(std::log(rhs));
        }
    }
    const auto fit_lhs = fit_slope(log_r, log_lhs);
    const auto fit_rhs = fit_slope(log_r, log_rhs);
    t.slope = fit_lhs;
    // Slope tolerance 25%: on small spaces the usable radius window (between
    // the resolution scale and diam / (2 tau)) is a single decade, where grid
    // discreteness biases the nu(B) slope up and dilated-ball saturation
    // biases the hull-mass slope down.  The two-sided ratio bound is the
    // primary assertion; the slope match is a shape check.
    t.passed = t.max_value() / t.min_value() <= 20.0;
    if (j1 - j0 + 1 >= 3) {
        t.passed = t.passed &&
                   std::abs(fit_lhs.slope - fit_rhs.slope) <=
                       0.25 * std::abs(fit_rhs.slope) &&
                   fit_lhs.r2 >= 0.9;
    } else {
        t.note += "slope fit skipped: fewer than 3 usable radii; ";
    }
    return t;
}

ReportTable check_doubling(const Pipeline& pipe) {
    std::vector<BallSample> samples;
    const double r0 = pipe.params.scale(pipe.params.n_min);
    for (int z : sampled_centers(pipe.space.size(), 8))
        for (int j = 0; j <= 7; ++j)
            samples.push_back({pipe.ugraph.boundary_node(z), r0 * std::pow(2.0, -j)});
    ReportTable t = doubling_sweep(pipe.measure, pipe.ugraph, samples);
    t.passed = std::isfinite(t.max_value());
    return t;
}

ReportTable check_lower_decay(const Pipeline& pipe) {
    std::vector<int> centers;
    for (int z : sampled_centers(pipe.space.size(), 16))
        centers.push_back(pipe.ugraph.boundary_node(z));
    // radii down to the saturation scale only: below it the ball mass enters
    // the steeper single-tail regime and would bias the fitted order upward
    const int sat = FillingParams::saturation_level(pipe.space, pipe.params.alpha);
    std::vector<double> radii;
    for (int n = pipe.params.n_min; n <= std::max(sat, pipe.params.n_min + 1); ++n)
        radii.push_back(pipe.params.scale(n));
    const DecayFit fit = lower_decay_fit(pipe.measure, pipe.ugraph, centers, radii);
    ReportTable t;
    t.name = "lower_decay";
    t.add_value("Q_fit", pipe.measure.beta, 0.0, fit.Q);
    return t;
}

ReportTable check_trace_decay(const Pipeline& pipe, const Corpus& corpus, double p) {
    ReportTable t;
    t.name = "trace_decay";
    const double target =
        (pipe.measure.beta / p - 1.0) * std::log(pipe.params.alpha);
    const int n_min = pipe.params.n_min, n_max = pipe.params.n_max;
    // Levels whose tent radius tau * alpha^{-n} still exceeds half the diameter
    // produce near-constant partitions; the difference norms plateau there and
    // would corrupt the slope fit, so the fit starts at the first sub-diameter
    // level (all levels are still tabulated).
    const int fit_start =
        n_min + (int)std::ceil(std::log(2.0 * pipe.params.tau) /
                               std::log(pipe.params.alpha));
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto ext = poisson_extension(pipe.space, pipe.ugraph, corpus.functions[i]);
        const auto tr = trace(pipe.space, pipe.ugraph, pipe.pous, ext.values, n_min, n_max, p);
        const auto& top = tr.final_trace();
        std::vector<double> xs, ys;
        for (int n = n_min; n < n_max; ++n) {
            BoundaryFunction diff = tr.at(n);
            for (std::size_t z = 0; z < diff.size(); ++z) diff[z] -= top[z];
            const double d = lp_norm_boundary(pipe.space, diff, p);
            t.add(corpus.names[i], n, 0.0, d, 0.0, d);
            if (d > 0.0 && n >= fit_start) {
                xs.push_back(n);
                ys.push_back(std::log(d));
            }
        }
        if (xs.size() < 3) continue;  // degenerate series (e.g. constants)
        const auto fit = fit_slope(xs, ys);
        t.add(corpus.names[i] + "_fit", fit.slope, fit.r2, fit.slope, target,
              fit.slope / target);
        // The decay statement is an upper bound: individual functions may decay
        // faster than the prescribed rate (the finite top level truncates the
        // roughness series, steepening the tail), but never much slower.
        if (!(fit.slope <= 0.75 * target) || fit.r2 < 0.9) t.passed = false;
    }
    return t;
}

ReportTable check_trace_extension_identity(const Pipeline& pipe, const Corpus& corpus,
                                           double p) {
    ReportTable t;
    t.name = "trace_extension_identity";
    const int n_max = pipe.params.n_max;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& f = corpus.functions[i];
        const auto ext = poisson_extension(pipe.space, pipe.ugraph, f);
        const auto tr = trace(pipe.space, pipe.ugraph, pipe.pous, ext.values, n_max, n_max, p);
        BoundaryFunction diff = tr.final_trace();
        for (std::size_t z = 0; z < diff.size(); ++z) diff[z] -= f[z];
        const double err = lp_norm_boundary(pipe.space, diff, p);
        const double norm = lp_norm_boundary(pipe.space, f, p);
        if (norm == 0.0) continue;
        t.add(corpus.names[i], 0.0, 0.0, err, norm, err / norm);
        if (err / norm > 0.05) t.passed = false;
    }
    return t;
}

ReportTable check_norm_domination(const Pipeline& pipe, const Corpus& corpus, double p,
                                  double theta) {
    ReportTable t;
    t.name = "norm_domination";
    const int n_max = pipe.params.n_max;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& f = corpus.functions[i];
        const auto ext = poisson_extension(pipe.space, pipe.ugraph, f);
        const double dir = dirichlet_norm(pipe.ugraph, pipe.measure, ext.values, p);
        const auto tr = trace(pipe.space, pipe.ugraph, pipe.pous, ext.values, n_max, n_max, p);
        const double tr_besov = besov_norm(pipe.space, tr.final_trace(), p, theta);
        const double f_besov = besov_norm(pipe.space, f, p, theta);
        if (dir > 0.0)
            t.add("trace:" + corpus.names[i], 0.0, 0.0, tr_besov, dir, tr_besov / dir);
        if (f_besov > 0.0)
            t.add("extension:" + corpus.names[i], 0.0, 0.0, dir, f_besov, dir / f_besov);
    }
    t.passed = std::isfinite(t.max_value());
    return t;
}

ReportTable check_besov_equivalence(const Pipeline& pipe, const Corpus& corpus, double p,
                                    double theta) {
    ReportTable t;
    t.name = "besov_equivalence";
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const double dbl = besov_norm(pipe.space, corpus.functions[i], p, theta);
        if (dbl == 0.0) continue;
        const double dy = besov_norm_dyadic(pipe.space, corpus.functions[i], p, theta,
                                            pipe.params.alpha);
        t.add(corpus.names[i], 0.0, 0.0, dy, dbl, dy / dbl);
    }
    t.passed = t.max_value() / t.min_value() <= 10.0;
    return t;
}

ReportTable check_hajlasz(const Pipeline& pipe, const Corpus& corpus, double theta) {
    ReportTable t;
    t.name = "hajlasz";
    const int k_from = pipe.params.n_min, k_to = pipe.params.n_max - 1;
    const std::size_t npts = pipe.space.size();
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& f = corpus.functions[i];
        const auto ext = poisson_extension(pipe.space, pipe.ugraph, f);
        const auto g = edge_gradients(pipe.ugraph, ext.values);
        const auto gk = hajlasz_gradients(pipe.space, pipe.ugraph, g, theta, k_from, k_to);
        for (int k = k_from; k <= k_to; ++k) {
            const double hi = pipe.params.scale(k), lo = pipe.params.scale(k + 1);
            double worst = 0.0;
            for (std::size_t x = 0; x < npts; ++x)
                for (std::size_t y = x + 1; y < npts; ++y) {
                    const double d = pipe.space.dist(x, y);
                    if (!(d >= lo && d < hi)) continue;
                    const double lhs = std::abs(f[x] - f[y]);
                    if (lhs == 0.0) continue;
                    const double rhs =
                        std::pow(d, theta) * (gk[k - k_from][x] + gk[k - k_from][y]);
                    const double ratio =
                        rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity();
                    worst = std::max(worst, ratio);
                }
            t.add(corpus.names[i], k, 0.0, worst, 1.0, worst);
            if (!(worst <= 1.0 + 1e-9)) t.passed = false;
        }
    }
    return t;
}

namespace {

// hull pieces as (uedge id, mass) for gradient energy integrals
std::vector<std::pair<int, double>> hull_pieces(const Pipeline& pipe, const Hull& h) {
    std::vector<std::pair<int, double>> pieces;
    for (int e : h.full_edges) pieces.emplace_back(e, pipe.measure.edge_mass[e]);
    for (auto [e, v] : h.half_edges)
        pieces.emplace_back(e, half_edge_mass(pipe.measure, pipe.ugraph, e, v));
    return pieces;
}

double weighted_mean_ball(const Pipeline& pipe, const BoundaryFunction& u,
                          const std::vector<int>& pts) {
    double num = 0.0, den = 0.0;
    for (int y : pts) {
        num += u[y] * pipe.space.weight(y);
        den += pipe.space.weight(y);
    }
    return num / den;
}

double lp_mean_ball(const Pipeline& pipe, const BoundaryFunction& u, double center,
                    const std::vector<int>& pts, double p) {
    double num = 0.0, den = 0.0;
    for (int y : pts) {
        num += std::pow(std::abs(u[y] - center), p) * pipe.space.weight(y);
        den += pipe.space.weight(y);
    }
    return num / den;
}

// mu_beta-mean of a graph function over the rho-ball segments
double rho_ball_mean(const Pipeline& pipe, const GraphFunction& u,
                     const std::vector<EdgeSegment>& segs) {
    double num = 0.0, den = 0.0;
    for (const auto& seg : segs) {
        num += segment_integral(pipe.ugraph, pipe.measure, u, seg.edge, seg.s0, seg.s1);
        den += pipe.measure.edge_mass_segment(pipe.ugraph, seg.edge, seg.s0, seg.s1);
    }
    return num / den;
}

// average of g^p against mu_beta over the rho-ball segments
double rho_ball_energy_mean(const Pipeline& pipe, const std::vector<double>& g, double p,
                            const std::vector<EdgeSegment>& segs) {
    double num = 0.0, den = 0.0;
    for (const auto& seg : segs) {
        const double m = pipe.measure.edge_mass_segment(pipe.ugraph, seg.edge, seg.s0, seg.s1);
        num += std::pow(g[seg.edge], p) * m;
        den += m;
    }
    return num / den;
}

}  // namespace

ReportTable check_poincare_trace(const Pipeline& pipe, const Corpus& corpus,
                                 const std::vector<BoundaryBall>& balls, double p) {
    ReportTable t;
    t.name = "poincare_trace";
    const int n_max = pipe.params.n_max;
    // precompute trace and gradient energies per corpus function
    std::vector<BoundaryFunction> traces;
    std::vector<std::vector<double>> grads;
    for (const auto& f : corpus.functions) {
        const auto ext = poisson_extension(pipe.space, pipe.ugraph, f);
        traces.push_back(
            trace(pipe.space, pipe.ugraph, pipe.pous, ext.values, n_max, n_max, p)
                .final_trace());
        grads.push_back(edge_gradients(pipe.ugraph, ext.values));
    }
    for (const auto& b : balls) {
        const Hull h = hull(pipe.space, pipe.graph, b.z, b.r);
        if (h.empty()) {
            t.note += "empty hull skipped; ";
            continue;
        }
        const auto pieces = hull_pieces(pipe, h);
        double hmass = 0.0;
        for (const auto& [e, m] : pieces) hmass += m;
        const auto pts = pipe.space.ball(b.z, b.r);
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const double mean = weighted_mean_ball(pipe, traces[i], pts);
            const double lhs = lp_mean_ball(pipe, traces[i], mean, pts, p);
            double energy = 0.0;
            for (const auto& [e, m] : pieces) energy += std::pow(grads[i][e], p) * m;
            const double rhs = std::pow(b.r, p) * energy / hmass;
            const double ratio = lhs == 0.0 ? 0.0 : lhs / rhs;
            t.add(corpus.names[i], b.z, b.r, lhs, rhs, ratio);
            if (!std::isfinite(ratio)) t.passed = false;
        }
    }
    return t;
}

ReportTable check_extension_poincare(const Pipeline& pipe, const Corpus& corpus,
                                     const std::vector<BoundaryBall>& balls, double p,
                                     double hull_c) {
    ReportTable t;
    t.name = "extension_poincare";
    std::vector<GraphFunction> exts;
    std::vector<std::vector<double>> grads;
    for (const auto& f : corpus.functions) {
        exts.push_back(poisson_extension(pipe.space, pipe.ugraph, f).values);
        grads.push_back(edge_gradients(pipe.ugraph, exts.back()));
    }
    for (const auto& b : balls) {
        const auto dist = pipe.ugraph.dijkstra(pipe.ugraph.boundary_node(b.z));
        const auto segs_r = ball_segments(pipe.ugraph, dist, b.r);
        const auto segs_cr = ball_segments(pipe.ugraph, dist, hull_c * b.r);
        const auto pts = pipe.space.ball(b.z, b.r);
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const double mean = rho_ball_mean(pipe, exts[i], segs_r);
            const double lhs = lp_mean_ball(pipe, corpus.functions[i], mean, pts, p);
            const double rhs =
                std::pow(b.r, p) * rho_ball_energy_mean(pipe, grads[i], p, segs_cr);
            // round-off floor: a constant f gives lhs ~ eps^p and rhs = 0
            const double floor =
                1e-20 * std::pow(std::max(1.0, std::abs(mean)), p);
            const double ratio = lhs <= floor ? 0.0 : lhs / rhs;
            t.add(corpus.names[i], b.z, b.r, lhs, rhs, ratio);
            if (!std::isfinite(ratio)) t.passed = false;
        }
    }
    return t;
}

ReportTable check_holder(const Pipeline& pipe, const Corpus& corpus,
                         const std::vector<BoundaryBall>& balls, double p, double theta) {
    const double beta = pipe.measure.beta;
    const double q_beta = std::max(1.0, pipe.exponents.Q + beta);
    if (!(p > q_beta))
        throw HypothesisError("holder check requires p > Q_beta = max{1, Q+beta}: p=" +
                              std::to_string(p) + ", Q_beta=" + std::to_string(q_beta));
    (void)theta;
    ReportTable t;
    t.name = "holder";
    const double exp_r = q_beta / p;
    for (const auto& b : balls) {
        const auto dist = pipe.ugraph.dijkstra(pipe.ugraph.boundary_node(b.z));
        const auto segs = ball_segments(pipe.ugraph, dist, 4.0 * b.r);
        const auto pts = pipe.space.ball(b.z, b.r);
        if (pts.size() < 2) continue;
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const auto ext = poisson_extension(pipe.space, pipe.ugraph, corpus.functions[i]);
            const auto g = edge_gradients(pipe.ugraph, ext.values);
            const double energy =
                std::pow(rho_ball_energy_mean(pipe, g, p, segs), 1.0 / p);
            double worst = 0.0;
            bool bad = false;
            for (std::size_t a = 0; a < pts.size(); ++a)
                for (std::size_t c = a + 1; c < pts.size(); ++c) {
                    const int x = pts[a], y = pts[c];
                    const double d = pipe.space.dist(x, y);
                    if (d == 0.0) continue;
                    const double lhs =
                        std::abs(corpus.functions[i][x] - corpus.functions[i][y]);
                    if (lhs == 0.0) continue;
                    const double rhs = std::pow(b.r, exp_r) *
                                       std::pow(d, 1.0 - exp_r) * energy;
                    if (rhs == 0.0) {
                        bad = true;
                        continue;
                    }
                    worst = std::max(worst, lhs / rhs);
                }
            t.add(corpus.names[i], b.z, b.r, worst, 1.0, worst);
            if (bad) t.passed = false;
        }
    }
    if (!std::isfinite(t.max_value())) t.passed = false;
    return t;
}

ReportTable check_sobolev_qstar(const Pipeline& pipe, const Corpus& corpus,
                                const std::vector<BoundaryBall>& balls, double p,
                                double theta) {
    const double q = pipe.exponents.Q;
    if (!(p * theta < q))
        throw HypothesisError("sobolev check requires p*theta < Q: p*theta=" +
                              std::to_string(p * theta) + ", Q=" + std::to_string(q));
    if (!(pipe.exponents.eta > 0.0))
        throw HypothesisError("sobolev check requires a positive reverse-doubling exponent");
    const double q_star = q * p / (q - p * theta);
    ReportTable t;
    t.name = "sobolev_qstar";
    for (const auto& b : balls) {
        const auto dist = pipe.ugraph.dijkstra(pipe.ugraph.boundary_node(b.z));
        const auto segs_r = ball_segments(pipe.ugraph, dist, b.r);
        const auto segs_2r = ball_segments(pipe.ugraph, dist, 2.0 * b.r);
        const auto pts = pipe.space.ball(b.z, b.r);
        for (std::size_t i = 0; i < corpus.size(); ++i) {
            const auto ext = poisson_extension(pipe.space, pipe.ugraph, corpus.functions[i]);
            const auto g = edge_gradients(pipe.ugraph, ext.values);
            const double mean = rho_ball_mean(pipe, ext.values, segs_r);
            const double lhs = std::pow(
                lp_mean_ball(pipe, corpus.functions[i], mean, pts, q_star), 1.0 / q_star);
            const double rhs =
                2.0 * b.r *
                std::pow(rho_ball_energy_mean(pipe, g, p, segs_2r), 1.0 / p);
            const double ratio = lhs == 0.0 ? 0.0 : lhs / rhs;
            t.add(corpus.names[i], b.z, b.r, lhs, rhs, ratio);
            if (!std::isfinite(ratio)) t.passed = false;
        }
    }
    return t;
}

double compute_theta_q(const Pipeline& pipe, double p, double theta, double q,
                       const BoundaryBall& ball) {
    if (!(q > p)) throw std::invalid_argument("compute_theta_q: requires q > p");
    const double beta = p * (1.0 - theta);
    const double alpha = pipe.params.alpha;
    const double dmin = pipe.space.min_positive_distance();
    const auto pts = pipe.space.ball(ball.z, ball.r);
    double sup = 0.0;
    for (int j = 0;; ++j) {
        const double s = std::pow(alpha, -j);
        if (s > ball.r) continue;
        if (s < dmin / alpha) break;
        for (int z : pts) {
            const double nu = pipe.space.ball_measure(z, s);
            if (nu <= 0.0) continue;
            sup = std::max(sup, std::pow(s, 1.0 - beta / p) *
                                    std::pow(nu, 1.0 / q - 1.0 / p));
        }
    }
    return sup;
}

BundleResult run_all(const PointCloudSpace& space, const VerifyConfig& config) {
    BundleResult result;
    const double beta = config.p * (1.0 - config.theta);
    Pipeline pipe;
    try {
        pipe = build_pipeline(space, config.alpha, config.tau, beta, config.n_max_bump);
    } catch (const std::exception& e) {
        throw std::runtime_error(std::string("run_all: pipeline build failed: ") + e.what());
    }
    const Corpus corpus = make_corpus(pipe, config.theta, config.seed);
    const Corpus rough = make_rough_corpus(pipe, config.theta, config.seed + 1, 10);
    const auto balls = sample_boundary_balls(pipe, 16, 5);
    const double hull_c = hull_constant(pipe, balls);

    const std::set<std::string> wanted(config.checks.begin(), config.checks.end());
    auto requested = [&](const std::string& name) {
        return wanted.empty() || wanted.count(name) > 0;
    };
    auto run = [&](const std::string& name, auto&& fn) {
        if (!requested(name)) return;
        CheckOutcome outcome;
        try {
            outcome.table = fn();
        } catch (const HypothesisError& e) {
            outcome.table.name = name;
            outcome.skipped = true;
            outcome.skip_reason = e.what();
        }
        if (!outcome.skipped && !outcome.table.passed) result.all_passed = false;
        result.outcomes.push_back(std::move(outcome));
    };

    run("hull_scaling", [&] { return check_hull_scaling(pipe); });
    run("doubling", [&] { return check_doubling(pipe); });
    run("lower_decay", [&] { return check_lower_decay(pipe); });
    run("trace_decay", [&] { return check_trace_decay(pipe, rough, config.p); });
    run("trace_extension",
        [&] { return check_trace_extension_identity(pipe, corpus, config.p); });
    run("norm_domination",
        [&] { return check_norm_domination(pipe, corpus, config.p, config.theta); });
    run("besov_equivalence",
        [&] { return check_besov_equivalence(pipe, corpus, config.p, config.theta); });
    run("hajlasz", [&] { return check_hajlasz(pipe, corpus, config.theta); });
    run("poincare_trace",
        [&] { return check_poincare_trace(pipe, corpus, balls, config.p); });
    run("extension_poincare",
        [&] { return check_extension_poincare(pipe, corpus, balls, config.p, hull_c); });
    run("holder",
        [&] { return check_holder(pipe, corpus, balls, config.p, config.theta); });
    run("sobolev_qstar",
        [&] { return check_sobolev_qstar(pipe, corpus, balls, config.p, config.theta); });

    if (!config.out_dir.empty()) {
        namespace fs = std::filesystem;
        fs::create_directories(config.out_dir);
        nlohmann::json summary = nlohmann::json::array();
        for (const auto& o : result.outcomes) {
            nlohmann::json entry;
            entry["name"] = o.table.name;
            if (o.skipped) {
                entry["status"] = "skipped: hypothesis";
                entry["reason"] = o.skip_reason;
            } else {
                entry["status"] = o.table.passed ? "passed" : "failed";
                entry["count"] = o.table.count();
                if (o.table.count() > 0) {
                    entry["min"] = o.table.min_value();
                    entry["max"] = o.table.max_value();
                    entry["geomean"] = o.table.geomean_value();
                }
                if (o.table.slope) {
                    entry["slope"] = o.table.slope->slope;
                    entry["r2"] = o.table.slope->r2;
                }
                if (!o.table.note.empty()) entry["note"] = o.table.note;
                std::ofstream csv(fs::path(config.out_dir) / (o.table.name + ".csv"));
                csv << o.table.to_csv_full();
            }
            summary.push_back(entry);
        }
        nlohmann::json root;
        root["all_passed"] = result.all_passed;
        root["hull_constant"] = hull_c;
        root["checks"] = summary;
        std::ofstream out(fs::path(config.out_dir) / "summary.json");
        out << root.dump(2) << "\n";
    }
    return result;
}

}  // namespace hyperfill
