#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hyperfill/funcspace.hpp"
#include "oracles.hpp"

using namespace hyperfill;

namespace {

struct Built {
    PointCloudSpace space;
    UniformizedGraph ugraph;
    LiftedMeasure measure;
};

Built build(PointCloudSpace space, double beta = 1.0) {
    const auto params = FillingParams::with_defaults(space, 2.0, 4.0);
    auto ugraph = uniformize(space, build_filling(space, build_nets(space, params), params));
    auto measure = lift_measure(ugraph, space, beta);
    return {std::move(space), std::move(ugraph), std::move(measure)};
}

PointCloudSpace two_points() {
    return PointCloudSpace({"a", "b"}, {}, {1.0, 1.0}, {0.0, 1.0, 1.0, 0.0});
}

// quadrature oracle for the graph L^p norm and signed segment integrals
double edge_integral_oracle(const Built& b, std::size_t e, const GraphFunction& u, double p,
                            bool signed_value, double s0, double s1) {
    const auto& edge = b.ugraph.edges[e];
    const double alpha = b.ugraph.graph.params.alpha;
    const double beta = b.measure.beta;
    const double L = edge.rho_length;
    double s = b.measure.mu_hat[edge.a];
    if (edge.kind == UEdgeKind::tail)
        s += b.space.weight(b.ugraph.boundary_point(edge.b));
    else
        s += b.measure.mu_hat[edge.b];
    const auto arc = [&](double t) {
        if (edge.kind == UEdgeKind::horizontal) return t * L;
        return std::pow(alpha, -edge.level) * (1.0 - std::pow(alpha, -t)) / std::log(alpha);
    };
    const auto integrand = [&](double t) {
        if (arc(t) < s0 || arc(t) > s1) return 0.0;
        const double h = edge.kind == UEdgeKind::horizontal
                             ? static_cast<double>(edge.level)
                             : edge.level + t;
        const double val = u[edge.a] + (u[edge.b] - u[edge.a]) * arc(t) / L;
        const double density = std::pow(alpha, -beta * h) * s;
        return (signed_value ? val : std::pow(std::abs(val), p)) * density;
    };
    if (edge.kind == UEdgeKind::tail)
        return oracles::adaptive_simpson_tail(integrand, 0.0);
    return oracles::adaptive_simpson(integrand, 0.0, 1.0);
}

}  // namespace

TEST_CASE("besov params") {
    BesovParams params;
    params.p = 2.0;
    params.theta = 0.5;
    params.validate();
    CHECK(params.beta() == doctest::Approx(1.0));
    CHECK(params.q_beta(1.0) == doctest::Approx(2.0));
    CHECK(params.q_beta(0.2) == doctest::Approx(1.2));
    CHECK(params.q_star(2.0) == doctest::Approx(2.0 * 2.0 / (2.0 - 1.0)));
    params.theta = 1.5;
    CHECK_THROWS(params.validate());
    params.theta = 0.5;
    params.p = 0.5;
    CHECK_THROWS(params.validate());
}

TEST_CASE("besov double sum on the two point space") {
    const auto z = two_points();
    BoundaryFunction f{0.0, 1.0};
    CHECK(besov_norm(z, f, 2.0, 0.5) == doctest::Approx(std::sqrt(2.0)));
    CHECK(besov_norm(z, BoundaryFunction{3.0, 3.0}, 2.0, 0.5) == doctest::Approx(0.0));
    // homogeneity
    BoundaryFunction g{0.0, -2.5};
    CHECK(besov_norm(z, g, 2.0, 0.5) == doctest::Approx(2.5 * std::sqrt(2.0)));
    // seminorm triangle inequality on random pairs
    const auto grid = make_interval_grid(16);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int t = 0; t < 5; ++t) {
        BoundaryFunction a(grid.size()), c(grid.size()), sum(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            a[i] = unif(rng);
            c[i] = unif(rng);
            sum[i] = a[i] + c[i];
        }
        CHECK(besov_norm(grid, sum, 2.0, 0.5) <=
              besov_norm(grid, a, 2.0, 0.5) + besov_norm(grid, c, 2.0, 0.5) + 1e-9);
    }
}

TEST_CASE("dyadic besov form is comparable") {
    const auto grid = make_interval_grid(64);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    double lo = 1e300, hi = 0.0;
    for (int t = 0; t < 8; ++t) {
        BoundaryFunction f(grid.size());
        for (auto& v : f) v = unif(rng);
        const double dbl = besov_norm(grid, f, 2.0, 0.5);
        const double dy = besov_norm_dyadic(grid, f, 2.0, 0.5, 2.0);
        lo = std::min(lo, dy / dbl);
        hi = std::max(hi, dy / dbl);
    }
    CHECK(lo > 0.0);
    CHECK(hi / lo < 10.0);
    CHECK(besov_norm_dyadic(grid, BoundaryFunction(grid.size(), 4.0), 2.0, 0.5, 2.0) ==
          doctest::Approx(0.0));
    CHECK_THROWS(besov_norm_dyadic(grid, BoundaryFunction(grid.size(), 0.0), 2.0, 0.5, 0.9));
}

TEST_CASE("boundary lp norms") {
    PointCloudSpace z({"a", "b"}, {}, {0.5, 0.5}, {0.0, 1.0, 1.0, 0.0});
    CHECK(lp_norm_boundary(z, {0.0, 0.0}, 2.0) == doctest::Approx(0.0));
    CHECK(lp_norm_boundary(z, {1.0, 1.0}, 2.0) == doctest::Approx(1.0));
    CHECK(lp_norm_boundary(z, {0.0, 1.0}, 2.0) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("edge gradients and dirichlet norm") {
    const auto b = build(make_interval_grid(16));
    GraphFunction constant(b.ugraph.node_count(), 3.0);
    for (std::size_t e = 0; e < b.ugraph.edges.size(); ++e)
        CHECK(edge_gradient(b.ugraph, constant, static_cast<int>(e)) == doctest::Approx(0.0));
    CHECK(dirichlet_norm(b.ugraph, b.measure, constant, 2.0) == doctest::Approx(0.0));

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    GraphFunction u(b.ugraph.node_count());
    for (auto& v : u) v = unif(rng);
    double acc = 0.0;
    for (std::size_t e = 0; e < b.ugraph.edges.size(); ++e) {
        const auto& edge = b.ugraph.edges[e];
        const double g = std::abs(u[edge.a] - u[edge.b]) / edge.rho_length;
        CHECK(edge_gradient(b.ugraph, u, static_cast<int>(e)) == doctest::Approx(g));
        acc += g * g * b.measure.edge_mass[e];
    }
    CHECK(dirichlet_norm(b.ugraph, b.measure, u, 2.0) == doctest::Approx(std::sqrt(acc)));
    // homogeneity
    GraphFunction u2(u);
    for (auto& v : u2) v *= -1.5;
    CHECK(dirichlet_norm(b.ugraph, b.measure, u2, 2.0) ==
          doctest::Approx(1.5 * dirichlet_norm(b.ugraph, b.measure, u, 2.0)));
}

TEST_CASE("graph lp norm against the quadrature oracle") {
    const auto b = build(make_interval_grid(8));
    GraphFunction ones(b.ugraph.node_count(), 1.0);
    CHECK(lp_norm_graph(b.ugraph, b.measure, ones, 2.0) ==
          doctest::Approx(std::sqrt(b.measure.total_mass())));
    CHECK(lp_norm_graph(b.ugraph, b.measure, GraphFunction(b.ugraph.node_count(), 0.0),
                        2.0) == doctest::Approx(0.0));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (double p : {2.0, 3.0}) {
        // positive u: |u|^p is smooth along every edge and Gauss-Legendre
        // agrees with the adaptive oracle to near machine precision
        GraphFunction u(b.ugraph.node_count());
        for (auto& v : u) v = 2.0 + unif(rng);
        double acc = 0.0;
        for (std::size_t e = 0; e < b.ugraph.edges.size(); ++e)
            acc += edge_integral_oracle(b, e, u, p, false, 0.0,
                                        b.ugraph.edges[e].rho_length);
        CHECK(lp_norm_graph(b.ugraph, b.measure, u, p) ==
              doctest::Approx(std::pow(acc, 1.0 / p)).epsilon(1e-9));

        // sign-changing u: the |.|^p kink costs the fixed rule some accuracy
        GraphFunction w(b.ugraph.node_count());
        for (auto& v : w) v = unif(rng);
        acc = 0.0;
        for (std::size_t e = 0; e < b.ugraph.edges.size(); ++e)
            acc += edge_integral_oracle(b, e, w, p, false, 0.0,
                                        b.ugraph.edges[e].rho_length);
        CHECK(lp_norm_graph(b.ugraph, b.measure, w, p) ==
              doctest::Approx(std::pow(acc, 1.0 / p)).epsilon(1e-4));
    }
}

TEST_CASE("signed segment integrals against the oracle") {
    const auto b = build(make_interval_grid(8));
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    GraphFunction u(b.ugraph.node_count());
    for (auto& v : u) v = unif(rng);
    for (std::size_t e = 0; e < b.ugraph.edges.size(); ++e) {
        const double L = b.ugraph.edges[e].rho_length;
        for (auto [s0, s1] : std::vector<std::pair<double, double>>{
                 {0.0, L}, {0.0, 0.4 * L}, {0.3 * L, 0.9 * L}}) {
            const double got =
                segment_integral(b.ugraph, b.measure, u, static_cast<int>(e), s0, s1);
            const double want = edge_integral_oracle(b, e, u, 1.0, true, s0, s1);
            CHECK(got == doctest::Approx(want).epsilon(1e-8));
        }
        // additivity over a split
        const double whole =
            segment_integral(b.ugraph, b.measure, u, static_cast<int>(e), 0.0, L);
        const double split =
            segment_integral(b.ugraph, b.measure, u, static_cast<int>(e), 0.0, 0.37 * L) +
            segment_integral(b.ugraph, b.measure, u, static_cast<int>(e), 0.37 * L, L);
        CHECK(whole == doctest::Approx(split).epsilon(1e-10));
    }
}

TEST_CASE("partition of unity invariants") {
    const auto space = make_interval_grid(16);
    const auto params = FillingParams::with_defaults(space, 2.0, 4.0);
    const auto graph = build_filling(space, build_nets(space, params), params);
    for (int level : {params.n_min, 1, params.n_max}) {
        const auto pou = partition_of_unity(space, graph, level);
        const double r = params.scale(level);
        for (std::size_t z = 0; z < space.size(); ++z) {
            double total = 0.0;
            for (std::size_t c = 0; c < pou.centers.size(); ++c) {
                const double psi = pou.psi[c][z];
                CHECK(psi >= 0.0);
                CHECK(psi <= 1.0);
                if (space.dist(pou.centers[c], z) >= 2.0 * r)
                    CHECK(psi == doctest::Approx(0.0));  // support condition
                total += psi;
            }
            CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
        }
        // Lipschitz bound with a uniform constant relative to 1/r
        for (std::size_t c = 0; c < pou.centers.size(); ++c)
            for (std::size_t z = 0; z < space.size(); ++z)
                for (std::size_t y = z + 1; y < space.size(); ++y)
                    CHECK(std::abs(pou.psi[c][z] - pou.psi[c][y]) <=
                          8.0 / r * space.dist(z, y) + 1e-12);
    }
    CHECK_THROWS(partition_of_unity(space, graph, params.n_max + 1));
}
