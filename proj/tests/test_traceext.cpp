#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hyperfill/traceext.hpp"

using namespace hyperfill;

namespace {

struct Built {
    PointCloudSpace space;
    UniformizedGraph ugraph;
    LiftedMeasure measure;
    std::vector<PartitionOfUnity> pous;

    int n_min() const { return ugraph.graph.params.n_min; }
    int n_max() const { return ugraph.graph.params.n_max; }
};

Built build(PointCloudSpace space, double beta = 1.0) {
    const auto params = FillingParams::with_defaults(space, 2.0, 4.0);
    auto graph = build_filling(space, build_nets(space, params), params);
    auto ugraph = uniformize(space, graph);
    auto measure = lift_measure(ugraph, space, beta);
    std::vector<PartitionOfUnity> pous;
    for (int n = params.n_min; n <= params.n_max; ++n)
        pous.push_back(partition_of_unity(space, graph, n));
    return {std::move(space), std::move(ugraph), std::move(measure), std::move(pous)};
}

GraphFunction random_graph_function(const Built& b, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    GraphFunction u(b.ugraph.node_count());
    for (auto& v : u) v = unif(rng);
    return u;
}

}  // namespace

TEST_CASE("trace of constants and indicators") {
    const auto b = build(make_interval_grid(16));
    GraphFunction c(b.ugraph.node_count(), 2.5);
    const auto tr = trace(b.space, b.ugraph, b.pous, c, b.n_min(), b.n_max(), 2.0);
    for (int n = b.n_min(); n <= b.n_max(); ++n)
        for (double v : tr.at(n)) CHECK(v == doctest::Approx(2.5));
    for (double d : tr.decay) CHECK(d == doctest::Approx(0.0));

    // indicator of a single level-n vertex reproduces its psi row
    const int n = 2;
    const auto& pou = b.pous[n - b.n_min()];
    for (std::size_t c_idx = 0; c_idx < pou.center_vertex.size(); ++c_idx) {
        GraphFunction ind(b.ugraph.node_count(), 0.0);
        ind[pou.center_vertex[c_idx]] = 1.0;
        const auto ti = trace(b.space, b.ugraph, b.pous, ind, n, n, 2.0);
        for (std::size_t z = 0; z < b.space.size(); ++z)
            CHECK(ti.final_trace()[z] == doctest::Approx(pou.psi[c_idx][z]));
    }
}

TEST_CASE("trace linearity and range bounds") {
    const auto b = build(make_interval_grid(16));
    const auto u = random_graph_function(b, 21);
    const auto v = random_graph_function(b, 22);
    GraphFunction combo(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) combo[i] = 2.0 * u[i] - 3.0 * v[i];
    const int n = b.n_max() - 1;
    const auto tu = trace(b.space, b.ugraph, b.pous, u, n, n, 2.0).final_trace();
    const auto tv = trace(b.space, b.ugraph, b.pous, v, n, n, 2.0).final_trace();
    const auto tc = trace(b.space, b.ugraph, b.pous, combo, n, n, 2.0).final_trace();
    for (std::size_t z = 0; z < tc.size(); ++z)
        CHECK(tc[z] == doctest::Approx(2.0 * tu[z] - 3.0 * tv[z]).epsilon(1e-12));

    // convex-combination bounds per level
    double umin = 1e300, umax = -1e300;
    for (int vtx : b.ugraph.graph.level_vertices(n)) {
        umin = std::min(umin, u[vtx]);
        umax = std::max(umax, u[vtx]);
    }
    for (double val : tu) {
        CHECK(val >= umin - 1e-12);
        CHECK(val <= umax + 1e-12);
    }
}

TEST_CASE("poisson extension basics") {
    const auto b = build(make_interval_grid(16));
    const auto ext = poisson_extension(b.space, b.ugraph, BoundaryFunction(16, 7.0));
    for (double v : ext.values) CHECK(v == doctest::Approx(7.0));

    // boundary nodes carry f; vertex values are ball means within range
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    BoundaryFunction f(16);
    for (auto& v : f) v = unif(rng);
    const auto pf = poisson_extension(b.space, b.ugraph, f);
    const double fmin = *std::min_element(f.begin(), f.end());
    const double fmax = *std::max_element(f.begin(), f.end());
    for (std::size_t z = 0; z < 16; ++z)
        CHECK(pf.values[b.ugraph.boundary_node(static_cast<int>(z))] ==
              doctest::Approx(f[z]));
    for (std::size_t v = 0; v < b.ugraph.n_interior; ++v) {
        CHECK(pf.values[v] >= fmin - 1e-12);
        CHECK(pf.values[v] <= fmax + 1e-12);
        // direct ball-mean recomputation
        const int z = b.ugraph.graph.project(static_cast<int>(v));
        const double r = b.ugraph.graph.ball_radius(static_cast<int>(v));
        double num = 0.0, den = 0.0;
        for (int y : b.space.ball(z, r)) {
            num += f[y] * b.space.weight(y);
            den += b.space.weight(y);
        }
        CHECK(pf.values[v] == doctest::Approx(num / den));
    }
}

TEST_CASE("two point mean example") {
    PointCloudSpace z({"a", "b"}, {}, {0.5, 0.5}, {0.0, 1.0, 1.0, 0.0});
    const auto b = build(z);
    const auto pf = poisson_extension(b.space, b.ugraph, {0.0, 1.0});
    // the root vertex ball covers both points with equal weight
    const int root = b.ugraph.graph.level_vertices(b.n_min())[0];
    CHECK(pf.values[root] == doctest::Approx(0.5));
}

TEST_CASE("truncation cutoff") {
    const auto b = build(make_interval_grid(16));
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    BoundaryFunction g(16);
    for (auto& v : g) v = unif(rng);
    const auto ext = poisson_extension(b.space, b.ugraph, g);

    const auto below = truncate_extension(b.ugraph, ext, b.n_min() - 1);
    for (std::size_t i = 0; i < below.size(); ++i)
        CHECK(below[i] == doctest::Approx(ext.values[i]));

    const auto all_cut = truncate_extension(b.ugraph, ext, b.n_max());
    for (std::size_t v = 0; v < b.ugraph.n_interior; ++v)
        CHECK(all_cut[v] == doctest::Approx(0.0));
    for (std::size_t z = 0; z < 16; ++z)
        CHECK(all_cut[b.ugraph.boundary_node(static_cast<int>(z))] ==
              doctest::Approx(g[z]));

    const int n = 3;
    const auto part = truncate_extension(b.ugraph, ext, n);
    for (std::size_t v = 0; v < b.ugraph.n_interior; ++v) {
        if (b.ugraph.graph.height(static_cast<int>(v)) <= n)
            CHECK(part[v] == doctest::Approx(0.0));
        else
            CHECK(part[v] == doctest::Approx(ext.values[v]));
    }
}

TEST_CASE("hajlasz gradients on a single point chain") {
    PointCloudSpace one({"0"}, {}, {1.0}, {0.0});
    FillingParams params;
    params.alpha = 2.0;
    params.tau = 4.0;
    params.n_min = 0;
    params.n_max = 3;
    const auto graph = build_filling(one, build_nets(one, params), params);
    const auto ugraph = uniformize(one, graph);

    std::vector<double> g(ugraph.edges.size());
    for (std::size_t e = 0; e < g.size(); ++e) g[e] = 0.25 * (1.0 + e);
    const double theta = 0.5;
    const auto gk = hajlasz_gradients(one, ugraph, g, theta, 0, 2);
    for (int k = 0; k <= 2; ++k) {
        // chain: ray from level k through n_max then the tail; no horizontal star
        double expect = 0.0;
        for (std::size_t e = 0; e < ugraph.edges.size(); ++e) {
            const auto& edge = ugraph.edges[e];
            if (edge.kind == UEdgeKind::vertical && edge.level >= k)
                expect += g[e] * edge.rho_length;
            if (edge.kind == UEdgeKind::tail) expect += g[e] * edge.rho_length;
        }
        expect *= std::pow(2.0, theta * (k + 1));
        CHECK(gk[k][0] == doctest::Approx(expect).epsilon(1e-12));
    }

    const auto zero = hajlasz_gradients(one, ugraph,
                                        std::vector<double>(ugraph.edges.size(), 0.0),
                                        theta, 0, 2);
    for (const auto& layer : zero)
        for (double v : layer) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("hyperbolic upper gradient check") {
    const auto b = build(make_interval_grid(16));
    std::vector<std::pair<int, int>> pairs;
    for (int x = 0; x < 16; ++x)
        for (int y = x + 1; y < 16; y += 3) pairs.emplace_back(x, y);

    // constant f with zero gradient: no violations
    const auto none = check_hyperbolic_upper_gradient(
        b.space, b.ugraph, BoundaryFunction(16, 1.0),
        std::vector<double>(b.ugraph.edges.size(), 0.0), 4, pairs);
    CHECK(none.empty());

    // nonconstant f with zero gradient: violation reported
    BoundaryFunction step(16, 0.0);
    step[15] = 1.0;
    const auto bad = check_hyperbolic_upper_gradient(
        b.space, b.ugraph, step, std::vector<double>(b.ugraph.edges.size(), 0.0), 4, pairs);
    CHECK(!bad.empty());
    CHECK(bad.front().lhs > bad.front().rhs);

    // edge gradients of Pf are an upper gradient for the boundary values
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    BoundaryFunction f(16);
    for (auto& v : f) v = unif(rng);
    const auto ext = poisson_extension(b.space, b.ugraph, f);
    const auto g = edge_gradients(b.ugraph, ext.values);
    const auto ok = check_hyperbolic_upper_gradient(b.space, b.ugraph, f, g, 6, pairs);
    CHECK(ok.empty());
}

TEST_CASE("lipschitz extension has bounded gradients") {
    const auto b = build(make_interval_grid(64));
    BoundaryFunction f(64);
    for (std::size_t z = 0; z < 64; ++z) f[z] = b.space.dist(z, 0);  // Lipschitz, L = 1
    const auto ext = poisson_extension(b.space, b.ugraph, f);
    const auto g = edge_gradients(b.ugraph, ext.values);
    double worst = 0.0;
    for (double v : g) worst = std::max(worst, v);
    CHECK(worst < 50.0);  // C * Lip(f) with a moderate C
}
