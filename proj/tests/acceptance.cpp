// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Reference configuration: interval_grid(64), alpha=2, tau=4,
// p=2, theta=0.5 (beta=1), seed 42.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hyperfill/verify.hpp"
#include "oracles.hpp"

using namespace hyperfill;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void criterion(int num, const std::string& name, bool ok) {
    std::printf("criterion %2d (%s): %s\n", num, name.c_str(), ok ? "PASS" : "FAIL");
    if (!ok) ++g_failures;
}

bool nets_valid(const Pipeline& pipe) {
    for (int n = pipe.params.n_min; n <= pipe.params.n_max; ++n) {
        const auto& centers = pipe.nets.level(n);
        const double sep = pipe.params.scale(n);
        for (std::size_t i = 0; i < centers.size(); ++i)
            for (std::size_t j = i + 1; j < centers.size(); ++j)
                if (pipe.space.dist(centers[i], centers[j]) < sep) return false;
        for (std::size_t z = 0; z < pipe.space.size(); ++z) {
            bool covered = false;
            for (int c : centers)
                if (pipe.space.dist(z, c) < sep) covered = true;
            if (!covered) return false;
        }
    }
    return true;
}

bool edges_witnessed(const Pipeline& pipe) {
    for (const auto& e : pipe.graph.edges) {
        if (e.a == e.b) return false;
        if (std::abs(pipe.graph.height(e.a) - pipe.graph.height(e.b)) > 1) return false;
        if (!balls_intersect(pipe.space, pipe.graph, e.a, e.b)) return false;
    }
    return true;
}

bool graph_connected(const Pipeline& pipe) {
    const std::size_t n = pipe.ugraph.node_count();
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    std::size_t reached = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int e : pipe.ugraph.adjacency[v]) {
            const int w = pipe.ugraph.other_end(e, v);
            if (!seen[w]) {
                seen[w] = 1;
                ++reached;
                stack.push_back(w);
            }
        }
    }
    return reached == n;
}

bool d_rho_matches_oracle(const Pipeline& pipe) {
    const int n = static_cast<int>(pipe.ugraph.node_count());
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            const double got = pipe.ugraph.d_rho(x, y);
            const double want = oracles::brute_force_d_rho(pipe.ugraph, x, y);
            if (std::abs(got - want) > 1e-12 * (1.0 + want)) return false;
        }
    return true;
}

bool edge_forms_match_quadrature(const Pipeline& pipe) {
    const double alpha = pipe.params.alpha;
    const double beta = pipe.measure.beta;
    bool seen_h = false, seen_v = false, seen_t = false;
    for (std::size_t e = 0; e < pipe.ugraph.edges.size(); ++e) {
        const auto& edge = pipe.ugraph.edges[e];
        const int n = edge.level;
        double S = 0.0, mass_q = 0.0, len_q = 0.0;
        switch (edge.kind) {
            case UEdgeKind::horizontal:
                seen_h = true;
                S = pipe.measure.mu_hat[edge.a] + pipe.measure.mu_hat[edge.b];
                mass_q = S * oracles::adaptive_simpson(
                                 [&](double) { return std::pow(alpha, -beta * n); }, 0, 1);
                len_q = oracles::adaptive_simpson(
                    [&](double) { return std::pow(alpha, -n); }, 0, 1);
                break;
            case UEdgeKind::vertical:
                seen_v = true;
                S = pipe.measure.mu_hat[edge.a] + pipe.measure.mu_hat[edge.b];
                mass_q = S * oracles::adaptive_simpson(
                                 [&](double t) { return std::pow(alpha, -beta * (n + t)); },
                                 0, 1);
                len_q = oracles::adaptive_simpson(
                    [&](double t) { return std::pow(alpha, -(n + t)); }, 0, 1);
                break;
            case UEdgeKind::tail:
                seen_t = true;
                S = pipe.measure.mu_hat[edge.a] +
                    pipe.space.weight(pipe.ugraph.boundary_point(edge.b));
                mass_q = S * oracles::adaptive_simpson_tail(
                                 [&](double t) { return std::pow(alpha, -beta * (n + t)); },
                                 0.0);
                len_q = oracles::adaptive_simpson_tail(
                    [&](double t) { return std::pow(alpha, -(n + t)); }, 0.0);
                break;
        }
        if (std::abs(pipe.measure.edge_mass[e] - mass_q) > 1e-10 * mass_q) return false;
        if (std::abs(edge.rho_length - len_q) > 1e-10 * len_q) return false;
    }
    return seen_h && seen_v && seen_t;
}

double category_max(const ReportTable& t, const std::string& prefix) {
    double m = 0.0;
    for (const auto& row : t.rows)
        if (row.desc.rfind(prefix, 0) == 0) m = std::max(m, row.value);
    return m;
}

std::map<std::string, std::string> slurp_dir(const fs::path& dir) {
    std::map<std::string, std::string> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        std::ifstream in(entry.path(), std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        files[entry.path().filename().string()] = ss.str();
    }
    return files;
}

}  // namespace

int main() {
    const double p = 2.0, theta = 0.5, beta = p * (1.0 - theta);

    const auto P64 = build_pipeline(make_interval_grid(64), 2.0, 4.0, beta);
    const auto P64b = build_pipeline(make_interval_grid(64), 2.0, 4.0, beta, 1);
    const auto P128 = build_pipeline(make_interval_grid(128), 2.0, 4.0, beta);
    const auto Pc5 = build_pipeline(make_cantor(5), 2.0, 4.0, beta);
    const auto Pc5h = build_pipeline(make_cantor(5), 2.0, 4.0, 0.5);
    const auto P2 = build_pipeline(make_interval_grid(2), 2.0, 4.0, beta);

    const auto C64 = make_corpus(P64, theta, 42);
    const auto C64b = make_corpus(P64b, theta, 42);
    const auto C128 = make_corpus(P128, theta, 42);
    const auto Cc5 = make_corpus(Pc5, theta, 42);
    const auto rough64 = make_rough_corpus(P64, theta, 43, 10);

    const auto B64 = sample_boundary_balls(P64, 16, 5);
    const auto B64b = sample_boundary_balls(P64b, 16, 5);
    const auto Bc5 = sample_boundary_balls(Pc5, 16, 5);

    // 1. Structural exactness.
    criterion(1, "structural exactness",
              nets_valid(P64) && nets_valid(Pc5) && edges_witnessed(P64) &&
                  edges_witnessed(Pc5) && graph_connected(P64) && graph_connected(Pc5) &&
                  d_rho_matches_oracle(P2));

    // 2. Closed-form masses and rho-lengths vs adaptive quadrature, 1e-10.
    criterion(2, "closed form vs quadrature",
              edge_forms_match_quadrature(P64) && edge_forms_match_quadrature(Pc5h));

    // 3. Hull-measure scaling.
    criterion(3, "hull measure scaling", check_hull_scaling(P64).passed);

    // 4. Doubling of mu_beta, stable under n_max+1.
    {
        const auto d0 = check_doubling(P64);
        const auto d1 = check_doubling(P64b);
        criterion(4, "mu_beta doubling",
                  std::isfinite(d0.max_value()) &&
                      d1.max_value() <= 1.5 * d0.max_value() + 1e-12);
    }

    // 5. Lower volume-decay order Q' within 0.4 of max{1, Q + beta}.
    {
        const double q64 = check_lower_decay(P64).rows[0].value;
        const double t64 = std::max(1.0, P64.exponents.Q + beta);
        const double qc5 = check_lower_decay(Pc5h).rows[0].value;
        const double tc5 = std::max(1.0, Pc5h.exponents.Q + 0.5);
        criterion(5, "volume decay order",
                  std::abs(q64 - t64) <= 0.4 && std::abs(qc5 - tc5) <= 0.4);
    }

    // 6. Trace decay rate on the rough corpus.
    criterion(6, "trace decay rate", check_trace_decay(P64, rough64, p).passed);

    // 7. Trace of extension recovers f, improving under n_max+1.
    {
        const auto t0 = check_trace_extension_identity(P64, C64, p);
        const auto t1 = check_trace_extension_identity(P64b, C64b, p);
        criterion(7, "trace of extension identity",
                  t0.passed && t1.max_value() <= t0.max_value() + 1e-15);
    }

    // 8. Norm dominations, refinement-stable (grid 64->128 and n_max+1).
    {
        const auto nd0 = check_norm_domination(P64, C64, p, theta);
        const auto nd1 = check_norm_domination(P128, C128, p, theta);
        const auto nd2 = check_norm_domination(P64b, C64b, p, theta);
        bool ok = nd0.passed && nd1.passed && nd2.passed;
        for (const std::string prefix : {"trace:", "extension:"}) {
            const double base = category_max(nd0, prefix);
            ok = ok && base > 0.0 && category_max(nd1, prefix) <= 2.0 * base &&
                 category_max(nd2, prefix) <= 2.0 * base;
        }
        criterion(8, "norm dominations", ok);
    }

    // 9. Poincare-type inequalities on interval_grid(64) and cantor(5).
    {
        const double hc64 = hull_constant(P64, B64);
        const double hcc5 = hull_constant(Pc5, Bc5);
        criterion(9, "Poincare inequalities",
                  check_poincare_trace(P64, C64, B64, p).passed &&
                      check_extension_poincare(P64, C64, B64, p, hc64).passed &&
                      check_poincare_trace(Pc5, Cc5, Bc5, p).passed &&
                      check_extension_poincare(Pc5, Cc5, Bc5, p, hcc5).passed);
    }

    // 10. Besov double-sum vs dyadic equivalence, stable under refinement.
    {
        const auto b0 = check_besov_equivalence(P64, C64, p, theta);
        const auto b1 = check_besov_equivalence(P128, C128, p, theta);
        const double w0 = b0.max_value() / b0.min_value();
        const double w1 = b1.max_value() / b1.min_value();
        criterion(10, "Besov norm equivalence", b0.passed && b1.passed && w1 <= 2.0 * w0);
    }

    // 11. Holder embedding with p=4, theta=0.75 (beta=1); hypothesis-violating
    //     configurations must be refused.
    {
        bool ok = false;
        try {
            const auto h0 = check_holder(P64, C64, B64, 4.0, 0.75);
            const auto h1 = check_holder(P64b, C64b, B64b, 4.0, 0.75);
            ok = h0.passed && h1.passed &&
                 h1.max_value() <= 2.0 * h0.max_value() + 1e-12;
        } catch (const HypothesisError&) {
            ok = false;
        }
        bool refused = false;
        try {
            (void)check_holder(P64, C64, B64, 2.0, 0.5);  // p <= Q_beta
        } catch (const HypothesisError&) {
            refused = true;
        }
        criterion(11, "Holder embedding", ok && refused);
    }

    // 12. Hajlasz pointwise inequality on every sampled annulus pair.
    criterion(12, "Hajlasz inequality", check_hajlasz(P64, C64, theta).passed);

    // 13. Byte-identical report bundles for identical config + seed.
    {
        const fs::path base = fs::temp_directory_path() / "hyperfill_acceptance";
        fs::remove_all(base);
        VerifyConfig config;  // reference configuration, seed 42
        const auto space = make_interval_grid(64);
        config.out_dir = (base / "a").string();
        run_all(space, config);
        config.out_dir = (base / "b").string();
        run_all(space, config);
        const auto a = slurp_dir(base / "a");
        const auto b = slurp_dir(base / "b");
        criterion(13, "deterministic bundles", !a.empty() && a == b);
    }

    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all 13 criteria passed\n");
    return 0;
}
