// hyperfill: build hyperbolic fillings of finite metric measure spaces,
// compute Besov/Dirichlet norms, apply trace/extension operators, and run
// the verification bundle.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hyperfill/verify.hpp"

using namespace hyperfill;
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

SpaceFormat format_of(const std::string& path, const std::string& override_fmt) {
    if (override_fmt == "csv") return SpaceFormat::csv;
    if (override_fmt == "json") return SpaceFormat::json;
    return fs::path(path).extension() == ".json" ? SpaceFormat::json : SpaceFormat::csv;
}

BoundaryFunction load_boundary_function(const PointCloudSpace& space,
                                        const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open function file: " + path);
    std::string line;
    if (!std::getline(in, line) || line.rfind("id,value", 0) != 0)
        throw std::runtime_error("function file must start with header id,value: " + path);
    BoundaryFunction f(space.size(), 0.0);
    std::vector<char> seen(space.size(), 0);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("bad function row: " + line);
        const int idx = space.index_of(line.substr(0, comma));
        if (idx < 0) throw std::runtime_error("unknown point id in " + path + ": " + line);
        f[idx] = std::stod(line.substr(comma + 1));
        seen[idx] = 1;
    }
    for (std::size_t z = 0; z < space.size(); ++z)
        if (!seen[z])
            throw std::runtime_error("function file misses point " + space.id(z));
    return f;
}

void save_boundary_function(const PointCloudSpace& space, const BoundaryFunction& f,
                            const std::string& path) {
    std::ofstream out(path);
    out << "id,value\n";
    for (std::size_t z = 0; z < space.size(); ++z)
        out << space.id(z) << "," << fmt(f[z]) << "\n";
}

std::string graph_function_json(const Pipeline& pipe, const GraphFunction& u) {
    nlohmann::json vertex_values, boundary_values;
    for (std::size_t v = 0; v < pipe.ugraph.n_interior; ++v)
        vertex_values[std::to_string(v)] = u[v];
    for (std::size_t z = 0; z < pipe.space.size(); ++z)
        boundary_values[pipe.space.id(z)] = u[pipe.ugraph.boundary_node(static_cast<int>(z))];
    nlohmann::json root;
    root["vertex_values"] = vertex_values;
    root["boundary_values"] = boundary_values;
    return root.dump(2) + "\n";
}

GraphFunction load_graph_function(const Pipeline& pipe, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph function file: " + path);
    nlohmann::json j;
    in >> j;
    GraphFunction u(pipe.ugraph.node_count(), 0.0);
    for (const auto& [key, val] : j.at("vertex_values").items()) {
        const std::size_t v = std::stoul(key);
        if (v >= pipe.ugraph.n_interior)
            throw std::runtime_error("vertex id out of range: " + key);
        u[v] = val.get<double>();
    }
    for (const auto& [key, val] : j.at("boundary_values").items()) {
        const int z = pipe.space.index_of(key);
        if (z < 0) throw std::runtime_error("unknown boundary point id: " + key);
        u[pipe.ugraph.boundary_node(z)] = val.get<double>();
    }
    return u;
}

int thread_cap(int flag_value) {
    // HYPERFILL_THREADS mirrors --threads; the cap bounds worker counts in
    // sweeps (the current implementation evaluates deterministically and
    // never exceeds it).
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("HYPERFILL_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hyperbolic filling toolkit"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "cap worker threads (env: HYPERFILL_THREADS)");

    // shared space/pipeline options
    struct Common {
        std::string space_path, space_format;
        double alpha = 2.0, tau = 4.0, p = 2.0, theta = 0.5;
        int n_max_bump = 0;
    };
    auto add_common = [&](CLI::App* cmd, Common& c, bool need_space = true) {
        auto* opt = cmd->add_option("--space", c.space_path, "space file (csv/json)");
        if (need_space) opt->required();
        cmd->add_option("--space-format", c.space_format, "csv|json (default: by extension)");
        cmd->add_option("--alpha", c.alpha, "scale base (> 1)");
        cmd->add_option("--tau", c.tau, "ball dilation (> max{3, alpha/(alpha-1)})");
        cmd->add_option("--p", c.p, "integrability exponent p >= 1");
        cmd->add_option("--theta", c.theta, "smoothness theta in (0,1)");
        cmd->add_option("--n-max-bump", c.n_max_bump, "shift of the default n_max");
    };
    auto pipeline_of = [&](const Common& c) {
        auto space = load_space(c.space_path, format_of(c.space_path, c.space_format));
        BesovParams bp{c.p, c.theta};
        bp.validate();
        return build_pipeline(std::move(space), c.alpha, c.tau, bp.beta(), c.n_max_bump);
    };

    // --- gen-space ---------------------------------------------------------
    auto* gen = app.add_subcommand("gen-space", "generate a reference space");
    std::string gen_kind, gen_out, gen_base, gen_format;
    int gen_n = 64, gen_level = 3;
    double gen_eps = 0.5;
    gen->add_option("kind", gen_kind, "interval-grid|circle|cantor|snowflake")->required();
    gen->add_option("--out", gen_out, "output file")->required();
    gen->add_option("--format", gen_format, "csv|json (default: by extension)");
    gen->add_option("--n", gen_n, "point count (interval-grid, circle)");
    gen->add_option("--level", gen_level, "construction level (cantor)");
    gen->add_option("--eps", gen_eps, "snowflake exponent in (0,1]");
    gen->add_option("--base", gen_base, "base space file (snowflake)");

    // --- build -------------------------------------------------------------
    auto* build_cmd = app.add_subcommand("build", "build filling + uniformization");
    Common build_c;
    std::string build_out;
    add_common(build_cmd, build_c);
    build_cmd->add_option("--out", build_out, "output directory")->required();

    // --- norms -------------------------------------------------------------
    auto* norms = app.add_subcommand("norms", "Besov/Lp norms of a boundary function");
    Common norms_c;
    std::string norms_fn;
    add_common(norms, norms_c);
    norms->add_option("--function", norms_fn, "boundary function csv (id,value)")
        ->required();

    // --- trace -------------------------------------------------------------
    auto* trace_cmd = app.add_subcommand("trace", "trace a graph function to the boundary");
    Common trace_c;
    std::string trace_in, trace_out;
    add_common(trace_cmd, trace_c);
    trace_cmd->add_option("--graph-function", trace_in, "graph function json")->required();
    trace_cmd->add_option("--out", trace_out, "output csv for the final trace")->required();

    // --- extend ------------------------------------------------------------
    auto* extend = app.add_subcommand("extend", "Poisson-extend a boundary function");
    Common extend_c;
    std::string extend_fn, extend_out;
    add_common(extend, extend_c);
    extend->add_option("--function", extend_fn, "boundary function csv")->required();
    extend->add_option("--out", extend_out, "output json for the graph function")
        ->required();

    // --- verify ------------------------------------------------------------
    auto* verify = app.add_subcommand("verify", "run the verification bundle");
    Common verify_c;
    std::string verify_out;
    std::vector<std::string> verify_checks;
    std::uint64_t verify_seed = 42;
    add_common(verify, verify_c);
    verify->add_option("--out", verify_out, "report bundle directory")->required();
    verify->add_option("--checks", verify_checks, "subset of checks (default: all)");
    verify->add_option("--seed", verify_seed, "corpus seed");

    CLI11_PARSE(app, argc, argv);
    (void)thread_cap(threads);

    try {
        if (gen->parsed()) {
            PointCloudSpace space;
            if (gen_kind == "interval-grid") {
                space = make_interval_grid(gen_n);
            } else if (gen_kind == "circle") {
                space = make_circle(gen_n);
            } else if (gen_kind == "cantor") {
                space = make_cantor(gen_level);
            } else if (gen_kind == "snowflake") {
                if (gen_base.empty())
                    throw std::runtime_error("snowflake requires --base");
                space = make_snowflake(load_space(gen_base, format_of(gen_base, gen_format)),
                                       gen_eps);
            } else {
                throw std::runtime_error("unknown space kind: " + gen_kind);
            }
            space.validate();
            save_space(space, gen_out, format_of(gen_out, gen_format));
            std::cout << "wrote " << gen_out << " (" << space.size() << " points)\n";
        } else if (build_cmd->parsed()) {
            const auto pipe = pipeline_of(build_c);
            fs::create_directories(build_out);
            {
                std::ofstream out(fs::path(build_out) / "graph.json");
                out << pipe.ugraph.to_json();
            }
            {
                std::ofstream out(fs::path(build_out) / "graph.dot");
                out << graph_to_dot(pipe.graph);
            }
            {
                const auto stats = degree_stats(pipe.graph);
                nlohmann::json j;
                j["max_degree"] = stats.max_degree;
                j["per_level_max"] = stats.per_level_max;
                nlohmann::json levels = nlohmann::json::array();
                for (int n = pipe.params.n_min; n <= pipe.params.n_max; ++n) {
                    nlohmann::json row;
                    row["level"] = n;
                    row["vertices"] = pipe.graph.level_vertices(n).size();
                    row["mass"] = level_mass(pipe.measure, pipe.ugraph, n);
                    levels.push_back(row);
                }
                j["levels"] = levels;
                j["n_min"] = pipe.params.n_min;
                j["n_max"] = pipe.params.n_max;
                std::ofstream out(fs::path(build_out) / "stats.json");
                out << j.dump(2) << "\n";
            }
            std::cout << "wrote graph.json, graph.dot, stats.json to " << build_out << "\n";
        } else if (norms->parsed()) {
            const auto pipe = pipeline_of(norms_c);
            const auto f = load_boundary_function(pipe.space, norms_fn);
            const auto ext = poisson_extension(pipe.space, pipe.ugraph, f);
            nlohmann::json j;
            j["besov"] = fmt(besov_norm(pipe.space, f, norms_c.p, norms_c.theta));
            j["besov_dyadic"] = fmt(
                besov_norm_dyadic(pipe.space, f, norms_c.p, norms_c.theta, norms_c.alpha));
            j["lp_boundary"] = fmt(lp_norm_boundary(pipe.space, f, norms_c.p));
            j["dirichlet_extension"] =
                fmt(dirichlet_norm(pipe.ugraph, pipe.measure, ext.values, norms_c.p));
            std::cout << j.dump(2) << "\n";
        } else if (trace_cmd->parsed()) {
            const auto pipe = pipeline_of(trace_c);
            const auto u = load_graph_function(pipe, trace_in);
            const auto tr = trace(pipe.space, pipe.ugraph, pipe.pous, u, pipe.params.n_min,
                                  pipe.params.n_max, trace_c.p);
            save_boundary_function(pipe.space, tr.final_trace(), trace_out);
            nlohmann::json decay = nlohmann::json::array();
            for (double d : tr.decay) decay.push_back(fmt(d));
            nlohmann::json j;
            j["decay"] = decay;
            j["out"] = trace_out;
            std::cout << j.dump(2) << "\n";
        } else if (extend->parsed()) {
            const auto pipe = pipeline_of(extend_c);
            const auto f = load_boundary_function(pipe.space, extend_fn);
            const auto ext = poisson_extension(pipe.space, pipe.ugraph, f);
            std::ofstream out(extend_out);
            out << graph_function_json(pipe, ext.values);
            std::cout << "wrote " << extend_out << "\n";
        } else if (verify->parsed()) {
            const auto space = load_space(verify_c.space_path,
                                          format_of(verify_c.space_path, verify_c.space_format));
            VerifyConfig config;
            config.alpha = verify_c.alpha;
            config.tau = verify_c.tau;
            config.p = verify_c.p;
            config.theta = verify_c.theta;
            config.seed = verify_seed;
            config.n_max_bump = verify_c.n_max_bump;
            config.checks = verify_checks;
            config.out_dir = verify_out;
            const auto result = run_all(space, config);
            for (const auto& o : result.outcomes) {
                std::cout << o.table.name << ": "
                          << (o.skipped ? "skipped: hypothesis"
                                        : (o.table.passed ? "passed" : "failed"))
                          << "\n";
            }
            if (!result.all_passed) return 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
