#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperfill/traceext.hpp"

namespace hyperfill {

/// Everything the inequality checks need, built once per configuration.
struct Pipeline {
    PointCloudSpace space;
    FillingParams params;
    Net nets;
    FillingGraph graph;
    UniformizedGraph ugraph;
    LiftedMeasure measure;
    std::vector<PartitionOfUnity> pous;  // one per level in [n_min, n_max]
    ExponentEstimates exponents;

    const PartitionOfUnity& pou(int n) const { return pous[n - params.n_min]; }
};

/// Build nets, filling, uniformization, lifted measure and partitions of
/// unity. n_max_bump shifts the default n_max (refinement-stability runs).
Pipeline build_pipeline(PointCloudSpace space, double alpha, double tau, double beta,
                        int n_max_bump = 0);

/// Named deterministic boundary test functions.
struct Corpus {
    std::vector<std::string> names;
    std::vector<BoundaryFunction> functions;

    std::size_t size() const { return functions.size(); }
};

/// Mixed family: constant, coordinate, Lipschitz bumps, random,
/// net-piecewise-constant, and multiscale Hoelder-rough functions.
Corpus make_corpus(const Pipeline& pipe, double theta, std::uint64_t seed);

/// Multiscale rough functions only (level amplitudes alpha^{-theta n});
/// these saturate the trace decay rate.
Corpus make_rough_corpus(const Pipeline& pipe, double theta, std::uint64_t seed, int count);

/// Boundary metric ball sample (center point index, radius).
struct BoundaryBall {
    int z;
    double r;
};

/// Deterministic geometric sample: up to max_centers evenly spaced centers
/// crossed with radii diam * alpha^{-j}, j = 1..n_radii.
std::vector<BoundaryBall> sample_boundary_balls(const Pipeline& pipe, int max_centers,
                                                int n_radii);

/// Measured hull approximation constant C: over the sampled balls,
/// max of (sup_{H^B} d_rho(z,.)/r) and (r / min d_rho(z, x) over x not in H^B),
/// clamped below by 1.
double hull_constant(const Pipeline& pipe, const std::vector<BoundaryBall>& balls);

/// Thrown when a check's hypothesis fails (run_all records these as
/// "skipped: hypothesis" rather than failures).
struct HypothesisError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// --- measure-side sweeps -------------------------------------------------

/// mu_beta(H^B) vs r^beta nu(B) over radii 2^-1..2^-5 (times diameter) and
/// all centers; slope fit of log hull mass vs log r attached.
ReportTable check_hull_scaling(const Pipeline& pipe);

/// Ball-mass doubling ratios over a two-decade rho-radius sample.
ReportTable check_doubling(const Pipeline& pipe);

/// Fitted lower volume decay order Q' of mu_beta (single-row table).
ReportTable check_lower_decay(const Pipeline& pipe);

// --- trace / extension sweeps -------------------------------------------

/// Per-function fit of log ||T_top(Pf) - T_n(Pf)||_p vs n; target slope
/// (beta/p - 1) ln alpha.
ReportTable check_trace_decay(const Pipeline& pipe, const Corpus& corpus, double p);

/// Relative L^p error of T_{n_max}(Pf) against f.
ReportTable check_trace_extension_identity(const Pipeline& pipe, const Corpus& corpus,
                                           double p);

/// ||T u||_Besov / ||u||_Dirichlet and ||Pf||_Dirichlet / ||f||_Besov.
ReportTable check_norm_domination(const Pipeline& pipe, const Corpus& corpus, double p,
                                  double theta);

/// Dyadic vs double-sum Besov norm ratio per corpus function.
ReportTable check_besov_equivalence(const Pipeline& pipe, const Corpus& corpus, double p,
                                    double theta);

/// Pointwise |f(x)-f(y)| <= d(x,y)^theta (g_k(x)+g_k(y)) on every pair in
/// the scale-k annulus, for all k and corpus functions.
ReportTable check_hajlasz(const Pipeline& pipe, const Corpus& corpus, double theta);

// --- inequality harness --------------------------------------------------

ReportTable check_poincare_trace(const Pipeline& pipe, const Corpus& corpus,
                                 const std::vector<BoundaryBall>& balls, double p);

ReportTable check_extension_poincare(const Pipeline& pipe, const Corpus& corpus,
                                     const std::vector<BoundaryBall>& balls, double p,
                                     double hull_c);

/// Requires p > Q_beta = max{1, Q + beta}; throws HypothesisError otherwise.
ReportTable check_holder(const Pipeline& pipe, const Corpus& corpus,
                         const std::vector<BoundaryBall>& balls, double p, double theta);

/// Requires p * theta < Q and a positive reverse-doubling exponent;
/// throws HypothesisError otherwise.
ReportTable check_sobolev_qstar(const Pipeline& pipe, const Corpus& corpus,
                                const std::vector<BoundaryBall>& balls, double p,
                                double theta);

/// Discrete sup over s in {alpha^-j <= r} and z' in B of
/// s^{1-beta/p} nu(B_Z(z',s))^{1/q-1/p}; requires q > p.
double compute_theta_q(const Pipeline& pipe, double p, double theta, double q,
                       const BoundaryBall& ball);

// --- bundle driver --------------------------------------------------------

struct VerifyConfig {
    double alpha = 2.0;
    double tau = 4.0;
    double p = 2.0;
    double theta = 0.5;
    std::uint64_t seed = 42;
    int n_max_bump = 0;
    std::vector<std::string> checks;  // empty = all
    std::string out_dir;              // empty = no files written
};

struct CheckOutcome {
    ReportTable table;
    bool skipped = false;     // hypothesis violation
    std::string skip_reason;
};

struct BundleResult {
    std::vector<CheckOutcome> outcomes;
    bool all_passed = true;  // failures only; hypothesis skips do not count
};

/// Run the requested checks (all by default) and, if out_dir is set, write
/// summary.json plus one CSV per check.
BundleResult run_all(const PointCloudSpace& space, const VerifyConfig& config);

}  // namespace hyperfill
