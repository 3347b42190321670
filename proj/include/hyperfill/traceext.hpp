#pragma once

#include <vector>

#include "hyperfill/funcspace.hpp"

namespace hyperfill {

struct TraceResult {
    int n_from = 0;
    int n_to = 0;
    std::vector<BoundaryFunction> levels;  // T_n u for n in [n_from, n_to]
    std::vector<double> decay;             // ||T_{n+1}u - T_n u||_{L^p(Z)} per n

    const BoundaryFunction& at(int n) const { return levels[n - n_from]; }
    const BoundaryFunction& final_trace() const { return levels.back(); }
};

struct ExtensionResult {
    GraphFunction values;  // Pf on all augmented nodes (boundary carries f)
};

/// T_n u(z) = sum_v u(v) psi_v(z) over level-n partitions of unity.
TraceResult trace(const PointCloudSpace& space, const UniformizedGraph& ugraph,
                  const std::vector<PartitionOfUnity>& pous, const GraphFunction& u,
                  int n_from, int n_to, double p);

/// Pf(v) = weighted mean of f over B(v); boundary nodes carry f itself.
ExtensionResult poisson_extension(const PointCloudSpace& space,
                                  const UniformizedGraph& ugraph, const BoundaryFunction& f);

/// xi_n cutoff at vertex level: 0 on heights <= n, 1 above and on the
/// boundary; crossing edges interpolate via the piecewise-linear model.
GraphFunction truncate_extension(const UniformizedGraph& ugraph, const ExtensionResult& ext,
                                 int n);

/// Scale-k fractional gradients g_k(z) built from edge integrals of g along
/// the anchored ascending ray from v_{k,z} plus its horizontal star.
std::vector<BoundaryFunction> hajlasz_gradients(const PointCloudSpace& space,
                                                const UniformizedGraph& ugraph,
                                                const std::vector<double>& g_edges,
                                                double theta, int k_from, int k_to);

struct GradientViolation {
    int x, y;          // boundary point indices
    double lhs, rhs;   // |f(x)-f(y)| vs the curve integral
};

/// Necessary-condition check of the hyperbolic upper gradient inequality
/// along shortest and near-shortest (via-node) paths between sampled
/// boundary pairs. An empty result means no violation was found, not a
/// proof over all curves.
std::vector<GradientViolation> check_hyperbolic_upper_gradient(
    const PointCloudSpace& space, const UniformizedGraph& ugraph, const BoundaryFunction& f,
    const std::vector<double>& g_edges, int path_budget,
    const std::vector<std::pair<int, int>>& pairs);

}  // namespace hyperfill
