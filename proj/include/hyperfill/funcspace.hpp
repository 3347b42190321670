#pragma once

#include <vector>

#include "hyperfill/measure.hpp"
#include "hyperfill/uniformize.hpp"

namespace hyperfill {

/// Besov/Dirichlet parameter bundle tied by beta = p(1-theta).
struct BesovParams {
    double p = 2.0;
    double theta = 0.5;

    double beta() const { return p * (1.0 - theta); }
    double q_beta(double Q) const { return std::max(1.0, Q + beta()); }
    bool q_star_defined(double Q) const { return p * theta < Q; }
    double q_star(double Q) const { return Q * p / (Q - p * theta); }

    void validate() const;  // p >= 1, theta in (0,1)
};

/// Real values on the points of Z.
using BoundaryFunction = std::vector<double>;

/// Real values on the augmented node set (interior + boundary), linearly
/// interpolated in rho-arclength along each edge.
using GraphFunction = std::vector<double>;

/// Tent-based Lipschitz partition of unity subordinate to the level-n net.
struct PartitionOfUnity {
    int level = 0;
    std::vector<int> centers;         // point indices of the net at this level
    std::vector<int> center_vertex;   // matching graph vertex ids
    std::vector<std::vector<double>> psi;  // psi[c][z], rows sum to 1 over c
};

double besov_norm(const PointCloudSpace& space, const BoundaryFunction& f, double p,
                  double theta);

double besov_norm_dyadic(const PointCloudSpace& space, const BoundaryFunction& f, double p,
                         double theta, double alpha);

double lp_norm_boundary(const PointCloudSpace& space, const BoundaryFunction& f, double p);

/// |u(a)-u(b)| / rho_length(e).
double edge_gradient(const UniformizedGraph& ugraph, const GraphFunction& u, int edge);

std::vector<double> edge_gradients(const UniformizedGraph& ugraph, const GraphFunction& u);

/// (sum_e g_e^p mu_beta(e))^{1/p} with g the edgewise difference quotient.
double dirichlet_norm(const UniformizedGraph& ugraph, const LiftedMeasure& measure,
                      const GraphFunction& u, double p);

/// L^p norm of the piecewise-linear interpolant against mu_beta
/// (16-node Gauss-Legendre per unit edge segment).
double lp_norm_graph(const UniformizedGraph& ugraph, const LiftedMeasure& measure,
                     const GraphFunction& u, double p);

PartitionOfUnity partition_of_unity(const PointCloudSpace& space, const FillingGraph& graph,
                                    int level);

/// Signed integral of the piecewise-linear interpolant of u over the edge
/// sub-segment [s0,s1] (rho-arclength from endpoint a) against mu_beta.
double segment_integral(const UniformizedGraph& ugraph, const LiftedMeasure& measure,
                        const GraphFunction& u, int edge, double s0, double s1);

}  // namespace hyperfill
