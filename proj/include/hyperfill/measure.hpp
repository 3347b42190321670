#pragma once

#include <vector>

#include "hyperfill/report.hpp"
#include "hyperfill/uniformize.hpp"

namespace hyperfill {

/// The lifted measure mu_beta on the uniformized graph: vertex masses
/// mu_hat(v) = nu(B(v)) smeared onto edges with density
/// alpha^{-beta h(x)} (mu_hat(v) + mu_hat(w)) per unit Lebesgue length.
/// Tail edges carry the full infinite-tail integral with mu_hat frozen at
/// its top-level value. Immutable after lift_measure.
class LiftedMeasure {
public:
    double beta = 1.0;
    std::vector<double> mu_hat;     // per interior vertex
    std::vector<double> edge_mass;  // per uedge, closed form

    /// Mass of the edge piece between rho-arclengths [s0, s1] measured
    /// from endpoint `a` (exact restricted integral, not a linear clip of
    /// Lebesgue length).
    double edge_mass_segment(const UniformizedGraph& ugraph, int edge, double s0,
                             double s1) const;

    double total_mass() const;
};

LiftedMeasure lift_measure(const UniformizedGraph& ugraph, const PointCloudSpace& space,
                           double beta);

double hull_mass(const LiftedMeasure& measure, const UniformizedGraph& ugraph,
                 const Hull& hull);

/// Mass of the Lebesgue half of an edge toward the given endpoint.
double half_edge_mass(const LiftedMeasure& measure, const UniformizedGraph& ugraph,
                      int edge, int toward);

/// Mass of the rho-ball {x : d_rho(center, x) < r}; straddling edges enter
/// with the exact mass of their traversed sub-segments.
double ball_mass_rho(const LiftedMeasure& measure, const UniformizedGraph& ugraph,
                     int center_node, double r);

/// As above but reusing a precomputed Dijkstra distance field from the center.
double ball_mass_rho(const LiftedMeasure& measure, const UniformizedGraph& ugraph,
                     const std::vector<double>& dist, double r);

/// The edge sub-segments [s0,s1] (rho-arclength from endpoint a) making up
/// the rho-ball of radius r around the source of the distance field.
struct EdgeSegment {
    int edge;
    double s0, s1;
};
std::vector<EdgeSegment> ball_segments(const UniformizedGraph& ugraph,
                                       const std::vector<double>& dist, double r);

/// Sum of mu_beta over edges touching level n.
double level_mass(const LiftedMeasure& measure, const UniformizedGraph& ugraph, int n);

struct BallSample {
    int node;   // augmented node id (interior or boundary)
    double r;
};

ReportTable doubling_sweep(const LiftedMeasure& measure, const UniformizedGraph& ugraph,
                           const std::vector<BallSample>& samples);

struct DecayFit {
    double Q = 0.0;
    double C = 1.0;
};

/// Worst-case relative lower volume decay order over concentric sample
/// pairs at least a decade apart in radius.
DecayFit lower_decay_fit(const LiftedMeasure& measure, const UniformizedGraph& ugraph,
                         const std::vector<int>& centers, const std::vector<double>& radii);

}  // namespace hyperfill
