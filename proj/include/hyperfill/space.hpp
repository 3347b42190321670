#pragma once

#include <string>
#include <vector>

namespace hyperfill {

/// A finite metric measure space: points with a dense symmetric distance
/// matrix and strictly positive atomic weights. Immutable after
/// construction/validation; all queries are const and thread-safe.
class PointCloudSpace {
public:
    PointCloudSpace() = default;
    PointCloudSpace(std::vector<std::string> ids,
                    std::vector<std::vector<double>> coords,
                    std::vector<double> weights,
                    std::vector<double> dist_matrix);

    std::size_t size() const { return ids_.size(); }
    const std::string& id(std::size_t i) const { return ids_[i]; }
    const std::vector<std::string>& ids() const { return ids_; }
    const std::vector<double>& coords(std::size_t i) const { return coords_[i]; }
    bool has_coords() const;
    double weight(std::size_t i) const { return weight_[i]; }
    double dist(std::size_t i, std::size_t j) const { return dist_[i * size() + j]; }

    int index_of(const std::string& id) const;  // -1 if absent

    /// Open ball {y : d(z,y) < r} (closed = true gives d <= r).
    std::vector<int> ball(std::size_t z, double r, bool closed = false) const;
    double ball_measure(std::size_t z, double r, bool closed = false) const;

    double measure(const std::vector<int>& subset) const;
    double total_mass() const;
    double diameter() const;
    double min_positive_distance() const;

    /// Metric-axiom and weight validation. Exhaustive triple check up to
    /// 512 points, randomized (1e6 triples, fixed seed) above. Throws
    /// std::runtime_error naming the offending triple or weight.
    void validate() const;

    void normalize_mass();

private:
    std::vector<std::string> ids_;
    std::vector<std::vector<double>> coords_;
    std::vector<double> weight_;
    std::vector<double> dist_;
};

/// Fitted doubling / volume-decay exponents from a ratio sweep.
struct ExponentEstimates {
    double C_nu = 1.0;   // doubling constant estimate
    double Q = 0.0;      // lower volume decay order
    double C_low = 1.0;
    double eta = 0.0;    // reverse doubling exponent
    double C_rev = 1.0;
};

enum class SpaceFormat { csv, json };

PointCloudSpace load_space(const std::string& path, SpaceFormat format);
void save_space(const PointCloudSpace& space, const std::string& path, SpaceFormat format);

PointCloudSpace make_interval_grid(int n);
PointCloudSpace make_circle(int n);
PointCloudSpace make_cantor(int level);
PointCloudSpace make_snowflake(const PointCloudSpace& base, double eps);

/// Worst-case fit of C_nu, (Q, C_low) and (eta, C_rev) over all centers
/// and all ordered radius pairs from scale_grid. The fits are uniform
/// bounds: the fitted inequalities hold on every sampled pair.
ExponentEstimates estimate_exponents(const PointCloudSpace& space,
                                     const std::vector<double>& scale_grid);

}  // namespace hyperfill
