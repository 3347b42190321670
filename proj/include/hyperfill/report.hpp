#pragma once

#include <optional>
#include <string>
#include <vector>

namespace hyperfill {

/// Named ratio/series table produced by sweeps and verification checks.
struct ReportTable {
    struct Row {
        std::string desc;
        double param1 = 0.0;
        double param2 = 0.0;
        double lhs = 0.0;
        double rhs = 0.0;
        double value = 0.0;  // ratio or the swept quantity
    };
    struct SlopeFit {
        double slope = 0.0;
        double intercept = 0.0;
        double stderr_slope = 0.0;
        double r2 = 0.0;
    };

    std::string name;
    std::vector<Row> rows;
    std::optional<SlopeFit> slope;
    bool passed = true;
    std::string note;

    void add(std::string desc, double p1, double p2, double lhs, double rhs, double value);
    void add_value(std::string desc, double p1, double p2, double value);

    // Summary over positive values.
    double min_value() const;
    double max_value() const;
    double geomean_value() const;
    std::size_t count() const { return rows.size(); }

    std::string to_csv() const;       // name,param1,param2,value
    std::string to_csv_full() const;  // adds lhs,rhs columns
    std::string summary_json() const; // {name, min, max, geomean, count, ...}
};

/// Ordinary least squares of y on x with standard error and r^2.
ReportTable::SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hyperfill
