#include "hyperfill/report.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hyperfill {

void ReportTable::add(std::string desc, double p1, double p2, double lhs, double rhs,
                      double value) {
    rows.push_back({std::move(desc), p1, p2, lhs, rhs, value});
}

void ReportTable::add_value(std::string desc, double p1, double p2, double value) {
    rows.push_back({std::move(desc), p1, p2, 0.0, 0.0, value});
}

double ReportTable::min_value() const {
    double m = std::numeric_limits<double>::infinity();
    for (const auto& r : rows)
        if (r.value > 0.0) m = std::min(m, r.value);
    return m;
}

double ReportTable::max_value() const {
    double m = 0.0;
    for (const auto& r : rows) m = std::max(m, r.value);
    return m;
}

double ReportTable::geomean_value() const {
    double acc = 0.0;
    std::size_t n = 0;
    for (const auto& r : rows)
        if (r.value > 0.0) {
            acc += std::log(r.value);
            ++n;
        }
    return n ? std::exp(acc / static_cast<double>(n)) : 0.0;
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

}  // namespace

std::string ReportTable::to_csv() const {
    std::ostringstream out;
    out << "name,param1,param2,value\n";
    for (const auto& r : rows)
        out << r.desc << "," << fmt(r.param1) << "," << fmt(r.param2) << "," << fmt(r.value)
            << "\n";
    return out.str();
}

std::string ReportTable::to_csv_full() const {
    std::ostringstream out;
    out << "name,param1,param2,lhs,rhs,value\n";
    for (const auto& r : rows)
        out << r.desc << "," << fmt(r.param1) << "," << fmt(r.param2) << "," << fmt(r.lhs)
            << "," << fmt(r.rhs) << "," << fmt(r.value) << "\n";
    return out.str();
}

std::string ReportTable::summary_json() const {
    nlohmann::json j;
    j["name"] = name;
    j["min"] = rows.empty() ? 0.0 : min_value();
    j["max"] = max_value();
    j["geomean"] = geomean_value();
    j["count"] = count();
    j["passed"] = passed;
    if (!note.empty()) j["note"] = note;
    if (slope) {
        j["slope"] = slope->slope;
        j["slope_stderr"] = slope->stderr_slope;
        j["r2"] = slope->r2;
    }
    return j.dump();
}

ReportTable::SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_slope: need >= 2 matched samples");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
        syy += y[i] * y[i];
    }
    const double vxx = sxx - sx * sx / n;
    const double vxy = sxy - sx * sy / n;
    const double vyy = syy - sy * sy / n;
    ReportTable::SlopeFit fit;
    fit.slope = vxy / vxx;
    fit.intercept = (sy - fit.slope * sx) / n;
    const double ss_res = std::max(0.0, vyy - fit.slope * vxy);
    fit.r2 = vyy > 0.0 ? 1.0 - ss_res / vyy : 1.0;
    fit.stderr_slope =
        x.size() > 2 ? std::sqrt(ss_res / (n - 2.0) / vxx) : 0.0;
    return fit;
}

}  // namespace hyperfill
