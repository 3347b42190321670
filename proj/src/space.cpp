#include "hyperfill/space.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hyperfill {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw std::runtime_error(msg); }

}  // namespace

PointCloudSpace::PointCloudSpace(std::vector<std::string> ids,
                                 std::vector<std::vector<double>> coords,
                                 std::vector<double> weights,
                                 std::vector<double> dist_matrix)
    : ids_(std::move(ids)),
      coords_(std::move(coords)),
      weight_(std::move(weights)),
      dist_(std::move(dist_matrix)) {
    const std::size_t n = ids_.size();
    if (coords_.empty()) coords_.resize(n);
    if (weight_.size() != n || dist_.size() != n * n || coords_.size() != n)
        fail("space: inconsistent field sizes");
}

bool PointCloudSpace::has_coords() const {
    return !coords_.empty() && !coords_[0].empty();
}

int PointCloudSpace::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < ids_.size(); ++i)
        if (ids_[i] == id) return static_cast<int>(i);
    return -1;
}

std::vector<int> PointCloudSpace::ball(std::size_t z, double r, bool closed) const {
    std::vector<int> out;
    for (std::size_t j = 0; j < size(); ++j) {
        const double d = dist(z, j);
        if (closed ? d <= r : d < r) out.push_back(static_cast<int>(j));
    }
    return out;
}

double PointCloudSpace::ball_measure(std::size_t z, double r, bool closed) const {
    double m = 0.0;
    for (std::size_t j = 0; j < size(); ++j) {
        const double d = dist(z, j);
        if (closed ? d <= r : d < r) m += weight_[j];
    }
    return m;
}

double PointCloudSpace::measure(const std::vector<int>& subset) const {
    double m = 0.0;
    for (int i : subset) {
        if (i < 0 || static_cast<std::size_t>(i) >= size()) fail("measure: unknown point index");
        m += weight_[i];
    }
    return m;
}

double PointCloudSpace::total_mass() const {
    double m = 0.0;
    for (double w : weight_) m += w;
    return m;
}

double PointCloudSpace::diameter() const {
    double d = 0.0;
    for (double v : dist_) d = std::max(d, v);
    return d;
}

double PointCloudSpace::min_positive_distance() const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < size(); ++i)
        for (std::size_t j = i + 1; j < size(); ++j) d = std::min(d, dist(i, j));
    return d;
}

void PointCloudSpace::validate() const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        if (!(weight_[i] > 0.0))
            fail("space: nonpositive weight at point " + ids_[i]);
        if (dist(i, i) != 0.0) fail("space: dist(" + ids_[i] + "," + ids_[i] + ") != 0");
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dist(i, j) != dist(j, i))
                fail("space: asymmetric distance (" + ids_[i] + "," + ids_[j] + ")");
            if (!(dist(i, j) > 0.0))
                fail("space: nonpositive distance between distinct points (" + ids_[i] + "," +
                     ids_[j] + ")");
        }
    auto check_triple = [&](std::size_t a, std::size_t b, std::size_t c) {
        // tolerance absorbs rounding in derived metrics (snowflakes etc.)
        if (dist(a, b) > dist(a, c) + dist(c, b) + 1e-12 * (1.0 + dist(a, b)))
            fail("space: triangle inequality violated by triple (" + ids_[a] + "," + ids_[b] +
                 "," + ids_[c] + ")");
    };
    if (n <= 512) {
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b)
                for (std::size_t c = 0; c < n; ++c)
                    if (c != a && c != b) check_triple(a, b, c);
    } else {
        std::mt19937_64 rng(0x5eedf00dULL);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (int t = 0; t < 1000000; ++t) {
            std::size_t a = pick(rng), b = pick(rng), c = pick(rng);
            if (a == b || b == c || a == c) continue;
            check_triple(a, b, c);
        }
    }
}

void PointCloudSpace::normalize_mass() {
    const double m = total_mass();
    if (m <= 0.0) fail("space: cannot normalize zero mass");
    for (double& w : weight_) w /= m;
}

namespace {

PointCloudSpace from_line_points(std::vector<double> xs) {
    const std::size_t n = xs.size();
    std::vector<std::string> ids(n);
    std::vector<std::vector<double>> coords(n);
    std::vector<double> w(n, 1.0 / static_cast<double>(n));
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        ids[i] = std::to_string(i);
        coords[i] = {xs[i]};
        for (std::size_t j = 0; j < n; ++j) d[i * n + j] = std::abs(xs[i] - xs[j]);
    }
    return PointCloudSpace(std::move(ids), std::move(coords), std::move(w), std::move(d));
}

}  // namespace

PointCloudSpace make_interval_grid(int n) {
    if (n < 2) fail("interval_grid: need n >= 2");
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = static_cast<double>(i) / (n - 1);
    return from_line_points(std::move(xs));
}

PointCloudSpace make_circle(int n) {
    if (n < 3) fail("circle: need n >= 3");
    std::vector<std::string> ids(n);
    std::vector<std::vector<double>> coords(n);
    std::vector<double> w(n, 1.0 / n);
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        ids[i] = std::to_string(i);
        const double t = static_cast<double>(i) / n;
        coords[i] = {std::cos(2 * M_PI * t), std::sin(2 * M_PI * t)};
        for (int j = 0; j < n; ++j) {
            // arc-length metric on a circle of circumference 1
            double frac = std::abs(i - j) / static_cast<double>(n);
            d[static_cast<std::size_t>(i) * n + j] = std::min(frac, 1.0 - frac);
        }
    }
    return PointCloudSpace(std::move(ids), std::move(coords), std::move(w), std::move(d));
}

PointCloudSpace make_cantor(int level) {
    if (level < 1) fail("cantor: need level >= 1");
    // 3-adic interval endpoints of the middle-thirds construction.
    std::vector<std::pair<double, double>> intervals{{0.0, 1.0}};
    for (int l = 0; l < level; ++l) {
        std::vector<std::pair<double, double>> next;
        for (auto [a, b] : intervals) {
            const double third = (b - a) / 3.0;
            next.emplace_back(a, a + third);
            next.emplace_back(b - third, b);
        }
        intervals = std::move(next);
    }
    std::vector<double> xs;
    for (auto [a, b] : intervals) {
        xs.push_back(a);
        xs.push_back(b);
    }
    std::sort(xs.begin(), xs.end());
    return from_line_points(std::move(xs));
}

PointCloudSpace make_snowflake(const PointCloudSpace& base, double eps) {
    if (!(eps > 0.0 && eps <= 1.0)) fail("snowflake: eps must lie in (0,1]");
    const std::size_t n = base.size();
    std::vector<std::string> ids(base.ids());
    std::vector<std::vector<double>> coords(n);
    std::vector<double> w(n);
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        coords[i] = base.coords(i);
        w[i] = base.weight(i);
        for (std::size_t j = 0; j < n; ++j)
            d[i * n + j] = i == j ? 0.0 : std::pow(base.dist(i, j), eps);
    }
    return PointCloudSpace(std::move(ids), std::move(coords), std::move(w), std::move(d));
}

ExponentEstimates estimate_exponents(const PointCloudSpace& space,
                                     const std::vector<double>& scale_grid) {
    if (space.size() < 2) fail("estimate_exponents: degenerate space");
    std::vector<double> grid(scale_grid);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
    // radii below the resolution see only singleton balls (the atomic
    // regime), which is no scaling information and inflates the fit; keep
    // the filter only when a decade of resolvable radii remains
    const double resolution = space.min_positive_distance();
    std::vector<double> resolvable;
    for (double r : grid)
        if (r >= resolution) resolvable.push_back(r);
    if (resolvable.size() >= 2 && resolvable.back() / resolvable.front() >= 10.0 - 1e-9)
        grid = resolvable;
    if (grid.size() < 2 || !(grid.front() > 0.0) ||
        grid.back() / grid.front() < 10.0 - 1e-9)
        fail("estimate_exponents: degenerate scale grid (need >= 1 decade of radii)");

    ExponentEstimates est;
    est.Q = 0.0;
    est.eta = std::numeric_limits<double>::infinity();
    for (std::size_t z = 0; z < space.size(); ++z) {
        std::vector<double> mass(grid.size());
        for (std::size_t k = 0; k < grid.size(); ++k) {
            mass[k] = space.ball_measure(z, grid[k]);
            est.C_nu = std::max(est.C_nu, space.ball_measure(z, 2.0 * grid[k]) / mass[k]);
        }
        for (std::size_t k = 0; k < grid.size(); ++k)
            for (std::size_t l = k + 1; l < grid.size(); ++l) {
                // uniform-bound fits read off decade-separated pairs only;
                // nearby radii are dominated by lattice granularity
                if (grid[l] / grid[k] < 10.0 - 1e-9) continue;
                // q = log(nu ratio) / log(radius ratio) for r' = grid[k] < r = grid[l]
                const double q =
                    std::log(mass[k] / mass[l]) / std::log(grid[k] / grid[l]);
                est.Q = std::max(est.Q, q);
                est.eta = std::min(est.eta, q);
            }
    }
    // Worst-case fits: with these exponents the inequalities hold with unit
    // constants on every sampled pair.
    est.C_low = 1.0;
    est.C_rev = 1.0;
    if (!std::isfinite(est.eta)) est.eta = 0.0;
    return est;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

PointCloudSpace load_space(const std::string& path, SpaceFormat format) {
    std::ifstream in(path);
    if (!in) fail("load_space: cannot open " + path);
    if (format == SpaceFormat::json) {
        nlohmann::json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            fail("load_space: JSON parse error in " + path + ": " + e.what());
        }
        std::vector<std::string> ids;
        std::vector<double> w;
        for (const auto& p : j.at("points")) {
            ids.push_back(p.at("id").is_string() ? p.at("id").get<std::string>()
                                                 : p.at("id").dump());
            w.push_back(p.at("weight").get<double>());
        }
        const std::size_t n = ids.size();
        std::vector<double> d;
        d.reserve(n * n);
        for (const auto& row : j.at("dist"))
            for (const auto& v : row) d.push_back(v.get<double>());
        if (d.size() != n * n) fail("load_space: dist matrix shape mismatch in " + path);
        PointCloudSpace space(std::move(ids), {}, std::move(w), std::move(d));
        space.validate();
        return space;
    }

    // CSV: header `id[,x,y,...],weight`; coordinate columns give the
    // Euclidean metric, otherwise a companion dense matrix `<stem>.dist.csv`.
    std::string header;
    if (!std::getline(in, header)) fail("load_space: empty file " + path);
    auto cols = split_csv_line(header);
    if (cols.size() < 2 || cols.front() != "id" || cols.back() != "weight")
        fail("load_space: expected header id[,x,y,...],weight in " + path);
    const std::size_t ncoord = cols.size() - 2;

    std::vector<std::string> ids;
    std::vector<std::vector<double>> coords;
    std::vector<double> w;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto f = split_csv_line(line);
        if (f.size() != cols.size()) fail("load_space: bad row in " + path + ": " + line);
        ids.push_back(f[0]);
        std::vector<double> c(ncoord);
        try {
            for (std::size_t k = 0; k < ncoord; ++k) c[k] = std::stod(f[1 + k]);
            w.push_back(std::stod(f.back()));
        } catch (const std::exception&) {
            fail("load_space: parse error in row: " + line);
        }
        coords.push_back(std::move(c));
    }
    const std::size_t n = ids.size();
    std::vector<double> d(n * n, 0.0);
    if (ncoord > 0) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < ncoord; ++k) {
                    const double diff = coords[i][k] - coords[j][k];
                    s += diff * diff;
                }
                d[i * n + j] = std::sqrt(s);
            }
    } else {
        std::string dist_path = path;
        const auto dot = dist_path.rfind(".csv");
        if (dot != std::string::npos) dist_path = dist_path.substr(0, dot);
        dist_path += ".dist.csv";
        std::ifstream din(dist_path);
        if (!din) fail("load_space: missing companion matrix " + dist_path);
        std::size_t row = 0;
        while (std::getline(din, line)) {
            if (line.empty()) continue;
            auto f = split_csv_line(line);
            if (f.size() != n || row >= n)
                fail("load_space: dist matrix shape mismatch in " + dist_path);
            for (std::size_t j = 0; j < n; ++j) d[row * n + j] = std::stod(f[j]);
            ++row;
        }
        if (row != n) fail("load_space: dist matrix shape mismatch in " + dist_path);
    }
    PointCloudSpace space(std::move(ids), std::move(coords), std::move(w), std::move(d));
    space.validate();
    return space;
}

void save_space(const PointCloudSpace& space, const std::string& path, SpaceFormat format) {
    std::ofstream out(path);
    if (!out) fail("save_space: cannot open " + path);
    out.precision(12);
    if (format == SpaceFormat::json) {
        nlohmann::json j;
        j["points"] = nlohmann::json::array();
        for (std::size_t i = 0; i < space.size(); ++i)
            j["points"].push_back({{"id", space.id(i)}, {"weight", space.weight(i)}});
        j["dist"] = nlohmann::json::array();
        for (std::size_t i = 0; i < space.size(); ++i) {
            nlohmann::json row = nlohmann::json::array();
            for (std::size_t k = 0; k < space.size(); ++k) row.push_back(space.dist(i, k));
            j["dist"].push_back(std::move(row));
        }
        out << j.dump(2) << "\n";
        return;
    }
    std::size_t ncoord = space.has_coords() ? space.coords(0).size() : 0;
    if (ncoord > 0) {
        // coordinate columns only if the metric really is Euclidean on them
        // (snowflaked spaces keep coords for labeling but not for distances)
        for (std::size_t i = 0; i < space.size() && ncoord > 0; ++i)
            for (std::size_t j = i + 1; j < space.size(); ++j) {
                double s = 0.0;
                for (std::size_t k = 0; k < ncoord; ++k) {
                    const double diff = space.coords(i)[k] - space.coords(j)[k];
                    s += diff * diff;
                }
                if (std::abs(std::sqrt(s) - space.dist(i, j)) > 1e-9) {
                    ncoord = 0;
                    break;
                }
            }
    }
    out << "id";
    for (std::size_t k = 0; k < ncoord; ++k) out << "," << static_cast<char>('x' + k);
    out << ",weight\n";
    for (std::size_t i = 0; i < space.size(); ++i) {
        out << space.id(i);
        for (std::size_t k = 0; k < ncoord; ++k) out << "," << space.coords(i)[k];
        out << "," << space.weight(i) << "\n";
    }
    if (ncoord == 0) {
        std::string dist_path = path;
        const auto dot = dist_path.rfind(".csv");
        if (dot != std::string::npos) dist_path = dist_path.substr(0, dot);
        dist_path += ".dist.csv";
        std::ofstream dout(dist_path);
        dout.precision(12);
        for (std::size_t i = 0; i < space.size(); ++i) {
            for (std::size_t k = 0; k < space.size(); ++k)
                dout << (k ? "," : "") << space.dist(i, k);
            dout << "\n";
        }
    }
}

}  // namespace hyperfill
