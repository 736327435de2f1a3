#include "starfn/sphere.hpp"

#include "parallel.hpp"
#include "starfn/error.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <optional>
#include <random>

namespace starfn {

namespace {

double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 8) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
    std::vector<double> out(n);
    if (n == 1) {
        out[0] = lo;
        return out;
    }
    for (std::size_t i = 0; i < n; ++i) out[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / (n - 1);
    return out;
}

// Evaluates `value(slice)` for every direction; nullopt marks a skipped one.
template <class Value>
std::vector<std::optional<Value>> per_direction(const MeroFunction& f, const DirectionSample& sample,
                                                const EvalOptions& options, auto&& value) {
    if (sample.n != f.dimension()) throw DomainError("direction sample dimension does not match function");
    std::vector<std::optional<Value>> out(sample.count());
    detail::parallel_for(sample.count(), options.threads, [&](std::size_t k) {
        SliceEvaluator slice(f, sample.directions[k], options.indeterminacy_tol);
        if (!slice.indeterminate()) out[k] = value(slice);
    });
    return out;
}

Estimate reduce(const std::vector<std::optional<double>>& values) {
    std::vector<double> used;
    used.reserve(values.size());
    for (const auto& v : values)
        if (v) used.push_back(*v);
    if (used.empty()) throw DomainError("every direction was skipped as indeterminate");
    return make_estimate(used, values.size() - used.size());
}

std::string format17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x + 0.0);
    return buf;
}

}  // namespace

DirectionSample sample_directions(std::size_t n, std::size_t count, std::uint64_t seed) {
    if (n == 0) throw DomainError("dimension must be positive");
    if (count == 0) throw DomainError("sample count must be positive");
    DirectionSample out;
    out.n = n;
    out.seed = seed;
    out.directions.reserve(count);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<Complex> v(n);
    while (out.directions.size() < count) {
        double norm2 = 0.0;
        for (auto& c : v) {
            double re = normal(rng);
            double im = normal(rng);
            c = Complex(re, im);
            norm2 += std::norm(c);
        }
        if (norm2 > 0.0) out.directions.push_back(Direction::normalized(v));
    }
    return out;
}

Estimate make_estimate(std::span<const double> values, std::size_t skipped) {
    Estimate e;
    e.count_used = values.size();
    e.skipped = skipped;
    if (values.empty()) return e;
    const double n = static_cast<double>(values.size());
    e.mean = pairwise_sum(values) / n;
    if (values.size() > 1) {
        std::vector<double> dev(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) dev[i] = (values[i] - e.mean) * (values[i] - e.mean);
        e.std_error = std::sqrt(pairwise_sum(dev) / (n - 1.0) / n);
    }
    return e;
}

Estimate star_several(const MeroFunction& f, double r, double theta, const DirectionSample& sample,
                      const EvalOptions& options) {
    return reduce(per_direction<double>(f, sample, options, [&](const SliceEvaluator& s) {
        return s.star(r, theta, options.circle_samples).total;
    }));
}

Estimate counting_several(const MeroFunction& f, double r, Target a, const DirectionSample& sample,
                          const EvalOptions& options) {
    return reduce(per_direction<double>(f, sample, options, [&](const SliceEvaluator& s) {
        return counting_big_N(s.divisor(), r, a);
    }));
}

Estimate lelong_number(const MeroFunction& f, double t, Target a, const DirectionSample& sample,
                       const EvalOptions& options) {
    return reduce(per_direction<double>(f, sample, options, [&](const SliceEvaluator& s) {
        return static_cast<double>(counting_small_n(s.divisor(), t, a));
    }));
}

void GridSpec::validate() const {
    if (nr == 0 || ntheta == 0) throw DomainError("grid needs at least one radius and one angle");
    if (!(r_min > 0.0) || !(r_max >= r_min)) throw DomainError("grid radii must satisfy 0 < r_min <= r_max");
    if (!(theta_min >= 0.0) || !(theta_max <= std::numbers::pi) || !(theta_max >= theta_min))
        throw DomainError("grid angles must satisfy 0 <= theta_min <= theta_max <= pi");
    if ((nr > 1 && r_max == r_min) || (ntheta > 1 && theta_max == theta_min))
        throw DomainError("degenerate grid range with more than one point");
}

std::vector<double> GridSpec::radii() const { return linspace(r_min, r_max, nr); }
std::vector<double> GridSpec::thetas() const { return linspace(theta_min, theta_max, ntheta); }

double GridSpec::min_spacing() const {
    double spacing = std::numeric_limits<double>::infinity();
    if (nr > 1) spacing = std::min(spacing, (r_max - r_min) / (nr - 1));
    if (ntheta > 1) spacing = std::min(spacing, 2.0 * r_min * std::sin((theta_max - theta_min) / (ntheta - 1) / 2.0));
    return spacing;
}

double default_test_radius(const GridSpec& spec) { return 0.5 * spec.min_spacing(); }

StarGrid star_grid(const MeroFunction& f, const GridSpec& spec, const DirectionSample& sample,
                   const EvalOptions& options) {
    spec.validate();
    StarGrid grid;
    grid.r_values = spec.radii();
    grid.theta_values = spec.thetas();
    grid.n = sample.n;
    grid.seed = sample.seed;
    grid.count = sample.count();
    grid.circle_samples = options.circle_samples;
    const std::size_t nr = grid.r_values.size(), nt = grid.theta_values.size();

    auto rows = per_direction<std::vector<double>>(f, sample, options, [&](const SliceEvaluator& s) {
        std::vector<double> cells(nr * nt);
        for (std::size_t i = 0; i < nr; ++i) {
            const double r = grid.r_values[i];
            const double n_inf = s.n_inf(r);
            std::optional<RearrangedProfile> profile;
            for (std::size_t j = 0; j < nt; ++j) {
                const double theta = grid.theta_values[j];
                double fstar = 0.0;
                if (theta > 0.0) {
                    if (!profile) profile = s.profile(r, options.circle_samples);
                    fstar = profile->star(theta);
                }
                cells[i * nt + j] = fstar + n_inf;
            }
        }
        return cells;
    });

    std::vector<const std::vector<double>*> used;
    for (const auto& row : rows)
        if (row) used.push_back(&*row);
    if (used.empty()) throw DomainError("every direction was skipped as indeterminate");
    grid.skipped = rows.size() - used.size();
    grid.cells.resize(nr * nt);
    std::vector<double> column(used.size());
    for (std::size_t c = 0; c < nr * nt; ++c) {
        for (std::size_t k = 0; k < used.size(); ++k) column[k] = (*used[k])[c];
        grid.cells[c] = make_estimate(column, grid.skipped);
    }
    return grid;
}

std::string grid_to_csv(const StarGrid& grid) {
    std::string out = "r,theta,mean,stderr,count_used\n";
    for (std::size_t i = 0; i < grid.r_values.size(); ++i)
        for (std::size_t j = 0; j < grid.theta_values.size(); ++j) {
            const Estimate& e = grid.at(i, j);
            out += format17(grid.r_values[i]) + "," + format17(grid.theta_values[j]) + "," + format17(e.mean) + "," +
                   format17(e.std_error) + "," + std::to_string(e.count_used) + "\n";
        }
    return out;
}

std::string grid_to_json(const StarGrid& grid) {
    nlohmann::json j;
    j["n"] = grid.n;
    j["seed"] = grid.seed;
    j["count"] = grid.count;
    j["skipped"] = grid.skipped;
    j["circle_samples"] = grid.circle_samples;
    j["r_values"] = grid.r_values;
    j["theta_values"] = grid.theta_values;
    auto& cells = j["cells"] = nlohmann::json::array();
    for (std::size_t i = 0; i < grid.r_values.size(); ++i)
        for (std::size_t k = 0; k < grid.theta_values.size(); ++k) {
            const Estimate& e = grid.at(i, k);
            cells.push_back({{"r", grid.r_values[i]},
                             {"theta", grid.theta_values[k]},
                             {"mean", e.mean + 0.0},
                             {"stderr", e.std_error},
                             {"count_used", e.count_used}});
        }
    return j.dump(2) + "\n";
}

StarGrid grid_from_json(std::string_view text) {
    StarGrid grid;
    try {
        auto j = nlohmann::json::parse(text);
        grid.n = j.at("n").get<std::size_t>();
        grid.seed = j.at("seed").get<std::uint64_t>();
        grid.count = j.at("count").get<std::size_t>();
        grid.skipped = j.at("skipped").get<std::size_t>();
        grid.circle_samples = j.at("circle_samples").get<int>();
        grid.r_values = j.at("r_values").get<std::vector<double>>();
        grid.theta_values = j.at("theta_values").get<std::vector<double>>();
        const auto& cells = j.at("cells");
        if (cells.size() != grid.r_values.size() * grid.theta_values.size())
            throw ParseError("grid cell count does not match its axes", 0);
        for (const auto& c : cells) {
            Estimate e;
            e.mean = c.at("mean").get<double>();
            e.std_error = c.at("stderr").get<double>();
            e.count_used = c.at("count_used").get<std::size_t>();
            e.skipped = grid.skipped;
            grid.cells.push_back(e);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("invalid grid JSON: ") + e.what(), 0);
    }
    return grid;
}

void export_grid(const StarGrid& grid, const std::filesystem::path& path, GridFormat format) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << (format == GridFormat::csv ? grid_to_csv(grid) : grid_to_json(grid));
    if (!out) throw IoError("write to " + path.string() + " failed");
}

std::vector<double> slice_mean_value_defects(const SliceEvaluator& slice, const GridSpec& spec, double rho,
                                             int nodes, int circle_samples) {
    spec.validate();
    if (spec.nr < 3 || spec.ntheta < 3) throw DomainError("mean-value test needs interior grid points");
    if (nodes < 2) throw DomainError("test circle needs at least two nodes");
    const auto radii = spec.radii();
    const auto thetas = spec.thetas();
    const std::size_t ni = spec.nr - 2, nj = spec.ntheta - 2;
    for (std::size_t i = 1; i + 1 < spec.nr; ++i)
        for (std::size_t j = 1; j + 1 < spec.ntheta; ++j)
            if (!(rho > 0.0) || !(radii[i] * std::sin(thetas[j]) > rho))
                throw DomainError("test disk around an interior grid point leaves the upper half-plane");

    std::vector<double> out(ni * nj);
    std::vector<RearrangedProfile> ring(nodes);
    std::vector<double> ring_radius(nodes), ring_angle(nodes), ring_n_inf(nodes);
    for (std::size_t i = 1; i + 1 < spec.nr; ++i) {
        const double r0 = radii[i];
        // |r0 e^{i theta} + rho e^{i(theta + psi)}| does not depend on theta;
        // nodes c and nodes-1-c share a radius.
        for (int c = 0; c < nodes; ++c) {
            const double psi = (c + 0.5) * 2.0 * std::numbers::pi / nodes;
            const Complex offset = r0 + std::polar(rho, psi);
            ring_radius[c] = std::abs(offset);
            ring_angle[c] = std::arg(offset);
            const int mirror = nodes - 1 - c;
            if (mirror < c) {
                ring[c] = ring[mirror];
                ring_n_inf[c] = ring_n_inf[mirror];
            } else {
                ring[c] = slice.profile(ring_radius[c], circle_samples);
                ring_n_inf[c] = slice.n_inf(ring_radius[c]);
            }
        }
        const RearrangedProfile centre = slice.profile(r0, circle_samples);
        const double centre_n_inf = slice.n_inf(r0);
        for (std::size_t j = 1; j + 1 < spec.ntheta; ++j) {
            const double theta = thetas[j];
            double ring_sum = 0.0;
            for (int c = 0; c < nodes; ++c) ring_sum += ring[c].star(theta + ring_angle[c]) + ring_n_inf[c];
            out[(i - 1) * nj + (j - 1)] = ring_sum / nodes - (centre.star(theta) + centre_n_inf);
        }
    }
    return out;
}

SubharmonicityReport subharmonicity_report(const MeroFunction& f, const GridSpec& spec, const DirectionSample& sample,
                                           const EvalOptions& options, double rho, int nodes, double tol_quad) {
    spec.validate();
    SubharmonicityReport report;
    report.rho = rho > 0.0 ? rho : default_test_radius(spec);
    report.nodes = nodes;
    report.tol_quad = tol_quad;

    auto rows = per_direction<std::vector<double>>(f, sample, options, [&](const SliceEvaluator& s) {
        return slice_mean_value_defects(s, spec, report.rho, nodes, options.circle_samples);
    });
    std::vector<const std::vector<double>*> used;
    for (const auto& row : rows)
        if (row) used.push_back(&*row);
    if (used.empty()) throw DomainError("every direction was skipped as indeterminate");
    report.count_used = used.size();
    report.skipped = rows.size() - used.size();

    const auto radii = spec.radii();
    const auto thetas = spec.thetas();
    const std::size_t nj = spec.ntheta - 2;
    std::vector<double> column(used.size());
    for (std::size_t p = 0; p < used.front()->size(); ++p) {
        for (std::size_t k = 0; k < used.size(); ++k) column[k] = (*used[k])[p];
        Estimate e = make_estimate(column);
        MeanValuePoint point;
        point.r = radii[1 + p / nj];
        point.theta = thetas[1 + p % nj];
        point.difference = e.mean;
        point.std_error = e.std_error;
        point.violation = e.mean < -(3.0 * e.std_error + tol_quad);
        report.violations += point.violation ? 1 : 0;
        report.points.push_back(point);
    }
    return report;
}

}  // namespace starfn
