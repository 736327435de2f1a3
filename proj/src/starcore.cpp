#include "starfn/starcore.hpp"

#include "starfn/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace starfn {

namespace {

// cos and sin of the midpoint nodes x_i, cached per node count.
struct NodeTable {
    std::vector<double> re;
    std::vector<double> im;
};

std::shared_ptr<const NodeTable> unit_nodes(int count) {
    static std::mutex mutex;
    static std::map<int, std::shared_ptr<const NodeTable>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[count];
    if (!slot) {
        auto nodes = std::make_shared<NodeTable>();
        nodes->re.resize(count);
        nodes->im.resize(count);
        const double h = 2.0 * std::numbers::pi / count;
        for (int i = 0; i < count; ++i) {
            const Complex w = std::polar(1.0, -std::numbers::pi + (i + 0.5) * h);
            nodes->re[i] = w.real();
            nodes->im[i] = w.imag();
        }
        slot = std::move(nodes);
    }
    return slot;
}

std::vector<Complex> scaled_coefficients(const UniPoly& p, double r) {
    std::vector<Complex> c(p.coefficients().begin(), p.coefficients().end());
    double rk = 1.0;
    for (auto& a : c) {
        a *= rk;
        rk *= r;
    }
    return c;
}

// out[i] = |p(w_i)|^2 for all nodes at once. The node loop is innermost and
// written in real arithmetic so that it vectorizes; std::complex
// multiplication carries NaN-recovery branches that would dominate here.
void horner_norms(const std::vector<Complex>& c, const NodeTable& nodes, std::vector<double>& ar,
                  std::vector<double>& ai, std::vector<double>& out) {
    const std::size_t m = nodes.re.size();
    const double* wr = nodes.re.data();
    const double* wi = nodes.im.data();
    double* xr = ar.data();
    double* xi = ai.data();
    std::fill(ar.begin(), ar.end(), 0.0);
    std::fill(ai.begin(), ai.end(), 0.0);
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        const double cr = it->real(), ci = it->imag();
        for (std::size_t i = 0; i < m; ++i) {
            const double t = xr[i] * wr[i] - xi[i] * wi[i] + cr;
            xi[i] = xr[i] * wi[i] + xi[i] * wr[i] + ci;
            xr[i] = t;
        }
    }
    for (std::size_t i = 0; i < m; ++i) out[i] = xr[i] * xr[i] + xi[i] * xi[i];
}

// log|p(z)| without overflow for large |z|: p(z) = z^d q(1/z) with q the
// reversed polynomial.
double log_abs_eval(const UniPoly& p, Complex z) {
    const auto& c = p.coefficients();
    const double az = std::abs(z);
    if (az <= 1.0) {
        Complex acc{};
        for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * z + *it;
        return std::log(std::abs(acc));
    }
    const Complex u = 1.0 / z;
    Complex acc{};
    for (const Complex& a : c) acc = acc * u + a;
    return static_cast<double>(c.size() - 1) * std::log(az) + std::log(std::abs(acc));
}

void check_theta(double theta) {
    if (!(theta >= 0.0 && theta <= std::numbers::pi)) throw DomainError("theta must lie in [0, pi]");
}

}  // namespace

CircleSamples circle_log_samples(const SlicePair& slice, double r, int samples) {
    if (!(r > 0.0)) throw DomainError("radius must be positive");
    if (samples < 16) throw DomainError("at least 16 circle samples are required");
    auto nodes = unit_nodes(samples);
    const auto gc = scaled_coefficients(slice.g, r);
    const auto hc = scaled_coefficients(slice.h, r);

    CircleSamples out;
    out.r = r;
    out.direction.assign(slice.direction.components().begin(), slice.direction.components().end());
    out.values.resize(samples);
    std::vector<double> ar(samples), ai(samples), gn(samples), hn(samples);
    horner_norms(gc, *nodes, ar, ai, gn);
    horner_norms(hc, *nodes, ar, ai, hn);
    for (int i = 0; i < samples; ++i) {
        double v;
        if (std::isfinite(gn[i]) && std::isfinite(hn[i])) {
            v = 0.5 * std::log(gn[i] / hn[i]);
        } else {
            const Complex z = r * Complex(nodes->re[i], nodes->im[i]);
            v = log_abs_eval(slice.g, z) - log_abs_eval(slice.h, z);
        }
        if (std::isnan(v)) {
            v = 0.0;
            ++out.clipped;
        } else if (v < kLogFloor) {
            v = kLogFloor;
            ++out.clipped;
        } else if (v > kLogCeiling) {
            v = kLogCeiling;
            ++out.clipped;
        }
        out.values[i] = v;
    }
    return out;
}

CircleSamples circle_log_samples(const MeroFunction& f, const Direction& zeta, double r, int samples) {
    return circle_log_samples(make_slice(f, zeta), r, samples);
}

RearrangedProfile::RearrangedProfile(std::vector<double> values) : sorted_(std::move(values)) {
    std::sort(sorted_.begin(), sorted_.end(), std::greater<>());
    prefix_.resize(sorted_.size() + 1);
    prefix_[0] = 0.0;
    for (std::size_t k = 0; k < sorted_.size(); ++k) prefix_[k + 1] = prefix_[k] + sorted_[k];
    if (!sorted_.empty()) max_abs_ = std::max(std::abs(sorted_.front()), std::abs(sorted_.back()));
}

double RearrangedProfile::star(double theta) const {
    check_theta(theta);
    const int m = size();
    if (m == 0) return 0.0;
    const double q = theta * m / std::numbers::pi;
    int k = std::min(static_cast<int>(std::floor(q)), m);
    double value = prefix_[k];
    if (k < m) value += (q - k) * sorted_[k];
    return value / m;
}

double star_rearranged(const RearrangedProfile& profile, double theta) { return profile.star(theta); }

double star_rearranged(const CircleSamples& samples, double theta) {
    return RearrangedProfile(samples.values).star(theta);
}

LevelThreshold level_threshold(const RearrangedProfile& profile, double theta) {
    if (!(theta > 0.0 && theta < std::numbers::pi)) throw DomainError("level threshold needs theta in (0, pi)");
    const auto s = profile.sorted_values();
    const int m = profile.size();
    if (m == 0) throw DomainError("empty sample set");
    if (s.front() == s.back()) return {s.front(), true};
    const double q = theta * m / std::numbers::pi;
    int k = std::min(static_cast<int>(std::floor(q)), m - 1);
    return {s[k], false};
}

LevelThreshold level_threshold(const CircleSamples& samples, double theta) {
    return level_threshold(RearrangedProfile(samples.values), theta);
}

double star_thresholded(const CircleSamples& samples, double theta) {
    const double t = level_threshold(samples, theta).t;
    double excess = 0.0;
    for (double v : samples.values) excess += std::max(v - t, 0.0);
    return excess / samples.size() + theta * t / std::numbers::pi;
}

SliceEvaluator::SliceEvaluator(const MeroFunction& f, const Direction& zeta, double tol)
    : slice_(make_slice(f, zeta)), divisor_(slice_divisor(slice_, tol)) {}

RearrangedProfile SliceEvaluator::profile(double r, int count) const {
    return RearrangedProfile(circle_log_samples(slice_, r, count).values);
}

StarValue SliceEvaluator::star(double r, double theta, int count) const {
    check_theta(theta);
    StarValue v;
    v.r = r;
    v.theta = theta;
    v.fstar = theta == 0.0 ? 0.0 : profile(r, count).star(theta);
    v.big_N_inf = n_inf(r);
    v.total = v.fstar + v.big_N_inf;
    return v;
}

StarValue slice_star_total(const MeroFunction& f, const Direction& zeta, double r, double theta, int samples) {
    return SliceEvaluator(f, zeta).star(r, theta, samples);
}

}  // namespace starfn
