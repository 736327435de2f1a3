#include "starfn/starfn.h"

#include "starfn/error.hpp"
#include "starfn/function.hpp"
#include "starfn/harmonic.hpp"
#include "starfn/sphere.hpp"

#include <json.hpp>

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <new>
#include <string>
#include <thread>

using nlohmann::json;

struct starfn_function {
    starfn::MeroFunction f;
};

struct starfn_sample {
    starfn::DirectionSample sample;
};

struct starfn_grid {
    starfn::StarGrid grid;
};

namespace {

thread_local std::string last_error;
std::atomic<unsigned> thread_setting{0};

unsigned effective_threads() {
    unsigned t = thread_setting.load();
    if (t == 0) t = std::thread::hardware_concurrency();
    return t == 0 ? 1 : t;
}

starfn_status fail(starfn_status status, const char* what) {
    last_error = what;
    return status;
}

// Runs `body`, translating exceptions into status codes.
template <class Body>
starfn_status guarded(Body&& body) {
    try {
        body();
        last_error.clear();
        return STARFN_OK;
    } catch (const starfn::ParseError& e) {
        return fail(STARFN_ERR_PARSE, e.what());
    } catch (const starfn::DomainError& e) {
        return fail(STARFN_ERR_DOMAIN, e.what());
    } catch (const starfn::ConvergenceError& e) {
        return fail(STARFN_ERR_CONVERGENCE, e.what());
    } catch (const starfn::IoError& e) {
        return fail(STARFN_ERR_IO, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(STARFN_ERR_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(STARFN_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(STARFN_ERR_INTERNAL, e.what());
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

starfn::Complex to_cpp(starfn_complex c) { return {c.re, c.im}; }

starfn::Direction direction(const starfn_function* f, const starfn_complex* zeta) {
    require(zeta != nullptr, "direction is null");
    std::vector<starfn::Complex> v(f->f.dimension());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = to_cpp(zeta[i]);
    return starfn::Direction::normalized(std::move(v));
}

starfn::EvalOptions options(int circle_samples) {
    starfn::EvalOptions o;
    o.circle_samples = circle_samples;
    o.threads = effective_threads();
    return o;
}

starfn::GridSpec grid_spec(const starfn_grid_spec* spec) {
    require(spec != nullptr, "grid spec is null");
    starfn::GridSpec g{spec->r_min, spec->r_max, spec->nr, spec->theta_min, spec->theta_max, spec->ntheta};
    g.validate();
    return g;
}

starfn_estimate to_c(const starfn::Estimate& e) { return {e.mean, e.std_error, e.count_used, e.skipped}; }

starfn::Target target(starfn_target a) {
    require(a == STARFN_ZEROS || a == STARFN_POLES, "unknown target");
    return a == STARFN_ZEROS ? starfn::Target::zero : starfn::Target::pole;
}

json complex_json(starfn::Complex c) { return json::array({c.real(), c.imag()}); }

json complex_list(std::span<const starfn::Complex> v) {
    json out = json::array();
    for (auto c : v) out.push_back(complex_json(c));
    return out;
}

}  // namespace

extern "C" {

const char* starfn_last_error(void) { return last_error.c_str(); }

void starfn_string_free(char* s) { std::free(s); }

const char* starfn_version(void) { return "1.0.0"; }

void starfn_set_threads(unsigned threads) { thread_setting.store(threads); }

unsigned starfn_get_threads(void) { return effective_threads(); }

starfn_grid_spec starfn_default_grid_spec(void) {
    starfn::GridSpec g;
    return {g.r_min, g.r_max, g.nr, g.theta_min, g.theta_max, g.ntheta};
}

starfn_status starfn_parse_constant(const char* text, starfn_complex* out) {
    return guarded([&] {
        require(text && out, "null argument");
        const auto p = starfn::parse_polynomial(text, 1);
        if (p.degree() != 0) throw starfn::ParseError("expected a constant", 0);
        const auto c = p.constant_term();
        *out = {c.real(), c.imag()};
    });
}

starfn_status starfn_function_parse(const char* text, size_t n, starfn_function** out) {
    return guarded([&] {
        require(text && out, "null argument");
        *out = new starfn_function{starfn::parse_function(text, n)};
    });
}

starfn_status starfn_function_from_json(const char* json_text, starfn_function** out) {
    return guarded([&] {
        require(json_text && out, "null argument");
        *out = new starfn_function{starfn::function_from_json_text(json_text)};
    });
}

starfn_status starfn_function_load(const char* path, starfn_function** out) {
    return guarded([&] {
        require(path && out, "null argument");
        *out = new starfn_function{starfn::load_function_json(path)};
    });
}

starfn_status starfn_function_compose(const starfn_function* f, const starfn_complex* matrix, starfn_function** out) {
    return guarded([&] {
        require(f && matrix && out, "null argument");
        const std::size_t n = f->f.dimension();
        std::vector<starfn::Complex> u(n * n);
        for (std::size_t k = 0; k < u.size(); ++k) u[k] = to_cpp(matrix[k]);
        *out = new starfn_function{starfn::compose_linear(f->f, u)};
    });
}

void starfn_function_free(starfn_function* f) { delete f; }

size_t starfn_function_dimension(const starfn_function* f) { return f ? f->f.dimension() : 0; }

starfn_status starfn_function_to_string(const starfn_function* f, char** out) {
    return guarded([&] {
        require(f && out, "null argument");
        *out = copy_string(f->f.to_string());
    });
}

starfn_status starfn_function_to_json(const starfn_function* f, char** out) {
    return guarded([&] {
        require(f && out, "null argument");
        *out = copy_string(starfn::function_to_json_text(f->f));
    });
}

starfn_status starfn_slice_star(const starfn_function* f, const starfn_complex* zeta, double r, double theta,
                                int circle_samples, starfn_star_value* out) {
    return guarded([&] {
        require(f && out, "null argument");
        const auto v = starfn::slice_star_total(f->f, direction(f, zeta), r, theta, circle_samples);
        *out = {v.r, v.theta, v.fstar, v.big_N_inf, v.total};
    });
}

starfn_status starfn_slice_counting(const starfn_function* f, const starfn_complex* zeta, double r, starfn_target a,
                                    int* small_n, double* big_n) {
    return guarded([&] {
        require(f, "null argument");
        const auto rec = starfn::counting_record(f->f, direction(f, zeta), r, target(a));
        if (small_n) *small_n = rec.small_n;
        if (big_n) *big_n = rec.big_N;
    });
}

starfn_status starfn_slice_indeterminacy(const starfn_function* f, const starfn_complex* zeta, double tol, int* flag,
                                         double* separation) {
    return guarded([&] {
        require(f, "null argument");
        const auto ind = starfn::indeterminacy_test(f->f, direction(f, zeta), tol);
        if (flag) *flag = ind.flag ? 1 : 0;
        if (separation) *separation = ind.separation;
    });
}

starfn_status starfn_jensen_residual(const starfn_function* f, const starfn_complex* zeta, double r,
                                     int circle_samples, double* out) {
    return guarded([&] {
        require(f && out, "null argument");
        *out = starfn::jensen_residual(f->f, direction(f, zeta), r, circle_samples);
    });
}

starfn_status starfn_sample_create(size_t n, size_t count, uint64_t seed, starfn_sample** out) {
    return guarded([&] {
        require(out != nullptr, "null argument");
        *out = new starfn_sample{starfn::sample_directions(n, count, seed)};
    });
}

void starfn_sample_free(starfn_sample* s) { delete s; }

size_t starfn_sample_count(const starfn_sample* s) { return s ? s->sample.count() : 0; }

starfn_status starfn_sample_direction(const starfn_sample* s, size_t index, starfn_complex* out) {
    return guarded([&] {
        require(s && out, "null argument");
        require(index < s->sample.count(), "direction index out of range");
        const auto& d = s->sample.directions[index];
        for (std::size_t i = 0; i < d.dimension(); ++i) out[i] = {d[i].real(), d[i].imag()};
    });
}

starfn_status starfn_star_several(const starfn_function* f, const starfn_sample* s, double r, double theta,
                                  int circle_samples, starfn_estimate* out) {
    return guarded([&] {
        require(f && s && out, "null argument");
        *out = to_c(starfn::star_several(f->f, r, theta, s->sample, options(circle_samples)));
    });
}

starfn_status starfn_counting_several(const starfn_function* f, const starfn_sample* s, double r, starfn_target a,
                                      starfn_estimate* out) {
    return guarded([&] {
        require(f && s && out, "null argument");
        *out = to_c(starfn::counting_several(f->f, r, target(a), s->sample, options(starfn::kDefaultCircleSamples)));
    });
}

starfn_status starfn_lelong_number(const starfn_function* f, const starfn_sample* s, double t, starfn_target a,
                                   starfn_estimate* out) {
    return guarded([&] {
        require(f && s && out, "null argument");
        *out = to_c(starfn::lelong_number(f->f, t, target(a), s->sample, options(starfn::kDefaultCircleSamples)));
    });
}

starfn_status starfn_star_grid(const starfn_function* f, const starfn_grid_spec* spec, const starfn_sample* s,
                               int circle_samples, starfn_grid** out) {
    return guarded([&] {
        require(f && s && out, "null argument");
        *out = new starfn_grid{starfn::star_grid(f->f, grid_spec(spec), s->sample, options(circle_samples))};
    });
}

starfn_status starfn_grid_from_json(const char* json_text, starfn_grid** out) {
    return guarded([&] {
        require(json_text && out, "null argument");
        *out = new starfn_grid{starfn::grid_from_json(json_text)};
    });
}

void starfn_grid_free(starfn_grid* g) { delete g; }

void starfn_grid_shape(const starfn_grid* g, size_t* nr, size_t* ntheta) {
    if (nr) *nr = g ? g->grid.r_values.size() : 0;
    if (ntheta) *ntheta = g ? g->grid.theta_values.size() : 0;
}

starfn_status starfn_grid_cell(const starfn_grid* g, size_t i, size_t j, double* r, double* theta,
                               starfn_estimate* out) {
    return guarded([&] {
        require(g != nullptr, "null argument");
        require(i < g->grid.r_values.size() && j < g->grid.theta_values.size(), "grid index out of range");
        if (r) *r = g->grid.r_values[i];
        if (theta) *theta = g->grid.theta_values[j];
        if (out) *out = to_c(g->grid.at(i, j));
    });
}

int starfn_grid_equal(const starfn_grid* a, const starfn_grid* b) { return a && b && a->grid == b->grid ? 1 : 0; }

starfn_status starfn_grid_to_string(const starfn_grid* g, starfn_format format, char** out) {
    return guarded([&] {
        require(g && out, "null argument");
        *out = copy_string(format == STARFN_JSON ? starfn::grid_to_json(g->grid) : starfn::grid_to_csv(g->grid));
    });
}

starfn_status starfn_grid_export(const starfn_grid* g, const char* path, starfn_format format) {
    return guarded([&] {
        require(g && path, "null argument");
        starfn::export_grid(g->grid, path, format == STARFN_JSON ? starfn::GridFormat::json : starfn::GridFormat::csv);
    });
}

starfn_status starfn_subharmonicity(const starfn_function* f, const starfn_grid_spec* spec, const starfn_sample* s,
                                    int circle_samples, double rho, int nodes, double tol_quad, size_t* violations,
                                    char** report_json) {
    return guarded([&] {
        require(f && s, "null argument");
        const auto rep = starfn::subharmonicity_report(f->f, grid_spec(spec), s->sample, options(circle_samples), rho,
                                                       nodes, tol_quad);
        if (violations) *violations = rep.violations;
        if (!report_json) return;
        json points = json::array();
        double worst = 0.0;
        for (const auto& p : rep.points) {
            points.push_back({{"r", p.r},
                              {"theta", p.theta},
                              {"difference", p.difference},
                              {"stderr", p.std_error},
                              {"violation", p.violation}});
            worst = std::min(worst, p.difference + 3.0 * p.std_error + rep.tol_quad);
        }
        json j = {{"rho", rep.rho},
                  {"nodes", rep.nodes},
                  {"tol_quad", rep.tol_quad},
                  {"count_used", rep.count_used},
                  {"skipped", rep.skipped},
                  {"violations", rep.violations},
                  {"worst_margin", worst},
                  {"points", points}};
        *report_json = copy_string(j.dump());
    });
}

starfn_status starfn_slice_harmonicity(const starfn_function* f, const starfn_complex* zeta,
                                       const starfn_grid_spec* spec, int circle_samples, double tol, double rho,
                                       int nodes, int* harmonic, char** report_json) {
    return guarded([&] {
        require(f != nullptr, "null argument");
        const auto res = starfn::slice_harmonicity(f->f, direction(f, zeta), grid_spec(spec), circle_samples, tol, rho,
                                                   nodes);
        if (harmonic) *harmonic = res.harmonic ? 1 : 0;
        if (!report_json) return;
        json j = {{"harmonic", res.harmonic},
                  {"tol", tol},
                  {"max_defect", res.max_defect},
                  {"worst_r", res.worst_r},
                  {"worst_theta", res.worst_theta}};
        *report_json = copy_string(j.dump());
    });
}

starfn_status starfn_detect_harmonic(const starfn_function* f, double tol, int order, double tol_angle,
                                     int verify_trials, uint64_t seed, int* detected, char** report_json) {
    return guarded([&] {
        require(f != nullptr, "null argument");
        const auto rep = starfn::detect_harmonic_form(f->f, tol, order, tol_angle);
        if (detected) *detected = rep.detected ? 1 : 0;
        if (!report_json) return;
        json j = {{"detected", rep.detected},
                  {"reason", rep.reason},
                  {"order", rep.order},
                  {"per_degree_residuals", rep.per_degree_residuals},
                  {"imaginary_parts", rep.imaginary_parts}};
        if (rep.ray) {
            j["ray"] = {{"aligned", rep.ray->aligned},
                        {"theta_defined", rep.ray->theta_defined},
                        {"theta_hat", rep.ray->theta_hat},
                        {"max_deviation", rep.ray->max_deviation}};
        }
        if (rep.form) {
            const auto& form = *rep.form;
            json jf = {{"eta", complex_list(form.eta)},
                       {"profile", complex_list(form.profile)},
                       {"p_numerator", complex_list(form.p_numerator.coefficients())},
                       {"p_denominator", complex_list(form.p_denominator.coefficients())},
                       {"residual", form.residual}};
            if (verify_trials > 0) jf["verify_residual"] = starfn::verify_harmonic_form(f->f, form, verify_trials, seed);
            j["form"] = std::move(jf);
        }
        *report_json = copy_string(j.dump());
    });
}

starfn_status starfn_product_taylor(const char* product_json, int order, double* reality_defect, char** report_json) {
    return guarded([&] {
        require(product_json != nullptr, "null argument");
        const auto cp = starfn::canonical_product_from_json_text(product_json);
        const auto t = starfn::product_taylor_coeffs(cp, order);
        if (reality_defect) *reality_defect = t.reality_defect();
        if (!report_json) return;
        json j = {{"order", t.order},
                  {"coeffs", complex_list(t.coeffs)},
                  {"c_sums", t.c_sums},
                  {"d", t.d_values},
                  {"d_imag", t.d_imag},
                  {"reality_defect", t.reality_defect()}};
        *report_json = copy_string(j.dump());
    });
}

}  // extern "C"
