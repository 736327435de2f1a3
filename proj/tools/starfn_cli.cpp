// starfn command-line front end. Links only the C interface.
#include "starfn/starfn.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <memory>
#include <numbers>
#include <string>
#include <vector>

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailed = 1;
constexpr int kExitUsage = 2;

// Thrown for anything that should end the run with the usage/parse exit code.
struct UsageError {
    std::string message;
};

// Thrown when a library call fails with a status other than a precondition.
struct LibraryError {
    starfn_status status;
    std::string message;
};

void check(starfn_status status) {
    if (status == STARFN_OK) return;
    const std::string what = starfn_last_error();
    if (status == STARFN_ERR_PARSE || status == STARFN_ERR_ARGUMENT || status == STARFN_ERR_IO ||
        status == STARFN_ERR_DOMAIN)
        throw UsageError{what};
    throw LibraryError{status, what};
}

struct FunctionDeleter {
    void operator()(starfn_function* f) const { starfn_function_free(f); }
};
struct SampleDeleter {
    void operator()(starfn_sample* s) const { starfn_sample_free(s); }
};
struct GridDeleter {
    void operator()(starfn_grid* g) const { starfn_grid_free(g); }
};
struct StringDeleter {
    void operator()(char* s) const { starfn_string_free(s); }
};

using FunctionPtr = std::unique_ptr<starfn_function, FunctionDeleter>;
using SamplePtr = std::unique_ptr<starfn_sample, SampleDeleter>;
using GridPtr = std::unique_ptr<starfn_grid, GridDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

struct Config {
    std::string fn_path;
    std::string expr;
    std::size_t n = 0;
    double r = 2.0;
    double theta = 0.0;
    double t = 1.0;
    std::string a = "0";
    std::string zeta;
    std::size_t samples = 10000;
    int circle = 4096;
    std::uint64_t seed = 42;
    double tol = -1.0;
    double rho = 0.0;
    int nodes = 8;
    int order = -1;
    int trials = 200;
    std::string out;
    std::string format;
    std::string product;
    starfn_grid_spec grid = starfn_default_grid_spec();
};

FunctionPtr load_function(const Config& c) {
    starfn_function* f = nullptr;
    if (!c.fn_path.empty() && !c.expr.empty()) throw UsageError{"give either --fn or --expr, not both"};
    if (!c.fn_path.empty()) {
        check(starfn_function_load(c.fn_path.c_str(), &f));
    } else if (!c.expr.empty()) {
        if (c.n == 0) throw UsageError{"--expr needs --n"};
        check(starfn_function_parse(c.expr.c_str(), c.n, &f));
    } else {
        throw UsageError{"a function is required (--fn FILE or --expr TEXT --n N)"};
    }
    return FunctionPtr(f);
}

std::vector<starfn_complex> parse_zeta(const Config& c, std::size_t n) {
    if (c.zeta.empty()) throw UsageError{"--zeta is required"};
    std::vector<starfn_complex> out;
    std::size_t start = 0;
    while (start <= c.zeta.size()) {
        const std::size_t comma = c.zeta.find(',', start);
        const std::string piece = c.zeta.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
        starfn_complex z{};
        check(starfn_parse_constant(piece.c_str(), &z));
        out.push_back(z);
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.size() != n)
        throw UsageError{"--zeta has " + std::to_string(out.size()) + " components, expected " + std::to_string(n)};
    return out;
}

starfn_target parse_target(const std::string& a) {
    if (a == "0" || a == "zero" || a == "zeros") return STARFN_ZEROS;
    if (a == "inf" || a == "infinity" || a == "pole" || a == "poles") return STARFN_POLES;
    throw UsageError{"--a must be 0 or inf"};
}

SamplePtr make_sample(const Config& c, std::size_t n) {
    starfn_sample* s = nullptr;
    check(starfn_sample_create(n, c.samples, c.seed, &s));
    return SamplePtr(s);
}

json estimate_json(const starfn_estimate& e) {
    return {{"mean", e.mean}, {"stderr", e.std_error}, {"count_used", e.count_used}, {"skipped", e.skipped}};
}

json parse_report(char* raw) {
    StringPtr owned(raw);
    return json::parse(owned.get());
}

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

void add_function_options(CLI::App* app, Config& c) {
    app->add_option("--fn", c.fn_path, "function definition JSON file");
    app->add_option("--expr", c.expr, "inline definition \"G\" or \"G / H\"");
    app->add_option("--n", c.n, "number of variables for --expr");
}

void add_sampling_options(CLI::App* app, Config& c) {
    app->add_option("--samples", c.samples, "sphere directions")->check(CLI::PositiveNumber);
    app->add_option("--seed", c.seed, "random seed");
}

void add_circle_option(CLI::App* app, Config& c) {
    app->add_option("--circle", c.circle, "circle samples M")->check(CLI::Range(16, 1 << 24));
}

void add_grid_options(CLI::App* app, Config& c) {
    app->add_option("--r-min", c.grid.r_min);
    app->add_option("--r-max", c.grid.r_max);
    app->add_option("--nr", c.grid.nr);
    app->add_option("--theta-min", c.grid.theta_min);
    app->add_option("--theta-max", c.grid.theta_max);
    app->add_option("--ntheta", c.grid.ntheta);
}

int run_slice_star(const Config& c) {
    auto f = load_function(c);
    auto zeta = parse_zeta(c, starfn_function_dimension(f.get()));
    starfn_star_value v{};
    check(starfn_slice_star(f.get(), zeta.data(), c.r, c.theta, c.circle, &v));
    emit({{"r", v.r}, {"theta", v.theta}, {"fstar", v.fstar}, {"N_inf", v.big_n_inf}, {"total", v.total}});
    return kExitOk;
}

int run_star(const Config& c) {
    auto f = load_function(c);
    auto s = make_sample(c, starfn_function_dimension(f.get()));
    starfn_estimate e{};
    check(starfn_star_several(f.get(), s.get(), c.r, c.theta, c.circle, &e));
    json j = estimate_json(e);
    j["r"] = c.r;
    j["theta"] = c.theta;
    emit(j);
    return kExitOk;
}

int run_counting(const Config& c) {
    auto f = load_function(c);
    const starfn_target a = parse_target(c.a);
    if (!c.zeta.empty()) {
        auto zeta = parse_zeta(c, starfn_function_dimension(f.get()));
        int small_n = 0;
        double big_n = 0.0;
        check(starfn_slice_counting(f.get(), zeta.data(), c.r, a, &small_n, &big_n));
        int indeterminate = 0;
        double separation = 0.0;
        check(starfn_slice_indeterminacy(f.get(), zeta.data(), c.tol > 0 ? c.tol : 1e-9, &indeterminate, &separation));
        emit({{"r", c.r},
              {"a", a == STARFN_ZEROS ? "0" : "inf"},
              {"n", small_n},
              {"N", big_n},
              {"indeterminate", indeterminate != 0},
              {"separation", separation}});
        return kExitOk;
    }
    auto s = make_sample(c, starfn_function_dimension(f.get()));
    starfn_estimate e{};
    check(starfn_counting_several(f.get(), s.get(), c.r, a, &e));
    json j = estimate_json(e);
    j["r"] = c.r;
    j["a"] = a == STARFN_ZEROS ? "0" : "inf";
    emit(j);
    return kExitOk;
}

int run_lelong(const Config& c) {
    auto f = load_function(c);
    const starfn_target a = parse_target(c.a);
    auto s = make_sample(c, starfn_function_dimension(f.get()));
    starfn_estimate e{};
    check(starfn_lelong_number(f.get(), s.get(), c.t, a, &e));
    json j = estimate_json(e);
    j["t"] = c.t;
    j["a"] = a == STARFN_ZEROS ? "0" : "inf";
    emit(j);
    return kExitOk;
}

starfn_format output_format(const Config& c) {
    std::string fmt = c.format;
    if (fmt.empty()) fmt = c.out.size() >= 5 && c.out.ends_with(".json") ? "json" : "csv";
    if (fmt == "csv") return STARFN_CSV;
    if (fmt == "json") return STARFN_JSON;
    throw UsageError{"--format must be csv or json"};
}

int run_grid(const Config& c) {
    auto f = load_function(c);
    auto s = make_sample(c, starfn_function_dimension(f.get()));
    starfn_grid* raw = nullptr;
    check(starfn_star_grid(f.get(), &c.grid, s.get(), c.circle, &raw));
    GridPtr g(raw);
    const starfn_format format = output_format(c);
    std::size_t nr = 0, nt = 0;
    starfn_grid_shape(g.get(), &nr, &nt);
    json summary = {{"nr", nr},
                    {"ntheta", nt},
                    {"samples", c.samples},
                    {"seed", c.seed},
                    {"circle", c.circle},
                    {"format", format == STARFN_JSON ? "json" : "csv"}};
    if (c.out.empty() || c.out == "-") {
        char* text = nullptr;
        check(starfn_grid_to_string(g.get(), format, &text));
        StringPtr owned(text);
        std::fputs(owned.get(), stdout);
        return kExitOk;
    }
    check(starfn_grid_export(g.get(), c.out.c_str(), format));
    starfn_estimate e{};
    check(starfn_grid_cell(g.get(), 0, 0, nullptr, nullptr, &e));
    summary["out"] = c.out;
    summary["skipped"] = e.skipped;
    emit(summary);
    return kExitOk;
}

int run_check_jensen(const Config& c) {
    auto f = load_function(c);
    auto zeta = parse_zeta(c, starfn_function_dimension(f.get()));
    const double tol = c.tol > 0 ? c.tol : 1e-6;
    double residual = 0.0;
    check(starfn_jensen_residual(f.get(), zeta.data(), c.r, c.circle, &residual));
    const bool ok = residual <= tol;
    emit({{"check", "jensen"}, {"r", c.r}, {"circle", c.circle}, {"residual", residual}, {"tol", tol}, {"pass", ok}});
    return ok ? kExitOk : kExitFailed;
}

int run_check_subharmonic(const Config& c) {
    auto f = load_function(c);
    auto s = make_sample(c, starfn_function_dimension(f.get()));
    std::size_t violations = 0;
    char* report = nullptr;
    check(starfn_subharmonicity(f.get(), &c.grid, s.get(), c.circle, c.rho, c.nodes, c.tol > 0 ? c.tol : 1e-4,
                                &violations, &report));
    json j = parse_report(report);
    j["check"] = "subharmonic";
    j["pass"] = violations == 0;
    emit(j);
    return violations == 0 ? kExitOk : kExitFailed;
}

int run_check_harmonic_slice(const Config& c) {
    auto f = load_function(c);
    auto zeta = parse_zeta(c, starfn_function_dimension(f.get()));
    int harmonic = 0;
    char* report = nullptr;
    check(starfn_slice_harmonicity(f.get(), zeta.data(), &c.grid, c.circle, c.tol > 0 ? c.tol : 1e-3, c.rho, c.nodes,
                                   &harmonic, &report));
    json j = parse_report(report);
    j["check"] = "harmonic-slice";
    emit(j);
    return harmonic ? kExitOk : kExitFailed;
}

int run_detect_harmonic(const Config& c) {
    auto f = load_function(c);
    int detected = 0;
    char* report = nullptr;
    check(starfn_detect_harmonic(f.get(), c.tol > 0 ? c.tol : 1e-9, c.order, 1e-6, c.trials, c.seed, &detected,
                                 &report));
    emit(parse_report(report));
    return detected ? kExitOk : kExitFailed;
}

int run_product_taylor(const Config& c) {
    if (c.product.empty()) throw UsageError{"--product is required"};
    std::string text;
    {
        std::FILE* in = std::fopen(c.product.c_str(), "rb");
        if (!in) throw UsageError{"cannot open " + c.product};
        char buf[4096];
        std::size_t got;
        while ((got = std::fread(buf, 1, sizeof buf, in)) > 0) text.append(buf, got);
        std::fclose(in);
    }
    double defect = 0.0;
    char* report = nullptr;
    check(starfn_product_taylor(text.c_str(), c.order < 0 ? 12 : c.order, &defect, &report));
    json j = parse_report(report);
    const double tol = c.tol > 0 ? c.tol : 1e-12;
    j["tol"] = tol;
    j["pass"] = defect <= tol;
    emit(j);
    return defect <= tol ? kExitOk : kExitFailed;
}

void apply_thread_env() {
    const char* env = std::getenv("STARFN_THREADS");
    if (!env || !*env) return;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v <= 0) throw UsageError{"STARFN_THREADS must be a positive integer"};
    const unsigned hw = starfn_get_threads();
    starfn_set_threads(static_cast<unsigned>(std::min<long>(v, hw)));
}

}  // namespace

int main(int argc, char** argv) {
    Config c;
    CLI::App app{"Star functions, counting functions and Lelong numbers of rational functions on C^n"};
    app.require_subcommand(1);

    auto* slice_star = app.add_subcommand("slice-star", "T*(r e^{i theta}) of one slice");
    add_function_options(slice_star, c);
    slice_star->add_option("--zeta", c.zeta, "direction, comma separated components")->required();
    slice_star->add_option("--r", c.r)->check(CLI::PositiveNumber);
    slice_star->add_option("--theta", c.theta)->check(CLI::Range(0.0, std::numbers::pi));
    add_circle_option(slice_star, c);

    auto* star = app.add_subcommand("star", "sphere average of the slice star function");
    add_function_options(star, c);
    star->add_option("--r", c.r)->check(CLI::PositiveNumber);
    star->add_option("--theta", c.theta)->check(CLI::Range(0.0, std::numbers::pi));
    add_sampling_options(star, c);
    add_circle_option(star, c);

    auto* counting = app.add_subcommand("counting", "N(r, a) of one slice (--zeta) or its sphere average");
    add_function_options(counting, c);
    counting->add_option("--r", c.r)->check(CLI::PositiveNumber);
    counting->add_option("--a", c.a, "0 or inf");
    counting->add_option("--zeta", c.zeta);
    counting->add_option("--tol", c.tol, "indeterminacy tolerance");
    add_sampling_options(counting, c);

    auto* lelong = app.add_subcommand("lelong", "sphere average of n(t, a)");
    add_function_options(lelong, c);
    lelong->add_option("--t", c.t)->check(CLI::PositiveNumber);
    lelong->add_option("--a", c.a, "0 or inf");
    add_sampling_options(lelong, c);

    auto* grid = app.add_subcommand("grid", "star function on an (r, theta) grid");
    add_function_options(grid, c);
    add_grid_options(grid, c);
    add_sampling_options(grid, c);
    add_circle_option(grid, c);
    grid->add_option("--out", c.out, "output file, '-' for stdout");
    grid->add_option("--format", c.format, "csv or json");

    auto* check_cmd = app.add_subcommand("check", "verification suites");
    check_cmd->require_subcommand(1);

    auto* jensen = check_cmd->add_subcommand("jensen", "Jensen formula residual of one slice");
    add_function_options(jensen, c);
    jensen->add_option("--zeta", c.zeta)->required();
    jensen->add_option("--r", c.r)->check(CLI::PositiveNumber);
    jensen->add_option("--tol", c.tol);
    add_circle_option(jensen, c);

    auto* subharmonic = check_cmd->add_subcommand("subharmonic", "mean-value test of the sphere star function");
    add_function_options(subharmonic, c);
    add_grid_options(subharmonic, c);
    add_sampling_options(subharmonic, c);
    add_circle_option(subharmonic, c);
    subharmonic->add_option("--rho", c.rho, "test circle radius (default half the grid spacing)");
    subharmonic->add_option("--nodes", c.nodes)->check(CLI::Range(2, 1 << 16));
    subharmonic->add_option("--tol", c.tol, "quadrature allowance");

    auto* harmonic_slice = check_cmd->add_subcommand("harmonic-slice", "mean-value equality on one slice");
    add_function_options(harmonic_slice, c);
    harmonic_slice->add_option("--zeta", c.zeta)->required();
    add_grid_options(harmonic_slice, c);
    add_circle_option(harmonic_slice, c);
    harmonic_slice->add_option("--rho", c.rho);
    harmonic_slice->add_option("--nodes", c.nodes)->check(CLI::Range(2, 1 << 16));
    harmonic_slice->add_option("--tol", c.tol);

    auto* detect = app.add_subcommand("detect-harmonic", "decide whether F = P(Z . eta)");
    add_function_options(detect, c);
    detect->add_option("--tol", c.tol);
    detect->add_option("--order", c.order);
    detect->add_option("--trials", c.trials, "random points for verifying a detected form");
    detect->add_option("--seed", c.seed);

    auto* taylor = app.add_subcommand("product-taylor", "Taylor data of a canonical product");
    taylor->add_option("--product", c.product, "canonical product JSON file")->required();
    taylor->add_option("--order", c.order);
    taylor->add_option("--tol", c.tol, "reality tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        apply_thread_env();
        if (*slice_star) return run_slice_star(c);
        if (*star) return run_star(c);
        if (*counting) return run_counting(c);
        if (*lelong) return run_lelong(c);
        if (*grid) return run_grid(c);
        if (*jensen) return run_check_jensen(c);
        if (*subharmonic) return run_check_subharmonic(c);
        if (*harmonic_slice) return run_check_harmonic_slice(c);
        if (*detect) return run_detect_harmonic(c);
        if (*taylor) return run_product_taylor(c);
    } catch (const UsageError& e) {
        std::cerr << "starfn: " << e.message << '\n';
        return kExitUsage;
    } catch (const LibraryError& e) {
        std::cerr << "starfn: " << e.message << '\n';
        return kExitFailed;
    }
    return kExitUsage;
}
