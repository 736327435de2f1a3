/* C interface to the starfn library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every call returning starfn_status leaves a message for the calling thread
 * in starfn_last_error() when it fails. Strings returned through char** are
 * allocated by the library and released with starfn_string_free. */
#ifndef STARFN_H
#define STARFN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define STARFN_API __declspec(dllexport)
#else
#define STARFN_API __attribute__((visibility("default")))
#endif

typedef enum starfn_status {
    STARFN_OK = 0,
    STARFN_ERR_PARSE = 1,
    STARFN_ERR_DOMAIN = 2,
    STARFN_ERR_CONVERGENCE = 3,
    STARFN_ERR_IO = 4,
    STARFN_ERR_ARGUMENT = 5,
    STARFN_ERR_INTERNAL = 6
} starfn_status;

typedef enum starfn_target { STARFN_ZEROS = 0, STARFN_POLES = 1 } starfn_target;

typedef enum starfn_format { STARFN_CSV = 0, STARFN_JSON = 1 } starfn_format;

typedef struct starfn_complex {
    double re;
    double im;
} starfn_complex;

typedef struct starfn_estimate {
    double mean;
    double std_error;
    size_t count_used;
    size_t skipped;
} starfn_estimate;

typedef struct starfn_star_value {
    double r;
    double theta;
    double fstar;
    double big_n_inf;
    double total;
} starfn_star_value;

typedef struct starfn_grid_spec {
    double r_min;
    double r_max;
    size_t nr;
    double theta_min;
    double theta_max;
    size_t ntheta;
} starfn_grid_spec;

typedef struct starfn_function starfn_function;
typedef struct starfn_sample starfn_sample;
typedef struct starfn_grid starfn_grid;

STARFN_API const char* starfn_last_error(void);
STARFN_API void starfn_string_free(char* s);
STARFN_API const char* starfn_version(void);

/* Worker threads used for sphere sampling (0 = hardware concurrency).
 * Results do not depend on this setting. */
STARFN_API void starfn_set_threads(unsigned threads);
STARFN_API unsigned starfn_get_threads(void);

/* Default grid: r in [0.5, 2] and theta in [0, pi], 10 x 10. */
STARFN_API starfn_grid_spec starfn_default_grid_spec(void);

/* A constant in the expression grammar, e.g. "0.6", "-1e-3", "0.3+0.4*i". */
STARFN_API starfn_status starfn_parse_constant(const char* text, starfn_complex* out);

STARFN_API starfn_status starfn_function_parse(const char* text, size_t n, starfn_function** out);
STARFN_API starfn_status starfn_function_from_json(const char* json_text, starfn_function** out);
STARFN_API starfn_status starfn_function_load(const char* path, starfn_function** out);
/* F(UZ) for an n x n matrix given row-major. */
STARFN_API starfn_status starfn_function_compose(const starfn_function* f, const starfn_complex* matrix,
                                                 starfn_function** out);
STARFN_API void starfn_function_free(starfn_function* f);
STARFN_API size_t starfn_function_dimension(const starfn_function* f);
STARFN_API starfn_status starfn_function_to_string(const starfn_function* f, char** out);
STARFN_API starfn_status starfn_function_to_json(const starfn_function* f, char** out);

/* Directions below are given as n components and scaled to unit length. */
STARFN_API starfn_status starfn_slice_star(const starfn_function* f, const starfn_complex* zeta, double r,
                                           double theta, int circle_samples, starfn_star_value* out);
STARFN_API starfn_status starfn_slice_counting(const starfn_function* f, const starfn_complex* zeta, double r,
                                               starfn_target a, int* small_n, double* big_n);
STARFN_API starfn_status starfn_slice_indeterminacy(const starfn_function* f, const starfn_complex* zeta,
                                                    double tol, int* flag, double* separation);
/* Fails with STARFN_ERR_DOMAIN when a zero or pole is within 1e-3 r of the circle. */
STARFN_API starfn_status starfn_jensen_residual(const starfn_function* f, const starfn_complex* zeta, double r,
                                                int circle_samples, double* out);

STARFN_API starfn_status starfn_sample_create(size_t n, size_t count, uint64_t seed, starfn_sample** out);
STARFN_API void starfn_sample_free(starfn_sample* s);
STARFN_API size_t starfn_sample_count(const starfn_sample* s);
STARFN_API starfn_status starfn_sample_direction(const starfn_sample* s, size_t index, starfn_complex* out);

STARFN_API starfn_status starfn_star_several(const starfn_function* f, const starfn_sample* s, double r,
                                             double theta, int circle_samples, starfn_estimate* out);
STARFN_API starfn_status starfn_counting_several(const starfn_function* f, const starfn_sample* s, double r,
                                                 starfn_target a, starfn_estimate* out);
STARFN_API starfn_status starfn_lelong_number(const starfn_function* f, const starfn_sample* s, double t,
                                              starfn_target a, starfn_estimate* out);

STARFN_API starfn_status starfn_star_grid(const starfn_function* f, const starfn_grid_spec* spec,
                                          const starfn_sample* s, int circle_samples, starfn_grid** out);
STARFN_API starfn_status starfn_grid_from_json(const char* json_text, starfn_grid** out);
STARFN_API void starfn_grid_free(starfn_grid* g);
STARFN_API void starfn_grid_shape(const starfn_grid* g, size_t* nr, size_t* ntheta);
STARFN_API starfn_status starfn_grid_cell(const starfn_grid* g, size_t i, size_t j, double* r, double* theta,
                                          starfn_estimate* out);
STARFN_API int starfn_grid_equal(const starfn_grid* a, const starfn_grid* b);
STARFN_API starfn_status starfn_grid_to_string(const starfn_grid* g, starfn_format format, char** out);
STARFN_API starfn_status starfn_grid_export(const starfn_grid* g, const char* path, starfn_format format);

/* Mean-value test of the sphere star function at interior grid points.
 * rho <= 0 selects half the grid spacing. The report is JSON. */
STARFN_API starfn_status starfn_subharmonicity(const starfn_function* f, const starfn_grid_spec* spec,
                                               const starfn_sample* s, int circle_samples, double rho, int nodes,
                                               double tol_quad, size_t* violations, char** report_json);

/* Mean-value equality of the slice star function; harmonic is set to 1 when
 * every interior defect is at most tol. */
STARFN_API starfn_status starfn_slice_harmonicity(const starfn_function* f, const starfn_complex* zeta,
                                                  const starfn_grid_spec* spec, int circle_samples, double tol,
                                                  double rho, int nodes, int* harmonic, char** report_json);

/* order < 0 selects deg G + deg H. When a form is detected and
 * verify_trials > 0, the report includes the largest relative mismatch of
 * F(Z) and P(Z . eta) over that many random points. */
STARFN_API starfn_status starfn_detect_harmonic(const starfn_function* f, double tol, int order, double tol_angle,
                                                int verify_trials, uint64_t seed, int* detected,
                                                char** report_json);

/* Taylor data of a canonical product given as
 * {"gamma": g, "theta": t, "zeros": [...], "poles": [...]}. */
STARFN_API starfn_status starfn_product_taylor(const char* product_json, int order, double* reality_defect,
                                               char** report_json);

#ifdef __cplusplus
}
#endif

#endif
