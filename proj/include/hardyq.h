#ifndef HARDYQ_H
#define HARDYQ_H

#include <stddef.h>

#if defined(_WIN32)
#if defined(HARDYQ_BUILDING)
#define HQ_API __declspec(dllexport)
#else
#define HQ_API __declspec(dllimport)
#endif
#else
#define HQ_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hq_status {
  HQ_OK = 0,
  HQ_ERR_INVALID_PARAMS,
  HQ_ERR_NO_CONVERGENCE,
  HQ_ERR_DOMAIN,
  HQ_ERR_STEP_UNDERFLOW,
  HQ_ERR_SAME_CLASSIFICATION,
  HQ_ERR_NO_GROUND_STATE,
  HQ_ERR_OUT_OF_GRID,
  HQ_ERR_INSUFFICIENT_STENCIL,
  HQ_ERR_POLE,
  HQ_ERR_DEGENERATE_FIT,
  HQ_ERR_ZERO_DENOMINATOR,
  HQ_ERR_GRID_MISMATCH,
  HQ_ERR_SERIES_MISMATCH,
  HQ_ERR_NO_VALID_DELTA,
  HQ_ERR_OVERFLOW,
  HQ_ERR_IO,
  HQ_ERR_PARSE,
  HQ_ERR_NULL_ARGUMENT,
  HQ_ERR_INTERNAL
} hq_status;

HQ_API const char* hq_status_string(hq_status status);
/* Message of the last failing call on this thread; "" after success. */
HQ_API const char* hq_last_error(void);
/* Frees strings returned through char** out-parameters. */
HQ_API void hq_string_free(char* s);

typedef struct hq_problem {
  double N;
  double p;
  double mu;
  double m;
} hq_problem;

typedef struct hq_exponents {
  double gamma1;
  double gamma2;
  double mu_bar;
} hq_exponents;

HQ_API hq_status hq_validate(const hq_problem* problem, int positive_mass);
HQ_API hq_status hq_mu_bar(const hq_problem* problem, double* out);
HQ_API hq_status hq_gamma_mu(const hq_problem* problem, double gamma, double* out);
/* tol <= 0 selects the default 1e-12. */
HQ_API hq_status hq_solve_exponents(const hq_problem* problem, double tol,
                                    hq_exponents* out);

/* ---------------------------------------------------------- nonlinearity */

/* f(u) = sum_j coefficients[j] |u|^{exponents[j]-2} u */
typedef struct hq_nonlinearity hq_nonlinearity;

HQ_API hq_status hq_nonlinearity_create(const double* coefficients, const double* exponents,
                                        size_t n, hq_nonlinearity** out);
HQ_API void hq_nonlinearity_free(hq_nonlinearity* f);

/* ------------------------------------------------------------- expansion */

typedef struct hq_series hq_series;

typedef struct hq_series_info {
  int k;
  double hardy_coeff;
  double alpha0;
  double phi_inf;
  int extrapolated;
} hq_series_info;

HQ_API hq_status hq_f_taylor_deriv(int n, double c0, double p, double* out);
/* k < 0 selects the integer with k <= p < k+1. */
HQ_API hq_status hq_series_build(const hq_problem* problem, int k, hq_series** out);
HQ_API void hq_series_free(hq_series* s);
HQ_API hq_status hq_series_info_get(const hq_series* s, hq_series_info* out);
HQ_API hq_status hq_series_coeff(const hq_series* s, int i, double* out);
HQ_API hq_status hq_series_eval(const hq_series* s, double r, double* out);
HQ_API hq_status hq_series_log_derivative(const hq_series* s, double r, double* out);

/* ------------------------------------------------------------- radial ODE */

typedef enum hq_chart { HQ_CHART_ORIGIN_W = 0, HQ_CHART_INFINITY_PHI = 1 } hq_chart;

typedef enum hq_classification {
  HQ_CLASS_BLOWUP = 0,
  HQ_CLASS_TURNUP = 1,
  HQ_CLASS_UNDECIDED = 2
} hq_classification;

typedef struct hq_solution hq_solution;

typedef struct hq_shoot_options {
  double C_lo;
  double C_hi;
  double r0;
  double r_max;
  double tol;
  double tol_C;
  double w_max; /* <= 0: default cap */
  int max_bisections;
  double separation_tol;
} hq_shoot_options;

typedef struct hq_ground_state_info {
  double C_star;
  double r_reliable;
  int shots;
  hq_classification below;
  int monotone;
} hq_ground_state_info;

typedef struct hq_far_options {
  double r_switch;
  double r_end;
  double tol;
  double burn_in; /* <= 0: 30/alpha0 */
  int max_iterations;
  double match_tol;
} hq_far_options;

typedef struct hq_far_info {
  double r_switch;
  double phi0;
  double logu0;
  double phi_mismatch;
  int iterations;
  double r_start;
} hq_far_info;

HQ_API void hq_shoot_options_default(hq_shoot_options* out);
HQ_API void hq_far_options_default(hq_far_options* out);

/* Integrates one chart with default caps; stop reason via hq_solution_stop. */
HQ_API hq_status hq_integrate(hq_chart chart, const hq_problem* problem,
                              const hq_nonlinearity* f, double r0, double v0,
                              double logu0, double r_end, double tol, hq_solution** out);
/* info may be NULL. */
HQ_API hq_status hq_shoot_ground_state(const hq_problem* problem, const hq_nonlinearity* f,
                                       const hq_shoot_options* options,
                                       hq_ground_state_info* info, hq_solution** out);
HQ_API hq_status hq_handoff(const hq_solution* origin, double r_switch, double* phi0,
                            double* logu0);
HQ_API hq_status hq_continue_to_infinity(const hq_solution* origin,
                                         const hq_far_options* options, hq_far_info* info,
                                         hq_solution** out);

HQ_API void hq_solution_free(hq_solution* s);
HQ_API size_t hq_solution_size(const hq_solution* s);
HQ_API hq_chart hq_solution_chart(const hq_solution* s);
HQ_API double hq_solution_amplitude(const hq_solution* s);
/* 0 reached end, 1 blow-up, 2 turn-up, 3 overflow */
HQ_API int hq_solution_stop(const hq_solution* s);
/* Borrowed pointers, valid until the solution is freed. Any may be NULL. */
HQ_API hq_status hq_solution_data(const hq_solution* s, const double** r,
                                  const double** logu, const double** v);
HQ_API hq_status hq_solution_sample(const hq_solution* s, double r, double* logu, double* v);
HQ_API hq_status hq_solution_write_csv(const hq_solution* s, const char* path);
HQ_API hq_status hq_solution_read_csv(const char* path, hq_solution** out);

/* ---------------------------------------------------------------- verify */

typedef struct hq_window {
  double lo;
  double hi;
} hq_window;

typedef enum hq_rate_quantity { HQ_RATE_W_MINUS_LIMIT = 0, HQ_RATE_PHI1 = 1 } hq_rate_quantity;

/* Each check writes a JSON report to *json (free with hq_string_free) and
   its verdict to *passed. Either output may be NULL. */
HQ_API hq_status hq_origin_limit(const hq_solution* s, double gamma1, hq_window w,
                                 double threshold, char** json, int* passed);
HQ_API hq_status hq_infinity_limit(const hq_solution* s, hq_window w, double threshold,
                                   char** json, int* passed);
HQ_API hq_status hq_rate_fit(const hq_solution* s, hq_rate_quantity quantity, hq_window w,
                             double tolerance, char** json, int* passed);
HQ_API hq_status hq_expansion_check(const hq_solution* s, const hq_series* series,
                                    hq_window w, double tolerance, int include_hardy,
                                    char** json, int* passed);
HQ_API hq_status hq_bounds_check(const hq_solution* origin, const hq_solution* infinity,
                                 hq_window origin_window, hq_window infinity_window,
                                 char** json, int* passed);
HQ_API hq_status hq_comparison_check(const double* r, const double* u, const double* v,
                                     size_t n, hq_window annulus, double tol, int* result);

typedef double (*hq_radial_fn)(double r, void* context);

HQ_API hq_status hq_hardy_ratio(const hq_problem* problem, hq_radial_fn phi,
                                hq_radial_fn dphi, void* context, const double* breakpoints,
                                size_t n_breakpoints, int panels, double* out);

typedef struct hq_verify_config {
  hq_window origin_window;
  hq_window infinity_window;
  int expansion_order; /* < 0: default */
  double comparison_delta;
  double threshold;
  double fit_tolerance;
} hq_verify_config;

HQ_API void hq_verify_config_default(hq_verify_config* out);
/* infinity may be NULL. */
HQ_API hq_status hq_verify_bundle(const hq_solution* origin, const hq_solution* infinity,
                                  const hq_verify_config* config, char** json,
                                  int* all_passed);

/* -------------------------------------------------------------- barriers */

typedef enum hq_barrier_kind {
  HQ_BARRIER_ORIGIN = 0,
  HQ_BARRIER_EXPONENTIAL = 1,
  HQ_BARRIER_INFINITY = 2
} hq_barrier_kind;

typedef struct hq_barrier_def {
  hq_barrier_kind kind;
  double delta;
  double eps;
  double gamma;
} hq_barrier_def;

typedef struct hq_origin_params {
  double delta_h;
  double eps;
  double r2;
  double h_prime0;
} hq_origin_params;

/* CSV with header r,value,source,residual. */
HQ_API hq_status hq_barrier_table(const hq_problem* problem, const hq_barrier_def* def,
                                  const double* radii, size_t n, char** csv);
/* eps <= 0 selects p/2. */
HQ_API hq_status hq_choose_origin_params(const hq_problem* problem, double eps,
                                         hq_origin_params* out);
/* sign 0: Q <= 0, sign 1: Q >= 2 mu / r^p */
HQ_API hq_status hq_barrier_radius(const hq_problem* problem, double gamma, double delta,
                                   int sign, double r_lo, double r_hi, double* out);

#ifdef __cplusplus
}
#endif

#endif
