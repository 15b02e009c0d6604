#include "hardyq.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <sstream>
#include <string>

#include "hardyq/barriers.hpp"
#include "hardyq/error.hpp"
#include "hardyq/expansion.hpp"
#include "hardyq/exponents.hpp"
#include "hardyq/radial_ode.hpp"
#include "hardyq/solution_io.hpp"
#include "hardyq/verify.hpp"

struct hq_nonlinearity {
  hardyq::Nonlinearity f;
};

struct hq_series {
  hardyq::ExpansionSeries s;
};

struct hq_solution {
  hardyq::RadialSolution s;
};

namespace {

thread_local std::string g_last_error;

hq_status map_code(hardyq::ErrorCode c) {
  using hardyq::ErrorCode;
  switch (c) {
    case ErrorCode::InvalidParams: return HQ_ERR_INVALID_PARAMS;
    case ErrorCode::NoConvergence: return HQ_ERR_NO_CONVERGENCE;
    case ErrorCode::DomainError: return HQ_ERR_DOMAIN;
    case ErrorCode::StepUnderflow: return HQ_ERR_STEP_UNDERFLOW;
    case ErrorCode::SameClassification: return HQ_ERR_SAME_CLASSIFICATION;
    case ErrorCode::NoGroundState: return HQ_ERR_NO_GROUND_STATE;
    case ErrorCode::OutOfGrid: return HQ_ERR_OUT_OF_GRID;
    case ErrorCode::InsufficientStencil: return HQ_ERR_INSUFFICIENT_STENCIL;
    case ErrorCode::Pole: return HQ_ERR_POLE;
    case ErrorCode::DegenerateFit: return HQ_ERR_DEGENERATE_FIT;
    case ErrorCode::ZeroDenominator: return HQ_ERR_ZERO_DENOMINATOR;
    case ErrorCode::GridMismatch: return HQ_ERR_GRID_MISMATCH;
    case ErrorCode::SeriesMismatch: return HQ_ERR_SERIES_MISMATCH;
    case ErrorCode::NoValidDelta: return HQ_ERR_NO_VALID_DELTA;
    case ErrorCode::Overflow: return HQ_ERR_OVERFLOW;
    case ErrorCode::Io: return HQ_ERR_IO;
    case ErrorCode::Parse: return HQ_ERR_PARSE;
  }
  return HQ_ERR_INTERNAL;
}

template <class Fn>
hq_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return HQ_OK;
  } catch (const hardyq::Error& e) {
    g_last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
  } catch (const std::exception& e) {
    g_last_error = e.what();
  } catch (...) {
    g_last_error = "unknown exception";
  }
  return HQ_ERR_INTERNAL;
}

template <class... Ptrs>
bool any_null(const Ptrs*... ptrs) {
  return ((ptrs == nullptr) || ...);
}

hq_status null_argument() {
  g_last_error = "required pointer argument is NULL";
  return HQ_ERR_NULL_ARGUMENT;
}

hardyq::ProblemParams to_params(const hq_problem& p) { return {p.N, p.p, p.mu, p.m}; }

hardyq::Window to_window(hq_window w) { return {w.lo, w.hi}; }

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit(const std::string& json, bool ok, char** out_json, int* passed) {
  if (out_json) *out_json = dup_string(json);
  if (passed) *passed = ok ? 1 : 0;
}

hq_classification to_c(hardyq::Classification c) {
  switch (c) {
    case hardyq::Classification::BlowUp: return HQ_CLASS_BLOWUP;
    case hardyq::Classification::TurnUp: return HQ_CLASS_TURNUP;
    case hardyq::Classification::Undecided: break;
  }
  return HQ_CLASS_UNDECIDED;
}

}  // namespace

extern "C" {

const char* hq_status_string(hq_status status) {
  switch (status) {
    case HQ_OK: return "ok";
    case HQ_ERR_NULL_ARGUMENT: return "null-argument";
    case HQ_ERR_INTERNAL: return "internal";
    default: break;
  }
  for (int c = 0; c <= static_cast<int>(hardyq::ErrorCode::Parse); ++c) {
    const auto code = static_cast<hardyq::ErrorCode>(c);
    if (map_code(code) == status) return hardyq::to_string(code);
  }
  return "unknown";
}

const char* hq_last_error(void) { return g_last_error.c_str(); }

void hq_string_free(char* s) { std::free(s); }

hq_status hq_validate(const hq_problem* problem, int positive_mass) {
  if (any_null(problem)) return null_argument();
  return guarded([&] {
    if (positive_mass)
      hardyq::validate_with_positive_mass(to_params(*problem));
    else
      hardyq::validate(to_params(*problem));
  });
}

hq_status hq_mu_bar(const hq_problem* problem, double* out) {
  if (any_null(problem, out)) return null_argument();
  return guarded([&] { *out = hardyq::mu_bar(to_params(*problem)); });
}

hq_status hq_gamma_mu(const hq_problem* problem, double gamma, double* out) {
  if (any_null(problem, out)) return null_argument();
  return guarded([&] { *out = hardyq::gamma_mu(gamma, to_params(*problem)); });
}

hq_status hq_solve_exponents(const hq_problem* problem, double tol, hq_exponents* out) {
  if (any_null(problem, out)) return null_argument();
  return guarded([&] {
    const auto e = hardyq::solve_exponents(to_params(*problem),
                                           tol > 0.0 ? tol : hardyq::kDefaultExponentTol);
    *out = {e.gamma1, e.gamma2, e.mu_bar};
  });
}

hq_status hq_nonlinearity_create(const double* coefficients, const double* exponents,
                                 size_t n, hq_nonlinearity** out) {
  if (any_null(out) || (n > 0 && any_null(coefficients, exponents))) return null_argument();
  return guarded([&] {
    std::vector<hardyq::PowerTerm> terms;
    for (size_t i = 0; i < n; ++i) terms.push_back({coefficients[i], exponents[i]});
    *out = new hq_nonlinearity{hardyq::Nonlinearity(std::move(terms))};
  });
}

void hq_nonlinearity_free(hq_nonlinearity* f) { delete f; }

hq_status hq_f_taylor_deriv(int n, double c0, double p, double* out) {
  if (any_null(out)) return null_argument();
  return guarded([&] { *out = hardyq::f_taylor_deriv(n, c0, p); });
}

hq_status hq_series_build(const hq_problem* problem, int k, hq_series** out) {
  if (any_null(problem, out)) return null_argument();
  return guarded([&] {
    std::optional<int> order;
    if (k >= 0) order = k;
    *out = new hq_series{hardyq::build_series(to_params(*problem), order)};
  });
}

void hq_series_free(hq_series* s) { delete s; }

hq_status hq_series_info_get(const hq_series* s, hq_series_info* out) {
  if (any_null(s, out)) return null_argument();
  *out = {s->s.k, s->s.hardy_coeff, s->s.alpha0, s->s.phi_inf, s->s.extrapolated ? 1 : 0};
  g_last_error.clear();
  return HQ_OK;
}

hq_status hq_series_coeff(const hq_series* s, int i, double* out) {
  if (any_null(s, out)) return null_argument();
  return guarded([&] {
    if (i < 0 || i > s->s.k)
      throw hardyq::Error(hardyq::ErrorCode::InvalidParams, "coefficient index out of range");
    *out = s->s.c[static_cast<size_t>(i)];
  });
}

hq_status hq_series_eval(const hq_series* s, double r, double* out) {
  if (any_null(s, out)) return null_argument();
  return guarded([&] { *out = hardyq::eval_series(s->s, r); });
}

hq_status hq_series_log_derivative(const hq_series* s, double r, double* out) {
  if (any_null(s, out)) return null_argument();
  return guarded([&] { *out = hardyq::log_derivative_prediction(s->s, r); });
}

void hq_shoot_options_default(hq_shoot_options* out) {
  if (!out) return;
  const hardyq::ShootingOptions d;
  *out = {d.C_lo, d.C_hi, d.r0, d.r_max, d.tol, d.tol_C, d.caps.w_max, d.max_bisections,
          d.separation_tol};
}

void hq_far_options_default(hq_far_options* out) {
  if (!out) return;
  const hardyq::FarFieldOptions d;
  *out = {d.r_switch, d.r_end, d.tol, d.burn_in, d.max_iterations, d.match_tol};
}

hq_status hq_integrate(hq_chart chart, const hq_problem* problem, const hq_nonlinearity* f,
                       double r0, double v0, double logu0, double r_end, double tol,
                       hq_solution** out) {
  if (any_null(problem, f, out)) return null_argument();
  return guarded([&] {
    const auto c =
        chart == HQ_CHART_ORIGIN_W ? hardyq::Chart::OriginW : hardyq::Chart::InfinityPhi;
    *out = new hq_solution{hardyq::integrate(c, {r0, v0, logu0}, r_end, tol, hardyq::Caps{},
                                             to_params(*problem), f->f)};
  });
}

hq_status hq_shoot_ground_state(const hq_problem* problem, const hq_nonlinearity* f,
                                const hq_shoot_options* options, hq_ground_state_info* info,
                                hq_solution** out) {
  if (any_null(problem, f, options, out)) return null_argument();
  return guarded([&] {
    hardyq::ShootingOptions o;
    o.C_lo = options->C_lo;
    o.C_hi = options->C_hi;
    o.r0 = options->r0;
    o.r_max = options->r_max;
    o.tol = options->tol;
    o.tol_C = options->tol_C;
    o.caps.w_max = options->w_max;
    o.max_bisections = options->max_bisections;
    o.separation_tol = options->separation_tol;
    hardyq::GroundState gs = hardyq::shoot_ground_state(to_params(*problem), f->f, o);
    if (info) {
      info->C_star = gs.C_star;
      info->r_reliable = gs.r_reliable;
      info->shots = static_cast<int>(gs.history.size());
      info->below = to_c(gs.below);
      info->monotone = hardyq::shooting_monotone(gs.history) ? 1 : 0;
    }
    *out = new hq_solution{std::move(gs.solution)};
  });
}

hq_status hq_handoff(const hq_solution* origin, double r_switch, double* phi0, double* logu0) {
  if (any_null(origin)) return null_argument();
  return guarded([&] {
    const auto h = hardyq::handoff(origin->s, r_switch);
    if (phi0) *phi0 = h.phi0;
    if (logu0) *logu0 = h.logu0;
  });
}

hq_status hq_continue_to_infinity(const hq_solution* origin, const hq_far_options* options,
                                  hq_far_info* info, hq_solution** out) {
  if (any_null(origin, options, out)) return null_argument();
  return guarded([&] {
    hardyq::FarFieldOptions o;
    o.r_switch = options->r_switch;
    o.r_end = options->r_end;
    o.tol = options->tol;
    o.burn_in = options->burn_in;
    o.max_iterations = options->max_iterations;
    o.match_tol = options->match_tol;
    hardyq::FarFieldMatch m = hardyq::continue_to_infinity(origin->s, o);
    if (info) {
      *info = {m.handoff.r0, m.handoff.phi0, m.handoff.logu0, m.phi_mismatch, m.iterations,
               m.r_start};
    }
    *out = new hq_solution{std::move(m.solution)};
  });
}

void hq_solution_free(hq_solution* s) { delete s; }

size_t hq_solution_size(const hq_solution* s) { return s ? s->s.size() : 0; }

hq_chart hq_solution_chart(const hq_solution* s) {
  return s && s->s.chart == hardyq::Chart::InfinityPhi ? HQ_CHART_INFINITY_PHI
                                                       : HQ_CHART_ORIGIN_W;
}

double hq_solution_amplitude(const hq_solution* s) { return s ? s->s.amplitude : 0.0; }

int hq_solution_stop(const hq_solution* s) { return s ? static_cast<int>(s->s.stop) : -1; }

hq_status hq_solution_data(const hq_solution* s, const double** r, const double** logu,
                           const double** v) {
  if (any_null(s)) return null_argument();
  if (r) *r = s->s.r.data();
  if (logu) *logu = s->s.logu.data();
  if (v) *v = s->s.v.data();
  g_last_error.clear();
  return HQ_OK;
}

hq_status hq_solution_sample(const hq_solution* s, double r, double* logu, double* v) {
  if (any_null(s)) return null_argument();
  return guarded([&] {
    const auto pt = hardyq::sample(s->s, r);
    if (logu) *logu = pt.logu;
    if (v) *v = pt.v;
  });
}

hq_status hq_solution_write_csv(const hq_solution* s, const char* path) {
  if (any_null(s, path)) return null_argument();
  return guarded([&] { hardyq::write_solution_csv(std::string(path), s->s); });
}

hq_status hq_solution_read_csv(const char* path, hq_solution** out) {
  if (any_null(path, out)) return null_argument();
  return guarded([&] { *out = new hq_solution{hardyq::read_solution_csv(std::string(path))}; });
}

hq_status hq_origin_limit(const hq_solution* s, double gamma1, hq_window w, double threshold,
                          char** json, int* passed) {
  if (any_null(s)) return null_argument();
  return guarded([&] {
    const auto rep = hardyq::origin_limit(s->s, gamma1, to_window(w), threshold);
    emit(hardyq::to_json(rep), rep.passed, json, passed);
  });
}

hq_status hq_infinity_limit(const hq_solution* s, hq_window w, double threshold, char** json,
                            int* passed) {
  if (any_null(s)) return null_argument();
  return guarded([&] {
    const auto rep = hardyq::infinity_limit(s->s, to_window(w), threshold);
    emit(hardyq::to_json(rep), rep.passed, json, passed);
  });
}

hq_status hq_rate_fit(const hq_solution* s, hq_rate_quantity quantity, hq_window w,
                      double tolerance, char** json, int* passed) {
  if (any_null(s)) return null_argument();
  return guarded([&] {
    const auto q = quantity == HQ_RATE_PHI1 ? hardyq::RateQuantity::Phi1
                                            : hardyq::RateQuantity::WMinusLimit;
    const auto rep = hardyq::rate_fit(s->s, q, to_window(w), tolerance);
    emit(hardyq::to_json(rep), rep.passed, json, passed);
  });
}

hq_status hq_expansion_check(const hq_solution* s, const hq_series* series, hq_window w,
                             double tolerance, int include_hardy, char** json, int* passed) {
  if (any_null(s, series)) return null_argument();
  return guarded([&] {
    const auto rep =
        hardyq::expansion_check(s->s, series->s, to_window(w), tolerance, include_hardy != 0);
    emit(hardyq::to_json(rep), rep.passed, json, passed);
  });
}

hq_status hq_bounds_check(const hq_solution* origin, const hq_solution* infinity,
                          hq_window origin_window, hq_window infinity_window, char** json,
                          int* passed) {
  if (any_null(origin, infinity)) return null_argument();
  return guarded([&] {
    const auto exps = hardyq::solve_exponents(origin->s.params);
    const auto rep = hardyq::bounds_check(origin->s, infinity->s, exps,
                                          to_window(origin_window), to_window(infinity_window));
    emit(hardyq::to_json(rep), rep.passed, json, passed);
  });
}

hq_status hq_comparison_check(const double* r, const double* u, const double* v, size_t n,
                              hq_window annulus, double tol, int* result) {
  if (any_null(r, u, v, result)) return null_argument();
  return guarded([&] {
    *result = hardyq::comparison_check({r, n}, {u, n}, {v, n}, to_window(annulus), tol) ? 1 : 0;
  });
}

hq_status hq_hardy_ratio(const hq_problem* problem, hq_radial_fn phi, hq_radial_fn dphi,
                         void* context, const double* breakpoints, size_t n_breakpoints,
                         int panels, double* out) {
  if (any_null(problem, breakpoints, out) || !phi || !dphi) return null_argument();
  return guarded([&] {
    *out = hardyq::hardy_ratio(
        to_params(*problem), [&](double r) { return phi(r, context); },
        [&](double r) { return dphi(r, context); },
        std::vector<double>(breakpoints, breakpoints + n_breakpoints), panels);
  });
}

void hq_verify_config_default(hq_verify_config* out) {
  if (!out) return;
  const hardyq::VerifyConfig d;
  *out = {{d.origin_window.lo, d.origin_window.hi},
          {d.infinity_window.lo, d.infinity_window.hi},
          -1,
          d.comparison_delta,
          d.threshold,
          d.fit_tolerance};
}

hq_status hq_verify_bundle(const hq_solution* origin, const hq_solution* infinity,
                           const hq_verify_config* config, char** json, int* all_passed) {
  if (any_null(origin, config)) return null_argument();
  return guarded([&] {
    hardyq::VerifyConfig c;
    c.origin_window = to_window(config->origin_window);
    c.infinity_window = to_window(config->infinity_window);
    if (config->expansion_order >= 0) c.expansion_order = config->expansion_order;
    c.comparison_delta = config->comparison_delta;
    c.threshold = config->threshold;
    c.fit_tolerance = config->fit_tolerance;
    const auto b = hardyq::verify_bundle(origin->s, infinity ? &infinity->s : nullptr, c);
    emit(b.json, b.all_passed, json, all_passed);
  });
}

hq_status hq_barrier_table(const hq_problem* problem, const hq_barrier_def* def,
                           const double* radii, size_t n, char** csv) {
  if (any_null(problem, def, csv) || (n > 0 && !radii)) return null_argument();
  return guarded([&] {
    hardyq::BarrierDef s;
    s.kind = def->kind == HQ_BARRIER_ORIGIN        ? hardyq::BarrierKind::Origin
             : def->kind == HQ_BARRIER_EXPONENTIAL ? hardyq::BarrierKind::Exponential
                                                    : hardyq::BarrierKind::Infinity;
    s.delta = def->delta;
    s.eps = def->eps;
    s.gamma = def->gamma;
    const auto rows = hardyq::barrier_table(to_params(*problem), s, {radii, n});
    std::ostringstream os;
    os.precision(17);
    os << "r,value,source,residual\n";
    for (const auto& row : rows)
      os << row.r << ',' << row.value << ',' << row.source << ',' << row.residual << '\n';
    *csv = dup_string(os.str());
  });
}

hq_status hq_choose_origin_params(const hq_problem* problem, double eps,
                                  hq_origin_params* out) {
  if (any_null(problem, out)) return null_argument();
  return guarded([&] {
    std::optional<double> e;
    if (eps > 0.0) e = eps;
    const auto c = hardyq::choose_origin_params(to_params(*problem), {}, e);
    *out = {c.delta_h, c.eps, c.r2, c.h_prime0};
  });
}

hq_status hq_barrier_radius(const hq_problem* problem, double gamma, double delta, int sign,
                            double r_lo, double r_hi, double* out) {
  if (any_null(problem, out)) return null_argument();
  return guarded([&] {
    const auto q = to_params(*problem);
    const auto b = hardyq::make_infinity_barrier(q, gamma, delta);
    *out = hardyq::barrier_radius(
        b, q, sign == 0 ? hardyq::QSign::NonPositive : hardyq::QSign::AboveHardy, r_lo, r_hi);
  });
}

}  // extern "C"
