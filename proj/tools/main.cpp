#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "hardyq.h"
#include "run_config.hpp"

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;
using hqcli::RunConfig;

namespace {

enum Exit { kPass = 0, kVerifyFailed = 1, kInvalidInput = 2, kSolverFailed = 3 };

struct Failure {
  hq_status status;
  std::string message;
};

int exit_code(hq_status s) {
  switch (s) {
    case HQ_OK:
      return kPass;
    case HQ_ERR_NO_CONVERGENCE:
    case HQ_ERR_STEP_UNDERFLOW:
    case HQ_ERR_SAME_CLASSIFICATION:
    case HQ_ERR_NO_GROUND_STATE:
    case HQ_ERR_OVERFLOW:
    case HQ_ERR_NO_VALID_DELTA:
    case HQ_ERR_INTERNAL:
      return kSolverFailed;
    default:
      return kInvalidInput;
  }
}

void check(hq_status s) {
  if (s != HQ_OK) throw Failure{s, hq_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Solution = std::unique_ptr<hq_solution, Deleter<hq_solution, hq_solution_free>>;
using Series = std::unique_ptr<hq_series, Deleter<hq_series, hq_series_free>>;
using Nonlin = std::unique_ptr<hq_nonlinearity, Deleter<hq_nonlinearity, hq_nonlinearity_free>>;

std::string take(char* s) {
  std::string out = s ? s : "";
  hq_string_free(s);
  return out;
}

ojson params_json(const hq_problem& q) {
  return {{"N", q.N}, {"p", q.p}, {"mu", q.mu}, {"m", q.m}};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{HQ_ERR_IO, "cannot write " + path.string()};
  out << text;
  if (!out) throw Failure{HQ_ERR_IO, "write failed for " + path.string()};
}

fs::path ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Failure{HQ_ERR_IO, "cannot create directory " + dir + ": " + ec.message()};
  return fs::path(dir);
}

Nonlin make_f(const RunConfig& cfg) {
  std::vector<double> a, e;
  for (const auto& t : cfg.f) {
    a.push_back(t.coefficient);
    e.push_back(t.exponent);
  }
  hq_nonlinearity* f = nullptr;
  check(hq_nonlinearity_create(a.data(), e.data(), a.size(), &f));
  return Nonlin(f);
}

// Shared problem flags; values given on the command line override the
// config file.
struct CommonFlags {
  std::string config;
  std::optional<double> N, p, mu, m;
  std::optional<std::string> f, out, stem;

  void attach(CLI::App* app, bool with_output) {
    app->add_option("--config,-c", config, "run configuration file")->check(CLI::ExistingFile);
    app->add_option("--N", N, "spatial dimension");
    app->add_option("--p", p, "p-Laplacian exponent");
    app->add_option("--mu", mu, "Hardy strength");
    app->add_option("--m", m, "mass coefficient");
    app->add_option("--f", f, "nonlinearity terms coef:exponent[,coef:exponent...]");
    if (with_output) {
      app->add_option("--out,-o", out, "output directory (default $HARDYQ_OUT or .)");
      app->add_option("--stem", stem, "output file stem");
    }
  }

  RunConfig resolve() const {
    RunConfig cfg = config.empty() ? RunConfig{} : hqcli::load_config(config);
    // The environment supplies the output root unless the config names one.
    if (const char* env = std::getenv("HARDYQ_OUT"); env && *env && cfg.out_dir == ".")
      cfg.out_dir = env;
    if (N) cfg.problem.N = *N;
    if (p) cfg.problem.p = *p;
    if (mu) cfg.problem.mu = *mu;
    if (m) cfg.problem.m = *m;
    if (f) cfg.f = hqcli::parse_terms(*f);
    if (out) cfg.out_dir = *out;
    if (stem) cfg.stem = *stem;
    return cfg;
  }
};

// ------------------------------------------------------------- commands

int cmd_exponents(const RunConfig& cfg) {
  check(hq_validate(&cfg.problem, 0));
  hq_exponents e;
  check(hq_solve_exponents(&cfg.problem, 0.0, &e));
  std::printf("gamma1  %.12g\ngamma2  %.12g\nmu_bar  %.12g\n", e.gamma1, e.gamma2, e.mu_bar);
  const ojson j = {{"params", params_json(cfg.problem)},
                   {"gamma1", e.gamma1},
                   {"gamma2", e.gamma2},
                   {"mu_bar", e.mu_bar}};
  std::cout << j.dump() << '\n';
  return kPass;
}

int cmd_coeffs(const RunConfig& cfg, bool write_files) {
  hq_series* raw = nullptr;
  check(hq_series_build(&cfg.problem, cfg.expansion_order, &raw));
  Series s(raw);
  hq_series_info info;
  check(hq_series_info_get(s.get(), &info));
  std::string csv = "i,c_i\n";
  ojson coeffs = ojson::array();
  for (int i = 0; i <= info.k; ++i) {
    double c = 0.0;
    check(hq_series_coeff(s.get(), i, &c));
    char line[64];
    std::snprintf(line, sizeof line, "%d,%.17g\n", i, c);
    csv += line;
    coeffs.push_back(c);
  }
  const ojson j = {{"params", params_json(cfg.problem)},
                   {"k", info.k},
                   {"phi_inf", info.phi_inf},
                   {"alpha0", info.alpha0},
                   {"hardy_coeff", info.hardy_coeff},
                   {"extrapolated", info.extrapolated != 0},
                   {"c", coeffs}};
  std::cout << csv;
  if (write_files) {
    const fs::path dir = ensure_dir(cfg.out_dir);
    write_text(dir / (cfg.stem + "_coeffs.csv"), csv);
    write_text(dir / (cfg.stem + "_coeffs.json"), j.dump(2) + "\n");
  }
  return kPass;
}

struct SolveResult {
  Solution origin, infinity;
  ojson summary;
};

SolveResult solve(const RunConfig& cfg) {
  hqcli::check_config(cfg);
  Nonlin f = make_f(cfg);
  SolveResult out;
  hq_ground_state_info gs;
  hq_solution* raw = nullptr;
  check(hq_shoot_ground_state(&cfg.problem, f.get(), &cfg.shoot, &gs, &raw));
  out.origin.reset(raw);
  out.summary = {{"params", params_json(cfg.problem)},
                 {"f", hqcli::format_terms(cfg.f)},
                 {"C_star", gs.C_star},
                 {"r_reliable", gs.r_reliable},
                 {"shots", gs.shots},
                 {"below", gs.below == HQ_CLASS_TURNUP ? "TYPE_TURNUP" : "TYPE_BLOWUP"},
                 {"monotone", gs.monotone != 0}};
  if (cfg.problem.m > 0.0) {
    hq_far_options far = cfg.far;
    far.r_switch = std::min(far.r_switch, gs.r_reliable);
    hq_far_info fi;
    check(hq_continue_to_infinity(out.origin.get(), &far, &fi, &raw));
    out.infinity.reset(raw);
    out.summary["far_field"] = {{"r_switch", fi.r_switch},
                                {"phi0", fi.phi0},
                                {"logu0", fi.logu0},
                                {"phi_mismatch", fi.phi_mismatch},
                                {"iterations", fi.iterations},
                                {"r_start", fi.r_start}};
  }
  return out;
}

ojson write_solution(const RunConfig& cfg, SolveResult& res) {
  const fs::path dir = ensure_dir(cfg.out_dir);
  const fs::path origin = dir / (cfg.stem + "_origin.csv");
  check(hq_solution_write_csv(res.origin.get(), origin.string().c_str()));
  ojson files = {{"origin", origin.filename().string()}};
  if (res.infinity) {
    const fs::path inf = dir / (cfg.stem + "_infinity.csv");
    check(hq_solution_write_csv(res.infinity.get(), inf.string().c_str()));
    files["infinity"] = inf.filename().string();
  }
  res.summary["files"] = files;
  write_text(dir / (cfg.stem + "_amplitude.json"), res.summary.dump(2) + "\n");
  return res.summary;
}

int cmd_solve(const RunConfig& cfg) {
  SolveResult res = solve(cfg);
  std::cout << write_solution(cfg, res).dump(2) << '\n';
  return kPass;
}

struct VerifyResult {
  ojson report;
  bool passed = false;
};

VerifyResult verify(const RunConfig& cfg, const hq_solution* origin,
                    const hq_solution* infinity) {
  char* json = nullptr;
  int passed = 0;
  check(hq_verify_bundle(origin, infinity, &cfg.verify, &json, &passed));
  return {ojson::parse(take(json)), passed != 0};
}

Solution load(const std::string& path) {
  hq_solution* raw = nullptr;
  check(hq_solution_read_csv(path.c_str(), &raw));
  return Solution(raw);
}

int cmd_verify(const RunConfig& cfg, std::string origin_path, std::string infinity_path) {
  const fs::path dir(cfg.out_dir);
  if (origin_path.empty()) origin_path = (dir / (cfg.stem + "_origin.csv")).string();
  if (infinity_path.empty()) {
    const fs::path guess = dir / (cfg.stem + "_infinity.csv");
    if (fs::exists(guess)) infinity_path = guess.string();
  }
  Solution origin = load(origin_path);
  Solution infinity = infinity_path.empty() ? nullptr : load(infinity_path);
  const VerifyResult v = verify(cfg, origin.get(), infinity.get());
  const std::string text = v.report.dump(2) + "\n";
  write_text(ensure_dir(cfg.out_dir) / (cfg.stem + "_verify.json"), text);
  std::cout << text;
  return v.passed ? kPass : kVerifyFailed;
}

struct BarrierFlags {
  std::string kind = "infinity";
  double delta = 0.3, eps = 0.0, gamma = -1.0;
  std::vector<double> radii;
  double r_lo = 1.0, r_hi = 10.0;
  int n = 10;
};

int cmd_barriers(const RunConfig& cfg, const BarrierFlags& b, bool write_files) {
  hq_barrier_def def{HQ_BARRIER_INFINITY, b.delta, b.eps, b.gamma};
  if (b.kind == "origin") {
    def.kind = HQ_BARRIER_ORIGIN;
  } else if (b.kind == "exponential") {
    def.kind = HQ_BARRIER_EXPONENTIAL;
  } else if (b.kind != "infinity") {
    throw Failure{HQ_ERR_INVALID_PARAMS, "unknown barrier kind '" + b.kind + "'"};
  }
  std::vector<double> radii = b.radii;
  if (radii.empty()) {
    if (!(b.r_lo > 0.0 && b.r_hi > b.r_lo && b.n >= 2))
      throw Failure{HQ_ERR_INVALID_PARAMS, "require 0 < r-lo < r-hi and n >= 2"};
    for (int i = 0; i < b.n; ++i)
      radii.push_back(b.r_lo * std::pow(b.r_hi / b.r_lo, double(i) / (b.n - 1)));
  }
  char* csv = nullptr;
  check(hq_barrier_table(&cfg.problem, &def, radii.data(), radii.size(), &csv));
  const std::string text = take(csv);
  std::cout << text;
  if (write_files)
    write_text(ensure_dir(cfg.out_dir) / (cfg.stem + "_barrier_" + b.kind + ".csv"), text);
  return kPass;
}

// One solve + verify; never throws, the outcome goes into the index.
ojson sweep_point(RunConfig cfg, const std::vector<std::pair<std::string, double>>& point,
                  const std::string& name, int& code) {
  ojson entry = {{"dir", name}};
  ojson values = ojson::object();
  try {
    for (const auto& [key, value] : point) {
      const auto dot = key.find('.');
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", value);
      hqcli::set_field(cfg, key.substr(0, dot), key.substr(dot + 1), buf);
      values[key] = value;
    }
    entry["values"] = values;
    cfg.out_dir = (fs::path(cfg.out_dir) / name).string();
    SolveResult res = solve(cfg);
    const ojson summary = write_solution(cfg, res);
    const VerifyResult v = verify(cfg, res.origin.get(), res.infinity.get());
    write_text(fs::path(cfg.out_dir) / (cfg.stem + "_verify.json"), v.report.dump(2) + "\n");
    entry["C_star"] = summary["C_star"];
    entry["all_passed"] = v.passed;
    entry["status"] = v.passed ? "pass" : "verification-failed";
    code = v.passed ? kPass : kVerifyFailed;
  } catch (const Failure& f) {
    entry["values"] = values;
    entry["status"] = hq_status_string(f.status);
    entry["error"] = f.message;
    code = exit_code(f.status);
  } catch (const hqcli::ConfigError& e) {
    entry["values"] = values;
    entry["status"] = "invalid-params";
    entry["error"] = e.what();
    code = kInvalidInput;
  }
  return entry;
}

int cmd_sweep(const RunConfig& cfg, unsigned jobs) {
  if (cfg.sweep.empty())
    throw hqcli::ConfigError("sweep needs a [sweep] section with section.key = v1, v2, ...");
  std::vector<std::vector<std::pair<std::string, double>>> points{{}};
  for (const auto& [key, values] : cfg.sweep) {
    std::vector<std::vector<std::pair<std::string, double>>> next;
    for (const auto& p : points)
      for (double v : values) {
        auto q = p;
        q.emplace_back(key, v);
        next.push_back(std::move(q));
      }
    points = std::move(next);
  }
  const fs::path root = ensure_dir(cfg.out_dir);
  std::vector<ojson> entries(points.size());
  std::vector<int> codes(points.size(), kPass);
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  for (std::size_t start = 0; start < points.size(); start += jobs) {
    std::vector<std::future<void>> batch;
    for (std::size_t i = start; i < std::min(points.size(), start + jobs); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "run_%04zu", i);
      batch.push_back(std::async(std::launch::async, [&, i, n = std::string(name)] {
        entries[i] = sweep_point(cfg, points[i], n, codes[i]);
      }));
    }
    for (auto& f : batch) f.get();
  }
  ojson index = {{"runs", entries}};
  int code = kPass;
  for (int c : codes) code = std::max(code, c);
  index["all_passed"] = code == kPass;
  write_text(root / "index.json", index.dump(2) + "\n");
  std::cout << index.dump(2) << '\n';
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radial ground states of the p-Laplacian with a Hardy potential"};
  app.require_subcommand(1);

  CommonFlags common_exp, common_coeffs, common_solve, common_verify, common_bar, common_sweep;
  auto* exp_cmd = app.add_subcommand("exponents", "roots gamma1 < gamma2 of Gamma_mu");
  common_exp.attach(exp_cmd, false);

  auto* coeffs_cmd = app.add_subcommand("coeffs", "expansion coefficients at infinity");
  common_coeffs.attach(coeffs_cmd, true);
  std::optional<int> order;
  coeffs_cmd->add_option("--k", order, "expansion order (default: k <= p < k+1)");

  auto* solve_cmd = app.add_subcommand("solve", "shoot the ground state and continue it");
  common_solve.attach(solve_cmd, true);

  auto* verify_cmd = app.add_subcommand("verify", "run the asymptotic checks on saved runs");
  common_verify.attach(verify_cmd, true);
  std::string origin_path, infinity_path;
  verify_cmd->add_option("--origin", origin_path, "origin-chart CSV")->check(CLI::ExistingFile);
  verify_cmd->add_option("--infinity", infinity_path, "infinity-chart CSV")
      ->check(CLI::ExistingFile);

  auto* bar_cmd = app.add_subcommand("barriers", "tabulate a barrier and its residual");
  common_bar.attach(bar_cmd, true);
  BarrierFlags bflags;
  bar_cmd->add_option("--kind", bflags.kind, "origin | exponential | infinity")
      ->check(CLI::IsMember({"origin", "exponential", "infinity"}));
  bar_cmd->add_option("--delta", bflags.delta, "delta");
  bar_cmd->add_option("--eps", bflags.eps, "epsilon (origin exponent or mass reduction)");
  bar_cmd->add_option("--gamma", bflags.gamma, "gamma of v_gamma");
  bar_cmd->add_option("--r", bflags.radii, "explicit radii")->delimiter(',');
  bar_cmd->add_option("--r-lo", bflags.r_lo, "smallest radius");
  bar_cmd->add_option("--r-hi", bflags.r_hi, "largest radius");
  bar_cmd->add_option("--n", bflags.n, "number of log-spaced radii");

  auto* sweep_cmd = app.add_subcommand("sweep", "solve and verify over a parameter grid");
  common_sweep.attach(sweep_cmd, true);
  unsigned jobs = 0;
  sweep_cmd->add_option("--jobs,-j", jobs, "parallel runs (0: hardware threads)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kPass : kInvalidInput;
  }

  try {
    if (*exp_cmd) return cmd_exponents(common_exp.resolve());
    if (*coeffs_cmd) {
      RunConfig cfg = common_coeffs.resolve();
      if (order) cfg.expansion_order = *order;
      return cmd_coeffs(cfg, common_coeffs.out || common_coeffs.stem);
    }
    if (*solve_cmd) return cmd_solve(common_solve.resolve());
    if (*verify_cmd) return cmd_verify(common_verify.resolve(), origin_path, infinity_path);
    if (*bar_cmd)
      return cmd_barriers(common_bar.resolve(), bflags, common_bar.out || common_bar.stem);
    if (*sweep_cmd) return cmd_sweep(common_sweep.resolve(), jobs);
  } catch (const Failure& f) {
    std::cerr << "error: " << hq_status_string(f.status) << ": " << f.message << '\n';
    return exit_code(f.status);
  } catch (const hqcli::ConfigError& e) {
    std::cerr << "error: invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSolverFailed;
  }
  return kInvalidInput;
}
