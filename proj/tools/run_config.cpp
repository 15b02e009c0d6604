#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace hqcli {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(std::string_view s, const std::string& what) {
  s = trim(s);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw ConfigError(what + ": not a number: '" + std::string(s) + "'");
  return v;
}

int to_int(std::string_view s, const std::string& what) {
  const double v = to_double(s, what);
  if (v != std::floor(v) || std::abs(v) > 1e9)
    throw ConfigError(what + ": not an integer: '" + std::string(trim(s)) + "'");
  return static_cast<int>(v);
}

std::vector<double> to_list(std::string_view s, const std::string& what) {
  std::vector<double> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    out.push_back(to_double(s.substr(0, comma), what));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  if (out.empty()) throw ConfigError(what + ": empty list");
  return out;
}

}  // namespace

RunConfig::RunConfig() {
  hq_shoot_options_default(&shoot);
  hq_far_options_default(&far);
  hq_verify_config_default(&verify);
}

std::vector<PowerTerm> parse_terms(std::string_view text) {
  std::vector<PowerTerm> out;
  text = trim(text);
  if (text.empty() || text == "0") return out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const auto item = trim(text.substr(0, comma));
    const auto colon = item.find(':');
    if (colon == std::string_view::npos)
      throw ConfigError("f: expected coefficient:exponent, got '" + std::string(item) + "'");
    out.push_back({to_double(item.substr(0, colon), "f coefficient"),
                   to_double(item.substr(colon + 1), "f exponent")});
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::string format_terms(const std::vector<PowerTerm>& terms) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t i = 0; i < terms.size(); ++i)
    os << (i ? "," : "") << terms[i].coefficient << ':' << terms[i].exponent;
  return os.str();
}

void set_field(RunConfig& c, const std::string& section, const std::string& key,
               const std::string& value) {
  const std::string name = section + "." + key;
  const auto num = [&] { return to_double(value, name); };
  const auto whole = [&] { return to_int(value, name); };

  if (section == "problem") {
    if (key == "N") return void(c.problem.N = num());
    if (key == "p") return void(c.problem.p = num());
    if (key == "mu") return void(c.problem.mu = num());
    if (key == "m") return void(c.problem.m = num());
    if (key == "f") return void(c.f = parse_terms(value));
  } else if (section == "solver") {
    if (key == "C_lo") return void(c.shoot.C_lo = num());
    if (key == "C_hi") return void(c.shoot.C_hi = num());
    if (key == "r0") return void(c.shoot.r0 = num());
    if (key == "r_max") return void(c.shoot.r_max = num());
    if (key == "tol") return void(c.shoot.tol = c.far.tol = num());
    if (key == "tol_C") return void(c.shoot.tol_C = num());
    if (key == "w_max") return void(c.shoot.w_max = num());
    if (key == "max_bisections") return void(c.shoot.max_bisections = whole());
    if (key == "separation_tol") return void(c.shoot.separation_tol = num());
  } else if (section == "far") {
    if (key == "r_switch") return void(c.far.r_switch = num());
    if (key == "r_end") return void(c.far.r_end = num());
    if (key == "burn_in") return void(c.far.burn_in = num());
    if (key == "max_iterations") return void(c.far.max_iterations = whole());
    if (key == "match_tol") return void(c.far.match_tol = num());
  } else if (section == "expansion") {
    if (key == "order") return void(c.expansion_order = c.verify.expansion_order = whole());
  } else if (section == "windows") {
    if (key == "origin_lo") return void(c.verify.origin_window.lo = num());
    if (key == "origin_hi") return void(c.verify.origin_window.hi = num());
    if (key == "infinity_lo") return void(c.verify.infinity_window.lo = num());
    if (key == "infinity_hi") return void(c.verify.infinity_window.hi = num());
    if (key == "threshold") return void(c.verify.threshold = num());
    if (key == "fit_tolerance") return void(c.verify.fit_tolerance = num());
    if (key == "comparison_delta") return void(c.verify.comparison_delta = num());
  } else if (section == "output") {
    if (key == "dir") return void(c.out_dir = std::string(trim(value)));
    if (key == "stem") return void(c.stem = std::string(trim(value)));
  }
  throw ConfigError("unknown key '" + name + "'");
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::string section;
  int line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text.remove_prefix(nl == std::string_view::npos ? text.size() : nl + 1);
    ++line_no;
    const auto hash = line.find_first_of("#;");
    line = trim(line.substr(0, hash));
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      static const char* known[] = {"problem", "solver",  "far",   "expansion",
                                    "windows", "output",  "sweep"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) throw ConfigError(where + "unknown section [" + section + "]");
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + "expected key = value");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (section.empty()) throw ConfigError(where + "key outside any section");
    try {
      if (section == "sweep") {
        const auto dot = key.find('.');
        if (dot == std::string::npos)
          throw ConfigError("sweep keys are section.key, got '" + key + "'");
        const auto values = to_list(value, key);
        // Reject unknown targets now rather than mid-sweep.
        RunConfig probe;
        set_field(probe, key.substr(0, dot), key.substr(dot + 1), value.substr(0, value.find(',')));
        cfg.sweep[key] = values;
      } else {
        set_field(cfg, section, key, value);
      }
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void check_config(const RunConfig& c) {
  if (hq_validate(&c.problem, 0) != HQ_OK) throw ConfigError(hq_last_error());
  const auto need = [](bool ok, const char* msg) {
    if (!ok) throw ConfigError(msg);
  };
  need(c.shoot.r0 > 0.0, "solver.r0 must be positive");
  need(c.shoot.r_max > c.shoot.r0, "solver.r_max must exceed solver.r0");
  need(c.shoot.tol > 0.0 && c.shoot.tol_C > 0.0, "solver tolerances must be positive");
  need(c.shoot.C_lo > 0.0 && c.shoot.C_hi > c.shoot.C_lo, "require 0 < C_lo < C_hi");
  need(c.shoot.max_bisections > 0, "solver.max_bisections must be positive");
  need(c.far.r_switch > 0.0 && c.far.r_end > c.far.r_switch,
       "require 0 < far.r_switch < far.r_end");
  need(c.far.r_switch <= c.shoot.r_max, "far.r_switch must not exceed solver.r_max");
  need(c.verify.origin_window.lo > 0.0 &&
           c.verify.origin_window.hi > c.verify.origin_window.lo,
       "origin window must satisfy 0 < lo < hi");
  need(c.verify.infinity_window.hi > c.verify.infinity_window.lo,
       "infinity window must satisfy lo < hi");
  need(c.verify.threshold > 0.0 && c.verify.fit_tolerance > 0.0,
       "verification tolerances must be positive");
  need(!c.stem.empty(), "output.stem must not be empty");
  for (const auto& t : c.f)
    need(std::isfinite(t.coefficient) && std::isfinite(t.exponent), "f terms must be finite");
}

}  // namespace hqcli
