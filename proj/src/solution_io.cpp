#include "hardyq/solution_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "hardyq/error.hpp"

namespace hardyq {

namespace {

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

double parse_double(const std::string& s, const std::string& what) {
  double x = 0.0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, x);
  if (res.ec != std::errc() || res.ptr != end)
    throw Error(ErrorCode::Parse, "bad number for " + what + ": '" + s + "'");
  return x;
}

std::string f_to_string(const Nonlinearity& f) {
  std::string out;
  for (const auto& t : f.terms()) {
    if (!out.empty()) out += ';';
    out += num(t.coefficient) + ':' + num(t.exponent);
  }
  return out;
}

Nonlinearity f_from_string(const std::string& s) {
  std::vector<PowerTerm> terms;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ';')) {
    if (item.empty()) continue;
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw Error(ErrorCode::Parse, "bad f term '" + item + "'");
    terms.push_back({parse_double(item.substr(0, colon), "f coefficient"),
                     parse_double(item.substr(colon + 1), "f exponent")});
  }
  return Nonlinearity(std::move(terms));
}

StopReason stop_from_string(const std::string& s) {
  for (StopReason r : {StopReason::ReachedEnd, StopReason::BlowUp, StopReason::TurnUp,
                       StopReason::Overflow})
    if (s == to_string(r)) return r;
  throw Error(ErrorCode::Parse, "unknown stop reason '" + s + "'");
}

}  // namespace

void write_solution_csv(std::ostream& out, const RadialSolution& sol) {
  out << "# chart=" << to_string(sol.chart) << '\n'
      << "# N=" << num(sol.params.N) << '\n'
      << "# p=" << num(sol.params.p) << '\n'
      << "# mu=" << num(sol.params.mu) << '\n'
      << "# m=" << num(sol.params.m) << '\n'
      << "# f=" << f_to_string(sol.f) << '\n'
      << "# amplitude=" << num(sol.amplitude) << '\n'
      << "# gamma1=" << num(sol.gamma1) << '\n'
      << "# tol=" << num(sol.tol) << '\n'
      << "# stop=" << to_string(sol.stop) << '\n'
      << "r,logu,v\n";
  for (std::size_t i = 0; i < sol.size(); ++i)
    out << num(sol.r[i]) << ',' << num(sol.logu[i]) << ',' << num(sol.v[i]) << '\n';
}

void write_solution_csv(const std::string& path, const RadialSolution& sol) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  write_solution_csv(out, sol);
  if (!out) throw Error(ErrorCode::Io, "write to " + path + " failed");
}

RadialSolution read_solution_csv(std::istream& in) {
  std::map<std::string, std::string> meta;
  RadialSolution sol;
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      std::string key = line.substr(1, eq - 1);
      key.erase(0, key.find_first_not_of(' '));
      meta[key] = line.substr(eq + 1);
      continue;
    }
    if (!header) {
      if (line != "r,logu,v") throw Error(ErrorCode::Parse, "expected header 'r,logu,v'");
      header = true;
      continue;
    }
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
      throw Error(ErrorCode::Parse, "bad row '" + line + "'");
    sol.r.push_back(parse_double(a, "r"));
    sol.logu.push_back(parse_double(b, "logu"));
    sol.v.push_back(parse_double(c, "v"));
  }
  if (!header) throw Error(ErrorCode::Parse, "missing 'r,logu,v' header");
  const auto get = [&](const char* key) -> const std::string& {
    const auto it = meta.find(key);
    if (it == meta.end()) throw Error(ErrorCode::Parse, std::string("missing metadata ") + key);
    return it->second;
  };
  const std::string& chart = get("chart");
  if (chart == to_string(Chart::OriginW))
    sol.chart = Chart::OriginW;
  else if (chart == to_string(Chart::InfinityPhi))
    sol.chart = Chart::InfinityPhi;
  else
    throw Error(ErrorCode::Parse, "unknown chart '" + chart + "'");
  sol.params.N = parse_double(get("N"), "N");
  sol.params.p = parse_double(get("p"), "p");
  sol.params.mu = parse_double(get("mu"), "mu");
  sol.params.m = parse_double(get("m"), "m");
  sol.f = f_from_string(get("f"));
  sol.amplitude = parse_double(get("amplitude"), "amplitude");
  sol.gamma1 = parse_double(get("gamma1"), "gamma1");
  sol.tol = parse_double(get("tol"), "tol");
  sol.stop = stop_from_string(get("stop"));
  for (std::size_t i = 1; i < sol.size(); ++i)
    if (!(sol.r[i] > sol.r[i - 1]))
      throw Error(ErrorCode::Parse, "radii must be strictly increasing");
  return sol;
}

RadialSolution read_solution_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path);
  return read_solution_csv(in);
}

}  // namespace hardyq
