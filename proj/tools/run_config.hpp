#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hardyq.h"

namespace hqcli {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PowerTerm {
  double coefficient = 1.0;
  double exponent = 4.0;
};

struct RunConfig {
  hq_problem problem{3.0, 2.0, 0.0, 1.0};
  std::vector<PowerTerm> f{{1.0, 4.0}};
  hq_shoot_options shoot{};
  hq_far_options far{};
  hq_verify_config verify{};
  int expansion_order = -1;
  std::string out_dir = ".";
  std::string stem = "run";
  // "section.key" -> values, one run per point of the Cartesian product.
  std::map<std::string, std::vector<double>> sweep;

  RunConfig();
};

// Flat "key = value" lines under [section] headers; '#' and ';' start
// comments. Unknown sections or keys throw with the offending line number.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// Sets one numeric field by its "section.key" name.
void set_field(RunConfig& cfg, const std::string& section, const std::string& key,
               const std::string& value);

// "1:4, -0.5:3.5" -> {{1,4},{-0.5,3.5}}
std::vector<PowerTerm> parse_terms(std::string_view text);
std::string format_terms(const std::vector<PowerTerm>& terms);

// Range and ordering checks that need no solver; throws ConfigError.
void check_config(const RunConfig& cfg);

}  // namespace hqcli
