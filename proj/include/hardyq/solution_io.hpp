#pragma once

#include <iosfwd>
#include <string>

#include "hardyq/radial_ode.hpp"

namespace hardyq {

// Self-describing CSV: `# key=value` metadata lines, then a `r,logu,v`
// header and one row per grid point, all numbers at 17 significant digits.
void write_solution_csv(std::ostream& out, const RadialSolution& sol);
void write_solution_csv(const std::string& path, const RadialSolution& sol);

RadialSolution read_solution_csv(std::istream& in);
RadialSolution read_solution_csv(const std::string& path);

}  // namespace hardyq
