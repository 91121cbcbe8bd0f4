#pragma once

#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "gaplab/problem.hpp"

namespace gaplab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitFailed = 2;

/// `start:stop:step`, inclusive of stop within half a step, or a comma list.
/// Throws ParseError on malformed input.
std::vector<double> parse_slope_grid(std::string_view text);

/// A real Robin parameter or the literal `dirichlet`. Throws ParseError.
BoundaryCondition parse_boundary(std::string_view text);

/// Runs one command (args[0]) and writes its report. Returns 0 on success, 2 if
/// any verification record failed, 1 on usage or solver errors.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace gaplab
