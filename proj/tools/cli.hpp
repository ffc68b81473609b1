#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace logplate::cli {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

// "lo:hi:steps", steps >= 1 evenly spaced points including both ends.
struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int steps = 1;
  std::vector<double> linear() const;
};
Range parse_range(const std::string& text);

// Runs one subcommand; args excludes the program name. Returns 0 on success,
// 1 for bad flags and 2 for numerical failures.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace logplate::cli
