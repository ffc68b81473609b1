#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "logplate/constants.hpp"

namespace logplate {

enum class Region { kA, kB, kC, kBandC, kNone };
enum class ExistsHint { kYes, kNoPositive, kUnknown };
const char* to_string(Region r);
const char* to_string(ExistsHint e);

struct Verdict {
  Region region = Region::kNone;
  ExistsHint exists_hint = ExistsHint::kUnknown;
  bool nonexistence = false;           // the nonexistence inequality fired
  std::optional<double> n8_condition;  // 25 * 1920 e^{lambda/mu + 34/3} / R^4
  std::optional<double> nonexist_value;
  std::vector<std::pair<std::string, double>> details;  // inequality name, slack
  std::vector<std::string> notes;
};

// Region membership only; exists_hint stays Unknown.
Verdict classify(const Params& p, const Constants& c);
// classify plus the existence and nonexistence theorems.
Verdict existence_verdict(const Params& p, const Constants& c);

struct Nonexistence {
  bool fires = false;
  double f_min = 0.0;
  double t_tilde = 0.0;
};

// f(t) = lambda - lambda1 + mu ln t^2 + t^{2**-2}; only meaningful for mu < 0.
double nonexistence_f(const Params& p, double lambda1, double t);
Nonexistence nonexistence_check(const Params& p, double lambda1);
// Brute-force minimum of f over a log grid on [1e-6, 1e6], refined by golden
// section around the best grid point.
double nonexistence_grid_min(const Params& p, double lambda1, int points = 10000);

enum class GeometryCase { kB, kC };

struct Geometry {
  GeometryCase which = GeometryCase::kB;
  double r = 0.0;     // radius of the sphere where I >= beta
  double beta = 0.0;  // the lower bound there
};

// Case B: g(t) = kappa t^2 / 2 - S^{-2**/2} t^{2**} / 2** + mu |Omega| / 2
// with kappa = (lambda1 - lambda) / lambda1.
// Case C: kappa = 1 and the constant is mu e^{-lambda/mu} |Omega| / 2.
double geometry_g(const Params& p, const Constants& c, GeometryCase which, double t);
// Case B when it applies, otherwise case C.
Geometry mp_geometry(const Params& p, const Constants& c);

struct ThresholdReport {
  double cS = 0.0;
  std::optional<double> slack;  // c(S) - I(u) when an energy is supplied
};
ThresholdReport threshold_report(const Params& p, const Constants& c,
                                 std::optional<double> energy = std::nullopt);

}  // namespace logplate
