#pragma once

#include <span>
#include <utility>
#include <vector>

#include "diskqmc/errors.hpp"

namespace diskqmc {

// Least-squares line through (log x, log y); slope is the fitted exponent.
struct ExponentFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double x_min = 0.0;
  double x_max = 0.0;
  int points_used = 0;
  bool low_confidence = false;  // range under a decade or pre-asymptotic head
};

// Fit on all points as given (both coordinates must be positive).
ExponentFit fit_loglog(std::span<const std::pair<double, double>> points);

// Restricts to x in [x_min, x_max], thins to at most max_points positions
// spaced uniformly in log x, and requires at least 10 surviving points
// (fit_error otherwise). Flags low_confidence when the used range spans
// less than one decade.
ExponentFit fit_powerlaw(std::span<const std::pair<double, double>> points, double x_min,
                         double x_max, int max_points = 512);

}  // namespace diskqmc
