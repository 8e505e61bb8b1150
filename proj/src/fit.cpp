#include "diskqmc/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace diskqmc {

ExponentFit fit_loglog(std::span<const std::pair<double, double>> points) {
  std::vector<std::pair<double, double>> logs;
  logs.reserve(points.size());
  double x_min = 0.0, x_max = 0.0;
  for (const auto& [x, y] : points) {
    if (!(x > 0.0) || !(y > 0.0)) continue;
    logs.emplace_back(std::log(x), std::log(y));
    x_min = x_min == 0.0 ? x : std::min(x_min, x);
    x_max = std::max(x_max, x);
  }
  if (logs.size() < 2) throw fit_error("fit_loglog needs at least 2 positive points");

  double n = static_cast<double>(logs.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [lx, ly] : logs) {
    sx += lx;
    sy += ly;
  }
  double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [lx, ly] : logs) {
    sxx += (lx - mx) * (lx - mx);
    sxy += (lx - mx) * (ly - my);
    syy += (ly - my) * (ly - my);
  }
  if (!(sxx > 0.0)) throw fit_error("fit_loglog: degenerate x range");

  ExponentFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (const auto& [lx, ly] : logs) {
    double r = ly - (fit.intercept + fit.slope * lx);
    ss_res += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.x_min = x_min;
  fit.x_max = x_max;
  fit.points_used = static_cast<int>(logs.size());
  return fit;
}

ExponentFit fit_powerlaw(std::span<const std::pair<double, double>> points, double x_min,
                         double x_max, int max_points) {
  if (!(x_min > 0.0) || !(x_max > x_min)) {
    throw fit_error("fit_powerlaw requires 0 < x_min < x_max");
  }
  std::vector<std::pair<double, double>> in_range;
  for (const auto& p : points) {
    if (p.first >= x_min && p.first <= x_max && p.first > 0.0 && p.second > 0.0) {
      in_range.push_back(p);
    }
  }
  std::sort(in_range.begin(), in_range.end());

  std::vector<std::pair<double, double>> used;
  if (static_cast<int>(in_range.size()) <= max_points) {
    used = in_range;
  } else {
    // nearest sample to each of max_points log-uniform targets, deduplicated
    double l0 = std::log(in_range.front().first);
    double l1 = std::log(in_range.back().first);
    std::size_t last = static_cast<std::size_t>(-1);
    for (int k = 0; k < max_points; ++k) {
      double target = std::exp(l0 + (l1 - l0) * k / (max_points - 1));
      auto it = std::lower_bound(in_range.begin(), in_range.end(),
                                 std::make_pair(target, -std::numeric_limits<double>::infinity()));
      if (it == in_range.end()) --it;
      if (it != in_range.begin() &&
          std::abs(std::prev(it)->first - target) < std::abs(it->first - target)) {
        --it;
      }
      std::size_t idx = static_cast<std::size_t>(it - in_range.begin());
      if (idx != last) {
        used.push_back(*it);
        last = idx;
      }
    }
  }

  if (used.size() < 10) {
    throw fit_error("fit_powerlaw: only " + std::to_string(used.size()) +
                    " usable points in range, need at least 10");
  }
  ExponentFit fit = fit_loglog(used);
  if (fit.x_max < 10.0 * fit.x_min) fit.low_confidence = true;
  return fit;
}

}  // namespace diskqmc
