#include "diskqmc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <thread>
#include <unordered_map>

namespace diskqmc {

namespace {

std::vector<std::pair<double, double>> thin_log(std::vector<std::pair<double, double>> pts,
                                                int max_points) {
  std::sort(pts.begin(), pts.end());
  if (static_cast<int>(pts.size()) <= max_points) return pts;
  std::vector<std::pair<double, double>> out;
  double l0 = std::log(pts.front().first);
  double l1 = std::log(pts.back().first);
  std::size_t last = static_cast<std::size_t>(-1);
  for (int k = 0; k < max_points; ++k) {
    double target = std::exp(l0 + (l1 - l0) * k / (max_points - 1));
    auto it = std::lower_bound(pts.begin(), pts.end(),
                               std::make_pair(target, -std::numeric_limits<double>::infinity()));
    if (it == pts.end()) --it;
    if (it != pts.begin() && std::abs(std::prev(it)->first - target) < std::abs(it->first - target)) {
      --it;
    }
    std::size_t idx = static_cast<std::size_t>(it - pts.begin());
    if (idx != last) {
      out.push_back(*it);
      last = idx;
    }
  }
  return out;
}

// Static point-in-union index over a circle prefix, bucketed by radius class
// so mixed scales stay O(1) per query.
class CircleIndex {
 public:
  CircleIndex(std::span<const EmittedCircle> emitted, std::int64_t n, Vec2 origin, double extent)
      : origin_(origin), extent_(std::max(extent, 1e-300)), levels_(kLevels) {
    circles_.reserve(n);
    for (std::int64_t i = 0; i < n; ++i) {
      const Circle& c = emitted[i].circle;
      int level = 0;
      while (level < kLevels - 1 && extent_ / static_cast<double>(1LL << (level + 1)) >= c.radius) {
        ++level;
      }
      levels_[level][key(level, c.center)].push_back(static_cast<std::uint32_t>(circles_.size()));
      circles_.push_back(c);
    }
  }

  bool covered(Vec2 p) const {
    for (int level = 0; level < kLevels; ++level) {
      const auto& grid = levels_[level];
      if (grid.empty()) continue;
      double cell = extent_ / static_cast<double>(1LL << level);
      for (int dx = -1; dx <= 1; ++dx) {
        for (int dy = -1; dy <= 1; ++dy) {
          auto it = grid.find(key(level, {p.x + dx * cell, p.y + dy * cell}));
          if (it == grid.end()) continue;
          for (std::uint32_t idx : it->second) {
            Vec2 d = p - circles_[idx].center;
            double r = circles_[idx].radius;
            if (d.x * d.x + d.y * d.y <= r * r) return true;
          }
        }
      }
    }
    return false;
  }

 private:
  static constexpr int kLevels = 24;
  std::uint64_t key(int level, Vec2 p) const {
    double cell = extent_ / static_cast<double>(1LL << level);
    auto ix = static_cast<std::int64_t>(std::floor((p.x - origin_.x) / cell));
    auto iy = static_cast<std::int64_t>(std::floor((p.y - origin_.y) / cell));
    return (static_cast<std::uint64_t>(ix) << 32) ^ (static_cast<std::uint64_t>(iy) & 0xffffffffULL);
  }

  Vec2 origin_;
  double extent_;
  std::vector<Circle> circles_;
  std::vector<std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>> levels_;
};

}  // namespace

void parallel_for_indexed(std::int64_t n, int threads,
                          const std::function<void(std::int64_t)>& fn) {
  threads = std::min<std::int64_t>(std::max(threads, 1), n);
  if (threads <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::int64_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::vector<ConvergeRow> converge_table(const DiskCoveredDomain& domain, const HarmonicFn& u,
                                        std::span<const std::int64_t> n_grid, ReferenceMode mode) {
  if (n_grid.empty()) throw invalid_input_error("converge_table: empty N grid");
  for (size_t i = 1; i < n_grid.size(); ++i) {
    if (n_grid[i] <= n_grid[i - 1]) throw invalid_input_error("converge_table: N grid must increase");
  }

  const std::int64_t n_max = n_grid.back();
  PackingGenerator gen(domain);
  gen.generate_until(StopMaxCount{n_max});
  if (static_cast<std::int64_t>(gen.emitted().size()) < n_max) {
    throw invalid_input_error("converge_table: domain packing exhausted before N grid maximum");
  }
  auto series = residual_series(gen.emitted(), domain);
  double supnorm = supnorm_bound(u, domain);

  if (mode == ReferenceMode::Auto) {
    switch (u.kind()) {
      case HarmonicFn::Kind::Constant:
        mode = ReferenceMode::Exact;
        break;
      case HarmonicFn::Kind::PolyRe:
      case HarmonicFn::Kind::PolyIm:
        mode = ReferenceMode::Quadrature;
        break;
      default:
        mode = ReferenceMode::Packing;
        break;
    }
  }

  double ref_value = 0.0, ref_unc = 0.0;
  switch (mode) {
    case ReferenceMode::Exact:
      if (u.kind() != HarmonicFn::Kind::Constant) {
        throw invalid_input_error("exact reference only available for constant functions");
      }
      ref_value = u.constant_value() * domain.exact_area();
      ref_unc = 0.0;
      break;
    case ReferenceMode::Quadrature: {
      Quadrature q = integrate_quadrature(domain, u);
      ref_value = q.value;
      ref_unc = q.error_estimate;
      break;
    }
    case ReferenceMode::Packing: {
      double target = series[n_max].second / 100.0;
      Reference r = reference_integral(domain, u, target, supnorm);
      ref_value = r.value;
      ref_unc = r.uncertainty;
      break;
    }
    case ReferenceMode::Auto:
      break;  // resolved above
  }

  std::vector<ConvergeRow> rows;
  rows.reserve(n_grid.size());
  KahanSum estimate;
  std::int64_t done = 0;
  for (std::int64_t n : n_grid) {
    for (; done < n; ++done) {
      const Circle& c = gen.emitted()[done].circle;
      estimate.add(disk_area(c) * u(c.center));
    }
    ConvergeRow row;
    row.n = n;
    row.estimate = estimate.value();
    row.certified_bound = series[n].second * supnorm;
    row.reference = ref_value;
    row.reference_uncertainty = ref_unc;
    row.error_vs_reference = std::abs(row.estimate - ref_value);
    double packed = domain.exact_area() - series[n].second;
    row.rescaled_estimate = packed > 0.0 ? row.estimate * domain.exact_area() / packed : 0.0;
    if (row.error_vs_reference > row.certified_bound + ref_unc +
                                     1e-12 * (std::abs(row.estimate) + std::abs(ref_value))) {
      throw geometry_error("certified bound violated at N=" + std::to_string(n) +
                           ": the error certificate would be dishonest");
    }
    rows.push_back(row);
  }
  return rows;
}

void write_converge_csv(const std::string& path, std::span<const ConvergeRow> rows) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write converge table: " + path);
  out << "N,estimate,certified_bound,reference,reference_uncertainty,error_vs_reference,"
         "rescaled_estimate\n";
  char buf[280];
  for (const ConvergeRow& r : rows) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                  static_cast<long long>(r.n), r.estimate, r.certified_bound, r.reference,
                  r.reference_uncertainty, r.error_vs_reference, r.rescaled_estimate);
    out << buf;
  }
  if (!out) throw io_error("failed writing converge table: " + path);
}

ResidualFitResult fit_residual_experiment(const DiskCoveredDomain& domain, std::int64_t n_min,
                                          std::int64_t n_max) {
  PackingGenerator gen(domain);
  gen.generate_until(StopMaxCount{n_max});
  ResidualFitResult out;
  out.series = residual_series(gen.emitted(), domain);
  std::vector<std::pair<double, double>> pts;
  pts.reserve(out.series.size());
  for (const auto& [n, r] : out.series) {
    if (n >= 1) pts.emplace_back(static_cast<double>(n), r);
  }
  out.fit = fit_powerlaw(pts, static_cast<double>(n_min), static_cast<double>(n_max));
  if (n_min < 1000) out.fit.low_confidence = true;  // pre-asymptotic head
  return out;
}

CountingFitResult fit_counting_experiment(const DiskCoveredDomain& domain, double t_min,
                                          double t_max, double band_ratio, int bands) {
  if (!(t_min > 0.0) || !(t_max > t_min)) {
    throw invalid_input_error("fit_counting_experiment requires 0 < t_min < t_max");
  }
  PackingGenerator gen(domain);
  gen.generate_until(StopMaxCurvature{t_max});

  CountingFitResult out;
  out.band_ratio = band_ratio;
  const int grid_points = 256;
  std::vector<std::pair<double, double>> pts;
  for (int k = 0; k < grid_points; ++k) {
    double t = std::exp(std::log(t_min) + (std::log(t_max) - std::log(t_min)) * k /
                                              (grid_points - 1));
    std::int64_t n = count_by_curvature(gen.emitted(), t);
    out.curve.emplace_back(t, n);
    if (n > 0) pts.emplace_back(t, static_cast<double>(n));
  }
  out.fit = fit_powerlaw(pts, t_min, t_max);
  if (t_min < 100.0) out.fit.low_confidence = true;

  int usable_bands = 0;
  for (double edge = t_min; edge * band_ratio <= t_max && usable_bands < bands; ++usable_bands) {
    edge *= band_ratio;
  }
  auto counts = curvature_band_counts(gen.emitted(), t_min, band_ratio, usable_bands);
  for (int j = 0; j < usable_bands; ++j) {
    out.bands.emplace_back(t_min * std::pow(band_ratio, j), counts[j]);
  }
  return out;
}

LpCheckResult lp_check(const DiskCoveredDomain& domain, std::span<const EmittedCircle> emitted,
                       std::int64_t n, std::span<const double> ps, std::int64_t samples,
                       std::uint64_t seed) {
  if (n < 0 || n > static_cast<std::int64_t>(emitted.size())) {
    throw invalid_input_error("lp_check: N exceeds the emitted prefix");
  }
  for (double p : ps) {
    if (!(p >= 1.0)) throw invalid_input_error("lp_check requires p >= 1");
  }
  auto box = domain.bounding_box();
  double box_area = (box[1].x - box[0].x) * (box[1].y - box[0].y);
  CircleIndex index(emitted, n, box[0], std::max(box[1].x - box[0].x, box[1].y - box[0].y));

  Xoshiro256 rng(seed);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    Vec2 p{rng.uniform(box[0].x, box[1].x), rng.uniform(box[0].y, box[1].y)};
    if (domain.contains(p) && !index.covered(p)) ++hits;
  }

  auto series = residual_series(emitted.subspan(0, n), domain);
  double residual = series[n].second;

  double q = static_cast<double>(hits) / static_cast<double>(samples);
  double measure = box_area * q;
  double measure_se = box_area * std::sqrt(std::max(q * (1.0 - q), 0.0) / samples);

  LpCheckResult out;
  out.residual = residual;
  out.hits = hits;
  out.samples = samples;
  for (double p : ps) {
    LpCheckRow row;
    row.p = p;
    row.measured_norm = std::pow(measure, 1.0 / p);
    row.expected_norm = std::pow(residual, 1.0 / p);
    // delta method around the expected measure
    row.standard_error = residual > 0.0
                             ? (1.0 / p) * std::pow(residual, 1.0 / p - 1.0) * measure_se
                             : measure_se;
    row.within_4_sigma = std::abs(row.measured_norm - row.expected_norm) <= 4.0 * row.standard_error;
    out.rows.push_back(row);
  }
  return out;
}

GreedyPooledResult greedy_experiment(const ConvexRegion& region, std::int64_t target_n,
                                     std::span<const std::uint64_t> seeds, std::int64_t n_fit_min,
                                     std::int64_t n_fit_max, int threads) {
  if (seeds.size() < 3) throw invalid_input_error("greedy_experiment needs at least 3 seeds");
  GreedyPooledResult out;
  out.runs.resize(seeds.size());
  parallel_for_indexed(static_cast<std::int64_t>(seeds.size()), threads, [&](std::int64_t i) {
    out.runs[i] = greedy_run(region, target_n, seeds[i]);
  });

  std::vector<std::pair<double, double>> pooled;
  for (const GreedyRun& run : out.runs) {
    std::vector<std::pair<double, double>> pts;
    for (const GreedySample& s : run.series) {
      if (s.n >= n_fit_min && s.n <= n_fit_max && s.residual > 0.0) {
        pts.emplace_back(static_cast<double>(s.n), s.residual);
      }
    }
    auto thinned = thin_log(std::move(pts), 128);
    pooled.insert(pooled.end(), thinned.begin(), thinned.end());
  }
  if (pooled.size() < 10) throw fit_error("greedy_experiment: too few pooled points for a fit");
  out.pooled_fit = fit_loglog(pooled);
  if (out.pooled_fit.x_max < 10.0 * out.pooled_fit.x_min) out.pooled_fit.low_confidence = true;
  return out;
}

std::pair<double, double> monte_carlo_area(const DiskCoveredDomain& domain, std::int64_t samples,
                                           std::uint64_t seed) {
  auto box = domain.bounding_box();
  double box_area = (box[1].x - box[0].x) * (box[1].y - box[0].y);
  Xoshiro256 rng(seed);
  std::int64_t hits = 0;
  for (std::int64_t i = 0; i < samples; ++i) {
    Vec2 p{rng.uniform(box[0].x, box[1].x), rng.uniform(box[0].y, box[1].y)};
    if (domain.contains(p)) ++hits;
  }
  double q = static_cast<double>(hits) / static_cast<double>(samples);
  return {box_area * q, box_area * std::sqrt(std::max(q * (1.0 - q), 0.0) / samples)};
}

}  // namespace diskqmc
