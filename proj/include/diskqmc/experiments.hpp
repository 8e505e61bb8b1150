#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "diskqmc/cubature.hpp"
#include "diskqmc/fit.hpp"
#include "diskqmc/greedy.hpp"
#include "diskqmc/packing.hpp"

namespace diskqmc {

// How cmd-level experiments obtain the ground-truth integral.
//   Packing    - deep certified rule at residual(target N)/100
//   Quadrature - semi-analytic adaptive quadrature
//   Exact      - closed form (constants only)
//   Auto       - Exact for constants, Quadrature for polynomials, Packing otherwise
enum class ReferenceMode { Auto, Packing, Quadrature, Exact };

struct ConvergeRow {
  std::int64_t n = 0;
  double estimate = 0.0;
  double certified_bound = 0.0;
  double reference = 0.0;
  double reference_uncertainty = 0.0;
  double error_vs_reference = 0.0;
  // estimate scaled by exact_area / sum of weights; reported empirically
  // only, no certificate attaches to it
  double rescaled_estimate = 0.0;
};

// One row per grid N: estimate, certified bound, and the deviation from the
// reference. Asserts |estimate - reference| <= bound + reference uncertainty
// row-wise (geometry_error otherwise: the certificate would be dishonest).
std::vector<ConvergeRow> converge_table(const DiskCoveredDomain& domain, const HarmonicFn& u,
                                        std::span<const std::int64_t> n_grid, ReferenceMode mode);

void write_converge_csv(const std::string& path, std::span<const ConvergeRow> rows);

struct ResidualFitResult {
  ExponentFit fit;
  std::vector<std::pair<std::int64_t, double>> series;
};

// Generates max_n circles and fits log residual vs log N on [n_min, n_max].
ResidualFitResult fit_residual_experiment(const DiskCoveredDomain& domain, std::int64_t n_min,
                                          std::int64_t n_max);

struct CountingFitResult {
  ExponentFit fit;
  std::vector<std::pair<double, std::int64_t>> curve;  // (T, N(T)) on a log grid
  std::vector<std::pair<double, std::int64_t>> bands;  // (band lower edge, count)
  double band_ratio = 2.0;
};

// Generates to curvature t_max and fits log N(T) vs log T on [t_min, t_max];
// also tabulates geometric curvature bands for the band-growth display.
CountingFitResult fit_counting_experiment(const DiskCoveredDomain& domain, double t_min,
                                          double t_max, double band_ratio = 2.0, int bands = 6);

struct LpCheckRow {
  double p = 0.0;
  double measured_norm = 0.0;
  double expected_norm = 0.0;  // residual^(1/p)
  double standard_error = 0.0;
  bool within_4_sigma = false;
};

struct LpCheckResult {
  std::vector<LpCheckRow> rows;
  double residual = 0.0;
  std::int64_t hits = 0;
  std::int64_t samples = 0;
};

// The indicator of (domain minus first N disks) has L^p norm residual^(1/p)
// exactly; measures it by Monte-Carlo sampling over the bounding box and
// reports a delta-method standard error per p.
LpCheckResult lp_check(const DiskCoveredDomain& domain, std::span<const EmittedCircle> emitted,
                       std::int64_t n, std::span<const double> ps, std::int64_t samples,
                       std::uint64_t seed);

struct GreedyPooledResult {
  std::vector<GreedyRun> runs;
  ExponentFit pooled_fit;
};

// Independent seeds (optionally in parallel), pooled log-log fit of residual
// vs N over [n_fit_min, n_fit_max]. Deterministic per seed and in aggregate.
GreedyPooledResult greedy_experiment(const ConvexRegion& region, std::int64_t target_n,
                                     std::span<const std::uint64_t> seeds, std::int64_t n_fit_min,
                                     std::int64_t n_fit_max, int threads = 1);

// Uniform Monte-Carlo estimate of the domain area over its bounding box;
// returns (estimate, standard error).
std::pair<double, double> monte_carlo_area(const DiskCoveredDomain& domain, std::int64_t samples,
                                           std::uint64_t seed);

// Runs fn(i) for i in [0,n) on up to `threads` workers; results must be
// written to per-index slots so the merge is order-independent.
void parallel_for_indexed(std::int64_t n, int threads, const std::function<void(std::int64_t)>& fn);

}  // namespace diskqmc
