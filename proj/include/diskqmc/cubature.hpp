#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "diskqmc/harmonic.hpp"
#include "diskqmc/packing.hpp"

namespace diskqmc {

// Nodes at disk centers, weights = disk areas, with the certified residual
// area of the domain left uncovered by the first N disks.
struct CubatureRule {
  std::vector<Vec2> nodes;
  std::vector<double> weights;
  double residual_bound = 0.0;

  std::int64_t size() const { return static_cast<std::int64_t>(nodes.size()); }
};

// Rule from the first N emitted circles. Throws std::out_of_range if N
// exceeds the emitted prefix.
CubatureRule build_rule(std::span<const EmittedCircle> emitted, std::int64_t n,
                        const DiskCoveredDomain& domain);

struct Integration {
  double estimate = 0.0;
  double certified_bound = 0.0;  // residual_bound * supnorm
  double supnorm = 0.0;
};

// Sum of weight * u(node) plus the certified bound residual * supnorm.
Integration integrate(const CubatureRule& rule, const HarmonicFn& u, double supnorm);

// Same, with the sup norm estimated by boundary sampling (max of |u| over
// the base-circle boundaries, 256 samples each, inflated by 1.05; harmonic
// functions attain their maximum on the boundary, and the domain boundary is
// a subset of the base-circle arcs).
Integration integrate(const CubatureRule& rule, const HarmonicFn& u, const DiskCoveredDomain& domain);

double supnorm_sampled(const HarmonicFn& u, const DiskCoveredDomain& domain,
                       int samples_per_circle = 256, double inflation = 1.05);

// Closed-form upper bound for sup |u| over the domain, per function kind;
// always >= the true sup norm, preferred where a rigorous certificate matters.
double supnorm_bound(const HarmonicFn& u, const DiskCoveredDomain& domain);

struct Reference {
  double value = 0.0;
  double uncertainty = 0.0;       // achieved_residual * supnorm
  double achieved_residual = 0.0;
  std::int64_t circles = 0;
};

// Deep rule used as ground truth: evaluates the same size-ordered prefix a
// curvature-cutoff walk reaches, deepening the cutoff until the exactly
// tracked residual is <= target_residual. Certified like any other rule, so
// the result is a legitimate oracle for much shallower rules.
Reference reference_integral(const DiskCoveredDomain& domain, const HarmonicFn& u,
                             double target_residual, double supnorm);

// One walk shared by several integrands.
std::vector<Reference> reference_integral_many(const DiskCoveredDomain& domain,
                                               std::span<const HarmonicFn> us,
                                               double target_residual,
                                               std::span<const double> supnorms);

// |numerical integral over the disk - area * u(center)| / (area * (1 + |u(center)|)),
// using a polar tensor rule (Gauss-Legendre radially, >= 64 x 64 points).
double mean_value_check(const HarmonicFn& u, const Circle& disk, int radial = 64, int angular = 64);

struct Quadrature {
  double value = 0.0;
  double error_estimate = 0.0;
};

// Independent semi-analytic integral over the domain: exact mean-value
// contributions of the base disks plus adaptive quadrature over each
// curvilinear triangle (center triangle minus circular sectors).
Quadrature integrate_quadrature(const DiskCoveredDomain& domain, const HarmonicFn& u,
                                double rel_tol = 1e-12);

// Gauss-Legendre nodes/weights on [0,1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// CSV dump: index,x,y,weight, then a trailing comment row with N and the bound.
void write_rule_dump(const std::string& path, const CubatureRule& rule);

}  // namespace diskqmc
