#include "diskqmc/cubature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace diskqmc {

CubatureRule build_rule(std::span<const EmittedCircle> emitted, std::int64_t n,
                        const DiskCoveredDomain& domain) {
  if (n < 0 || n > static_cast<std::int64_t>(emitted.size())) {
    throw std::out_of_range("build_rule: N=" + std::to_string(n) + " exceeds the emitted prefix (" +
                            std::to_string(emitted.size()) + ")");
  }
  CubatureRule rule;
  rule.nodes.reserve(n);
  rule.weights.reserve(n);
  KahanSum packed;
  for (std::int64_t i = 0; i < n; ++i) {
    const Circle& c = emitted[i].circle;
    rule.nodes.push_back(c.center);
    rule.weights.push_back(disk_area(c));
    packed.add(disk_area(c));
  }
  rule.residual_bound = domain.exact_area() - packed.value();
  return rule;
}

Integration integrate(const CubatureRule& rule, const HarmonicFn& u, double supnorm) {
  KahanSum sum;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    sum.add(rule.weights[i] * u(rule.nodes[i]));
  }
  return Integration{sum.value(), rule.residual_bound * supnorm, supnorm};
}

Integration integrate(const CubatureRule& rule, const HarmonicFn& u,
                      const DiskCoveredDomain& domain) {
  return integrate(rule, u, supnorm_sampled(u, domain));
}

double supnorm_sampled(const HarmonicFn& u, const DiskCoveredDomain& domain,
                       int samples_per_circle, double inflation) {
  double m = 0.0;
  for (const Circle& c : domain.base_disks()) {
    for (int i = 0; i < samples_per_circle; ++i) {
      double a = 2.0 * kPi * i / samples_per_circle;
      m = std::max(m, std::abs(u(c.center.x + c.radius * std::cos(a),
                                 c.center.y + c.radius * std::sin(a))));
    }
  }
  return m * inflation;
}

double supnorm_bound(const HarmonicFn& u, const DiskCoveredDomain& domain) {
  switch (u.kind()) {
    case HarmonicFn::Kind::Constant:
      return std::abs(u.constant_value());
    case HarmonicFn::Kind::PolyRe:
    case HarmonicFn::Kind::PolyIm: {
      // |Re/Im (z-z0)^m| <= (sup |z-z0|)^m
      double r = domain.max_dist_from(u.pole());
      return std::pow(r, u.degree());
    }
    case HarmonicFn::Kind::LogPole: {
      double dmin = domain.min_dist_from(u.pole());
      if (!(dmin > 0.0)) {
        throw invalid_input_error("log_pole: pole touches the domain, sup norm unbounded");
      }
      double dmax = domain.max_dist_from(u.pole());
      return std::max(std::abs(std::log(dmin)), std::abs(std::log(dmax)));
    }
    case HarmonicFn::Kind::ExpCos:
      return std::exp(domain.max_x());
    case HarmonicFn::Kind::Combo: {
      double s = 0.0;
      for (const auto& [w, f] : u.terms()) s += std::abs(w) * supnorm_bound(f, domain);
      return s;
    }
  }
  return 0.0;
}

std::vector<Reference> reference_integral_many(const DiskCoveredDomain& domain,
                                               std::span<const HarmonicFn> us,
                                               double target_residual,
                                               std::span<const double> supnorms) {
  if (us.size() != supnorms.size()) {
    throw invalid_input_error("reference_integral_many: one supnorm per function required");
  }
  double floor = 1e-13 * domain.exact_area();
  if (!(target_residual >= floor)) {
    throw invalid_input_error("reference target residual " + std::to_string(target_residual) +
                              " is below achievable precision");
  }
  double max_base_curvature = 0.0;
  for (const Circle& c : domain.base_disks()) {
    max_base_curvature = std::max(max_base_curvature, c.curvature);
  }

  // The residual left above a curvature cutoff T decays like T^(alpha-2)
  // with alpha ~ 1.3057, so after a cheap probe walk the required cutoff can
  // be predicted directly instead of stepping blindly.
  double cutoff = 64.0 * max_base_curvature;
  double prev_cutoff = 0.0, prev_residual = 0.0;
  for (int iter = 0; iter < 40; ++iter) {
    KahanSum packed;
    std::vector<KahanSum> sums(us.size());
    std::int64_t count = 0;
    walk_packing(domain, cutoff, [&](const Circle& c) {
      double a = disk_area(c);
      packed.add(a);
      for (size_t k = 0; k < us.size(); ++k) sums[k].add(a * us[k](c.center));
      ++count;
    });
    double residual = domain.exact_area() - packed.value();
    if (residual <= target_residual) {
      std::vector<Reference> out(us.size());
      for (size_t k = 0; k < us.size(); ++k) {
        out[k] = Reference{sums[k].value(), residual * supnorms[k], residual, count};
      }
      return out;
    }
    double exponent = 2.0 - 1.3057;
    if (prev_residual > residual && prev_cutoff > 0.0) {
      // refine the local decay exponent from the last two walks
      exponent = std::log(prev_residual / residual) / std::log(cutoff / prev_cutoff);
      exponent = std::clamp(exponent, 0.2, 2.0);
    }
    prev_cutoff = cutoff;
    prev_residual = residual;
    double factor = std::pow(residual / target_residual, 1.0 / exponent) * 1.1;
    cutoff *= std::clamp(factor, 2.0, 1e6);
  }
  throw geometry_error("reference_integral: target residual " + std::to_string(target_residual) +
                       " not reached within the curvature cutoff budget");
}

Reference reference_integral(const DiskCoveredDomain& domain, const HarmonicFn& u,
                             double target_residual, double supnorm) {
  const HarmonicFn us[1] = {u};
  const double sn[1] = {supnorm};
  return reference_integral_many(domain, us, target_residual, sn)[0];
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.resize(n);
  weights.resize(n);
  // Newton on P_n over [-1,1], then map to [0,1]
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = 0.5 * (1.0 - x);  // descending roots -> ascending nodes
    weights[i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
}

double mean_value_check(const HarmonicFn& u, const Circle& disk, int radial, int angular) {
  radial = std::max(radial, 64);
  angular = std::max(angular, 64);
  std::vector<double> xs, ws;
  gauss_legendre(radial, xs, ws);
  KahanSum integral;
  for (int i = 0; i < radial; ++i) {
    double rho = disk.radius * xs[i];
    double wr = ws[i] * disk.radius * rho;  // polar Jacobian
    KahanSum ring;
    for (int j = 0; j < angular; ++j) {
      double a = 2.0 * kPi * j / angular;
      ring.add(u(disk.center.x + rho * std::cos(a), disk.center.y + rho * std::sin(a)));
    }
    integral.add(wr * (2.0 * kPi / angular) * ring.value());
  }
  double area = disk_area(disk);
  double mean_value = area * u(disk.center);
  return std::abs(integral.value() - mean_value) / (area * (1.0 + std::abs(u(disk.center))));
}

namespace {

// 7-point degree-5 triangle rule (barycentric points, weights sum to 1).
struct TriRule {
  static constexpr double a = 0.059715871789769820;
  static constexpr double b = 0.470142064105115090;
  static constexpr double wa = 0.132394152788506180;
  static constexpr double wb = 0.125939180544827150;
};

double tri_area(Vec2 p0, Vec2 p1, Vec2 p2) { return 0.5 * std::abs(cross(p1 - p0, p2 - p0)); }

double tri_rule(const HarmonicFn& u, Vec2 p0, Vec2 p1, Vec2 p2) {
  auto at = [&](double l0, double l1, double l2) {
    return u(l0 * p0.x + l1 * p1.x + l2 * p2.x, l0 * p0.y + l1 * p1.y + l2 * p2.y);
  };
  double s = (9.0 / 40.0) * at(1.0 / 3, 1.0 / 3, 1.0 / 3);
  double a = TriRule::a, b = TriRule::b;
  s += TriRule::wa * (at(a, a, 1 - 2 * a) + at(a, 1 - 2 * a, a) + at(1 - 2 * a, a, a));
  s += TriRule::wb * (at(b, b, 1 - 2 * b) + at(b, 1 - 2 * b, b) + at(1 - 2 * b, b, b));
  return s * tri_area(p0, p1, p2);
}

double tri_adaptive(const HarmonicFn& u, Vec2 p0, Vec2 p1, Vec2 p2, double tol, int depth,
                    double& err) {
  double coarse = tri_rule(u, p0, p1, p2);
  Vec2 m01 = 0.5 * (p0 + p1), m12 = 0.5 * (p1 + p2), m02 = 0.5 * (p0 + p2);
  double fine = tri_rule(u, p0, m01, m02) + tri_rule(u, p1, m01, m12) +
                tri_rule(u, p2, m02, m12) + tri_rule(u, m01, m12, m02);
  double diff = std::abs(fine - coarse);
  if (diff <= tol || depth >= 24) {
    err += diff;
    return fine;
  }
  double e = 0.0;
  double v = tri_adaptive(u, p0, m01, m02, tol / 4, depth + 1, e) +
             tri_adaptive(u, p1, m01, m12, tol / 4, depth + 1, e) +
             tri_adaptive(u, p2, m02, m12, tol / 4, depth + 1, e) +
             tri_adaptive(u, m01, m12, m02, tol / 4, depth + 1, e);
  err += e;
  return v;
}

// Circular sector at `center`, radius r, between directions of unit vectors
// toward q1 and q2 (interior angle < pi for tangent triples).
double sector_integral(const HarmonicFn& u, Vec2 center, double r, Vec2 q1, Vec2 q2, int n) {
  double a1 = std::atan2(q1.y - center.y, q1.x - center.x);
  double a2 = std::atan2(q2.y - center.y, q2.x - center.x);
  double sweep = a2 - a1;
  while (sweep > kPi) sweep -= 2.0 * kPi;
  while (sweep < -kPi) sweep += 2.0 * kPi;
  std::vector<double> xs, ws;
  gauss_legendre(n, xs, ws);
  KahanSum total;
  for (int i = 0; i < n; ++i) {
    double rho = r * xs[i];
    double wr = ws[i] * r * rho;
    KahanSum arc;
    for (int j = 0; j < n; ++j) {
      double a = a1 + sweep * xs[j];
      arc.add(ws[j] * u(center.x + rho * std::cos(a), center.y + rho * std::sin(a)));
    }
    total.add(wr * std::abs(sweep) * arc.value());
  }
  return total.value();
}

}  // namespace

Quadrature integrate_quadrature(const DiskCoveredDomain& domain, const HarmonicFn& u,
                                double rel_tol) {
  KahanSum value;
  double err = 0.0;
  for (const Circle& c : domain.base_disks()) {
    value.add(disk_area(c) * u(c.center));  // mean value, exact for harmonic u
  }
  for (const Gap& g : domain.gaps()) {
    const Circle& a = domain.base_disks()[g.members[0]];
    const Circle& b = domain.base_disks()[g.members[1]];
    const Circle& c = domain.base_disks()[g.members[2]];
    double coarse = std::abs(tri_rule(u, a.center, b.center, c.center));
    double tol = rel_tol * (1.0 + coarse);
    double tri_err = 0.0;
    double tri = tri_adaptive(u, a.center, b.center, c.center, tol, 0, tri_err);
    double sectors = sector_integral(u, a.center, a.radius, b.center, c.center, 48) +
                     sector_integral(u, b.center, b.radius, a.center, c.center, 48) +
                     sector_integral(u, c.center, c.radius, a.center, b.center, 48);
    double sectors_check = sector_integral(u, a.center, a.radius, b.center, c.center, 24) +
                           sector_integral(u, b.center, b.radius, a.center, c.center, 24) +
                           sector_integral(u, c.center, c.radius, a.center, b.center, 24);
    value.add(tri - sectors);
    err += tri_err + std::abs(sectors - sectors_check);
  }
  return Quadrature{value.value(), err};
}

void write_rule_dump(const std::string& path, const CubatureRule& rule) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write rule dump: " + path);
  out << "index,x,y,weight\n";
  char buf[160];
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g\n", i, rule.nodes[i].x, rule.nodes[i].y,
                  rule.weights[i]);
    out << buf;
  }
  std::snprintf(buf, sizeof buf, "# N=%zu residual_bound=%.17g\n", rule.nodes.size(),
                rule.residual_bound);
  out << buf;
  if (!out) throw io_error("failed writing rule dump: " + path);
}

}  // namespace diskqmc
