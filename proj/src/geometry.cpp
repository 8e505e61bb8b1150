#include "diskqmc/geometry.hpp"

#include <algorithm>
#include <complex>
#include <limits>
#include <string>

namespace diskqmc {

namespace {

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

double clamp_unit(double v) { return std::min(1.0, std::max(-1.0, v)); }

}  // namespace

Circle make_circle(Vec2 center, double r) {
  if (!finite_positive(r)) {
    throw invalid_input_error("circle radius must be finite and positive, got " + std::to_string(r));
  }
  return Circle{center, r, 1.0 / r};
}

Circle circle_from_curvature(Vec2 center, double k) {
  if (!finite_positive(k)) {
    throw invalid_input_error("circle curvature must be finite and positive, got " + std::to_string(k));
  }
  return Circle{center, 1.0 / k, k};
}

double tangency_gap(const Circle& a, const Circle& b) {
  return dist(a.center, b.center) - (a.radius + b.radius);
}

bool is_tangent(const Circle& a, const Circle& b, const TangencyTolerance& tol) {
  return std::abs(tangency_gap(a, b)) <= tol.allowance(a.radius + b.radius);
}

bool is_disjoint(const Circle& a, const Circle& b, const TangencyTolerance& tol) {
  return tangency_gap(a, b) >= -tol.allowance(a.radius + b.radius);
}

Vec2 tangent_point(const Circle& a, const Circle& b) {
  double d = dist(a.center, b.center);
  double t = a.radius / d;
  return a.center + t * (b.center - a.center);
}

double descartes_fourth_curvature(double k1, double k2, double k3, DescartesRoot root) {
  if (!finite_positive(k1) || !finite_positive(k2) || !finite_positive(k3)) {
    throw invalid_input_error("descartes_fourth_curvature requires positive curvatures");
  }
  double s = 2.0 * std::sqrt(k1 * k2 + k2 * k3 + k3 * k1);
  return root == DescartesRoot::inner ? k1 + k2 + k3 + s : k1 + k2 + k3 - s;
}

double max_tangency_residual(const Circle& candidate, const Circle& c1, const Circle& c2,
                             const Circle& c3) {
  double r = 0.0;
  for (const Circle* p : {&c1, &c2, &c3}) {
    r = std::max(r, std::abs(tangency_gap(candidate, *p)));
  }
  return r;
}

Circle descartes_fourth_center(const Circle& c1, const Circle& c2, const Circle& c3,
                               double k4, const TangencyTolerance& tol) {
  if (!finite_positive(k4)) {
    throw invalid_input_error("descartes_fourth_center requires a positive fourth curvature");
  }
  if (!is_tangent(c1, c2, tol) || !is_tangent(c2, c3, tol) || !is_tangent(c1, c3, tol)) {
    throw geometry_error("descartes_fourth_center: input circles are not mutually tangent");
  }

  using cplx = std::complex<double>;
  const cplx z1(c1.center.x, c1.center.y);
  const cplx z2(c2.center.x, c2.center.y);
  const cplx z3(c3.center.x, c3.center.y);
  const double k1 = c1.curvature, k2 = c2.curvature, k3 = c3.curvature;

  const cplx lin = k1 * z1 + k2 * z2 + k3 * z3;
  const cplx rad = 2.0 * std::sqrt(k1 * k2 * z1 * z2 + k2 * k3 * z2 * z3 + k3 * k1 * z3 * z1);

  const double r4 = 1.0 / k4;
  Circle best;
  double best_residual = std::numeric_limits<double>::infinity();
  for (const cplx& z4 : {(lin + rad) / k4, (lin - rad) / k4}) {
    Circle cand{Vec2{z4.real(), z4.imag()}, r4, k4};
    double res = max_tangency_residual(cand, c1, c2, c3);
    if (res < best_residual) {
      best_residual = res;
      best = cand;
    }
  }

  for (const Circle* p : {&c1, &c2, &c3}) {
    if (std::abs(tangency_gap(best, *p)) > tol.allowance(best.radius + p->radius)) {
      throw degenerate_configuration_error(
          "descartes_fourth_center: no candidate center passes tangency validation (residual " +
          std::to_string(best_residual) + ")");
    }
  }
  return best;
}

double curvilinear_triangle_area(const Circle& c1, const Circle& c2, const Circle& c3,
                                 const TangencyTolerance& tol) {
  if (!is_tangent(c1, c2, tol) || !is_tangent(c2, c3, tol) || !is_tangent(c1, c3, tol)) {
    throw geometry_error("curvilinear_triangle_area: circles are not mutually tangent");
  }
  const Circle* c[3] = {&c1, &c2, &c3};
  double triangle = 0.5 * std::abs(cross(c2.center - c1.center, c3.center - c1.center));
  double sectors = 0.0;
  for (int i = 0; i < 3; ++i) {
    Vec2 u = c[(i + 1) % 3]->center - c[i]->center;
    Vec2 v = c[(i + 2) % 3]->center - c[i]->center;
    double angle = std::acos(clamp_unit(dot(u, v) / (norm(u) * norm(v))));
    sectors += 0.5 * angle * c[i]->radius * c[i]->radius;
  }
  return triangle - sectors;
}

}  // namespace diskqmc
