#pragma once


#include <cmath>

#include "diskqmc/errors.hpp"

namespace diskqmc {

inline constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }
};

inline double norm(Vec2 v) { return std::sqrt(v.x * v.x + v.y * v.y); }
inline double dist(Vec2 a, Vec2 b) { return norm(a - b); }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }

// A circle bounding a disk of positive area. Radius and curvature are kept
// together (curvature = 1/radius) because the packing recursion works in
// curvatures while all metric tests work in radii.
struct Circle {
  Vec2 center;
  double radius = 1.0;
  double curvature = 1.0;
};

// Throws invalid_input_error unless r is finite and positive.
Circle make_circle(Vec2 center, double r);
Circle circle_from_curvature(Vec2 center, double k);

inline double disk_area(const Circle& c) { return kPi * c.radius * c.radius; }

// Two circles are declared tangent iff
//   |dist(centers) - (r1+r2)| <= absolute + relative*(r1+r2).
struct TangencyTolerance {
  double relative = 1e-9;
  double absolute = 1e-12;

  double allowance(double radius_sum) const { return absolute + relative * radius_sum; }
};

// Signed external-tangency defect: dist(centers) - (r1+r2).
double tangency_gap(const Circle& a, const Circle& b);

bool is_tangent(const Circle& a, const Circle& b, const TangencyTolerance& tol = {});
bool is_disjoint(const Circle& a, const Circle& b, const TangencyTolerance& tol = {});

// Point where two externally tangent circles touch.
Vec2 tangent_point(const Circle& a, const Circle& b);

enum class DescartesRoot { inner, outer };

// Fourth curvature of a Descartes configuration:
//   k4 = k1+k2+k3 +/- 2*sqrt(k1 k2 + k2 k3 + k3 k1).
// `inner` (+) is the circle inscribed in the curvilinear triangle of the
// three mutually tangent circles; `outer` (-) is the circumscribing one
// (possibly negative, never materialized as a Circle here).
double descartes_fourth_curvature(double k1, double k2, double k3, DescartesRoot root);

// Center of the inscribed circle with curvature k4, via the complex
// Descartes identity  k4 z4 = k1 z1 + k2 z2 + k3 z3 +/- 2 sqrt(...).
// Both candidate centers are formed and the one with the smaller maximal
// tangency residual against the three parents wins; the winner must pass
// the tangency tolerance, otherwise degenerate_configuration_error.
Circle descartes_fourth_center(const Circle& c1, const Circle& c2, const Circle& c3,
                               double k4, const TangencyTolerance& tol = {});

// Area of the curvilinear triangle enclosed by three mutually externally
// tangent circles: triangle of the centers minus the three circular sectors.
double curvilinear_triangle_area(const Circle& c1, const Circle& c2, const Circle& c3,
                                 const TangencyTolerance& tol = {});

// Largest |dist(candidate, parent) - (r_candidate + r_parent)| over the three parents.
double max_tangency_residual(const Circle& candidate, const Circle& c1, const Circle& c2,
                             const Circle& c3);

}  // namespace diskqmc
