#pragma once

#include <array>
#include <string>
#include <vector>

#include "diskqmc/geometry.hpp"

namespace diskqmc {

// Indices of three pairwise tangent base disks bounding a curvilinear triangle.
struct Gap {
  std::array<int, 3> members{};
};

struct Violation {
  std::string kind;                 // "overlap", "gap_not_tangent", ...
  std::array<int, 3> indices{-1, -1, -1};
  double residual = 0.0;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::string to_string() const;
};

struct domain_validation_error : std::runtime_error {
  explicit domain_validation_error(ValidationReport r)
      : std::runtime_error("domain validation failed:\n" + r.to_string()), report(std::move(r)) {}
  ValidationReport report;
};

// A finitely disk-covered domain: pairwise disjoint-or-tangent base disks
// plus the curvilinear triangles enclosed by mutually tangent triples.
// Immutable after construction.
class DiskCoveredDomain {
 public:
  DiskCoveredDomain(std::vector<Circle> base_disks, std::vector<Gap> gaps,
                    TangencyTolerance tol = {});

  const std::vector<Circle>& base_disks() const { return base_disks_; }
  const std::vector<Gap>& gaps() const { return gaps_; }
  const TangencyTolerance& tolerance() const { return tol_; }

  // Sum of disk areas plus closed-form gap areas. NaN if some gap triple is
  // not actually tangent (validate() reports the reason).
  double exact_area() const { return exact_area_; }

  // Membership in the closed domain: inside a base disk, or inside a gap's
  // curvilinear triangle (center triangle minus the three member disks).
  bool contains(Vec2 p) const;

  std::array<Vec2, 2> bounding_box() const;

  // Bounds on the distance from p to points of the domain; max_dist_from is
  // an upper bound for sup |z-p|, min_dist_from a lower bound for inf |z-p|
  // (gaps lie inside the triangle of their member centers).
  double max_dist_from(Vec2 p) const;
  double min_dist_from(Vec2 p) const;
  // Upper bound for sup of x over the domain.
  double max_x() const;

 private:
  std::vector<Circle> base_disks_;
  std::vector<Gap> gaps_;
  TangencyTolerance tol_;
  double exact_area_ = 0.0;
};

// Empty report iff all domain invariants hold; violations are data, not errors.
ValidationReport validate(const DiskCoveredDomain& domain, const TangencyTolerance& tol);
inline ValidationReport validate(const DiskCoveredDomain& domain) {
  return validate(domain, domain.tolerance());
}

// Enumerates tangency-graph triangles and keeps a triple iff its inscribed
// circle's center is not covered by any other base disk. Deterministic:
// result sorted by member indices. Throws geometry_error on overlapping disks.
std::vector<Gap> detect_gaps(const std::vector<Circle>& base_disks,
                             const TangencyTolerance& tol = {});

// Canonical builders. All returned domains pass validate().
DiskCoveredDomain build_three_tangent(double r1, double r2, double r3);

// (m+1)x(n+1) unit circles on a grid of spacing 2 with a radius sqrt(2)-1
// filler in each of the m*n cells; 4*m*n gaps.
DiskCoveredDomain build_square_lattice(int m, int n);

// Strip of the unit triangular lattice with spacing 2: `cols` circles in the
// bottom row, `rows` circles in the offset top row; every lattice triangle
// becomes a gap.
DiskCoveredDomain build_hex_lattice(int rows, int cols);

// Domain file: JSON object with keys "disks" (list of {x,y,r}) and optional
// "gaps" (list of 3-element index lists). Unknown keys are rejected. Numbers
// are written with 17 significant digits. Missing gaps are reconstructed
// with detect_gaps; an invalid domain raises domain_validation_error with
// the full report attached.
DiskCoveredDomain load_domain(const std::string& path, const TangencyTolerance& tol = {});
void save_domain(const DiskCoveredDomain& domain, const std::string& path);

}  // namespace diskqmc
