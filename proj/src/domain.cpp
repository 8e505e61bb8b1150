#include "diskqmc/domain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "diskqmc/rng.hpp"
#include "json.hpp"

namespace diskqmc {

namespace {

bool point_in_triangle(Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
  double d1 = cross(b - a, p - a);
  double d2 = cross(c - b, p - b);
  double d3 = cross(a - c, p - c);
  bool has_neg = (d1 < 0) || (d2 < 0) || (d3 < 0);
  bool has_pos = (d1 > 0) || (d2 > 0) || (d3 > 0);
  return !(has_neg && has_pos);
}

bool in_disk(const Circle& c, Vec2 p) {
  Vec2 d = p - c.center;
  return d.x * d.x + d.y * d.y <= c.radius * c.radius;
}

double point_triangle_distance(Vec2 p, Vec2 a, Vec2 b, Vec2 c) {
  if (point_in_triangle(p, a, b, c)) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  const Vec2 v[3] = {a, b, c};
  for (int i = 0; i < 3; ++i) {
    Vec2 s = v[i], e = v[(i + 1) % 3];
    Vec2 se = e - s;
    double len2 = dot(se, se);
    double t = len2 > 0 ? std::clamp(dot(p - s, se) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, dist(p, s + t * se));
  }
  return best;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string ValidationReport::to_string() const {
  if (violations.empty()) return "ok";
  std::ostringstream os;
  for (const auto& v : violations) {
    os << v.kind << " (";
    for (int i = 0; i < 3; ++i) {
      if (v.indices[i] >= 0) os << (i ? "," : "") << v.indices[i];
    }
    os << "): " << v.message << " [residual " << v.residual << "]\n";
  }
  return os.str();
}

DiskCoveredDomain::DiskCoveredDomain(std::vector<Circle> base_disks, std::vector<Gap> gaps,
                                     TangencyTolerance tol)
    : base_disks_(std::move(base_disks)), gaps_(std::move(gaps)), tol_(tol) {
  KahanSum area;
  for (const Circle& c : base_disks_) area.add(disk_area(c));
  bool bad_gap = false;
  int n = static_cast<int>(base_disks_.size());
  for (const Gap& g : gaps_) {
    bool in_range = true;
    for (int idx : g.members) in_range = in_range && idx >= 0 && idx < n;
    if (!in_range) {
      bad_gap = true;
      continue;
    }
    const Circle& a = base_disks_[g.members[0]];
    const Circle& b = base_disks_[g.members[1]];
    const Circle& c = base_disks_[g.members[2]];
    if (is_tangent(a, b, tol_) && is_tangent(b, c, tol_) && is_tangent(a, c, tol_)) {
      area.add(curvilinear_triangle_area(a, b, c, tol_));
    } else {
      bad_gap = true;
    }
  }
  exact_area_ = bad_gap ? std::numeric_limits<double>::quiet_NaN() : area.value();
}

bool DiskCoveredDomain::contains(Vec2 p) const {
  for (const Circle& c : base_disks_) {
    if (in_disk(c, p)) return true;
  }
  for (const Gap& g : gaps_) {
    const Circle& a = base_disks_[g.members[0]];
    const Circle& b = base_disks_[g.members[1]];
    const Circle& c = base_disks_[g.members[2]];
    if (point_in_triangle(p, a.center, b.center, c.center) && !in_disk(a, p) && !in_disk(b, p) &&
        !in_disk(c, p)) {
      return true;
    }
  }
  return false;
}

std::array<Vec2, 2> DiskCoveredDomain::bounding_box() const {
  Vec2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  Vec2 hi{-lo.x, -lo.y};
  for (const Circle& c : base_disks_) {
    lo.x = std::min(lo.x, c.center.x - c.radius);
    lo.y = std::min(lo.y, c.center.y - c.radius);
    hi.x = std::max(hi.x, c.center.x + c.radius);
    hi.y = std::max(hi.y, c.center.y + c.radius);
  }
  return {lo, hi};
}

double DiskCoveredDomain::max_dist_from(Vec2 p) const {
  double m = 0.0;
  for (const Circle& c : base_disks_) m = std::max(m, dist(p, c.center) + c.radius);
  return m;
}

double DiskCoveredDomain::min_dist_from(Vec2 p) const {
  double m = std::numeric_limits<double>::infinity();
  for (const Circle& c : base_disks_) m = std::min(m, dist(p, c.center) - c.radius);
  for (const Gap& g : gaps_) {
    m = std::min(m, point_triangle_distance(p, base_disks_[g.members[0]].center,
                                            base_disks_[g.members[1]].center,
                                            base_disks_[g.members[2]].center));
  }
  return std::max(m, 0.0);
}

double DiskCoveredDomain::max_x() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const Circle& c : base_disks_) m = std::max(m, c.center.x + c.radius);
  return m;
}

ValidationReport validate(const DiskCoveredDomain& domain, const TangencyTolerance& tol) {
  ValidationReport report;
  const auto& disks = domain.base_disks();
  int n = static_cast<int>(disks.size());

  if (n < 1) {
    report.violations.push_back({"empty_domain", {-1, -1, -1}, 0.0, "domain has no base disks"});
    return report;
  }

  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double gap = tangency_gap(disks[i], disks[j]);
      double allow = tol.allowance(disks[i].radius + disks[j].radius);
      if (gap < -allow) {
        report.violations.push_back({"overlap",
                                     {i, j, -1},
                                     -gap,
                                     "disks " + std::to_string(i) + " and " + std::to_string(j) +
                                         " overlap by " + std::to_string(-gap)});
      }
    }
  }

  for (size_t gi = 0; gi < domain.gaps().size(); ++gi) {
    const Gap& g = domain.gaps()[gi];
    std::array<int, 3> m = g.members;
    bool in_range = true;
    for (int idx : m) in_range = in_range && idx >= 0 && idx < n;
    if (!in_range) {
      report.violations.push_back(
          {"gap_bad_index", m, 0.0, "gap " + std::to_string(gi) + " references a missing disk"});
      continue;
    }
    if (m[0] == m[1] || m[1] == m[2] || m[0] == m[2]) {
      report.violations.push_back(
          {"gap_duplicate_member", m, 0.0, "gap " + std::to_string(gi) + " repeats a disk"});
      continue;
    }
    bool tangent = true;
    for (int i = 0; i < 3 && tangent; ++i) {
      const Circle& a = disks[m[i]];
      const Circle& b = disks[m[(i + 1) % 3]];
      if (!is_tangent(a, b, tol)) {
        report.violations.push_back({"gap_not_tangent",
                                     m,
                                     std::abs(tangency_gap(a, b)),
                                     "gap " + std::to_string(gi) + ": members not pairwise tangent"});
        tangent = false;
      }
    }
    if (!tangent) continue;
    // non-degenerate curvilinear triangle: the three tangency points differ
    Vec2 t01 = tangent_point(disks[m[0]], disks[m[1]]);
    Vec2 t12 = tangent_point(disks[m[1]], disks[m[2]]);
    Vec2 t02 = tangent_point(disks[m[0]], disks[m[2]]);
    double scale = std::max({disks[m[0]].radius, disks[m[1]].radius, disks[m[2]].radius});
    double sep = std::min({dist(t01, t12), dist(t12, t02), dist(t01, t02)});
    if (sep <= tol.allowance(scale)) {
      report.violations.push_back(
          {"gap_degenerate", m, sep, "gap " + std::to_string(gi) + ": tangency points coincide"});
    }
  }

  if (report.ok()) {
    KahanSum area;
    for (const Circle& c : disks) area.add(disk_area(c));
    for (const Gap& g : domain.gaps()) {
      area.add(curvilinear_triangle_area(disks[g.members[0]], disks[g.members[1]],
                                         disks[g.members[2]], tol));
    }
    double diff = std::abs(area.value() - domain.exact_area());
    if (!(diff <= 1e-12 * std::abs(area.value()))) {
      report.violations.push_back({"area_mismatch",
                                   {-1, -1, -1},
                                   diff,
                                   "stored exact_area differs from recomputed value"});
    }
  }
  return report;
}

std::vector<Gap> detect_gaps(const std::vector<Circle>& base_disks, const TangencyTolerance& tol) {
  int n = static_cast<int>(base_disks.size());
  std::vector<std::vector<int>> adj(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double gap = tangency_gap(base_disks[i], base_disks[j]);
      double allow = tol.allowance(base_disks[i].radius + base_disks[j].radius);
      if (gap < -allow) {
        throw geometry_error("detect_gaps: disks " + std::to_string(i) + " and " +
                             std::to_string(j) + " overlap");
      }
      if (std::abs(gap) <= allow) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
  }

  std::vector<Gap> gaps;
  for (int i = 0; i < n; ++i) {
    for (int j : adj[i]) {
      if (j <= i) continue;
      for (int k : adj[j]) {
        if (k <= j) continue;
        if (std::find(adj[i].begin(), adj[i].end(), k) == adj[i].end()) continue;
        // candidate triple (i,j,k); reject if the inscribed circle's center
        // is covered by any other base disk (the region is not a gap then)
        double k4 = descartes_fourth_curvature(base_disks[i].curvature, base_disks[j].curvature,
                                               base_disks[k].curvature, DescartesRoot::inner);
        Circle inscribed = descartes_fourth_center(base_disks[i], base_disks[j], base_disks[k], k4, tol);
        bool covered = false;
        for (int m = 0; m < n && !covered; ++m) {
          if (m == i || m == j || m == k) continue;
          covered = in_disk(base_disks[m], inscribed.center);
        }
        if (!covered) gaps.push_back(Gap{{i, j, k}});
      }
    }
  }
  std::sort(gaps.begin(), gaps.end(),
            [](const Gap& a, const Gap& b) { return a.members < b.members; });
  return gaps;
}

DiskCoveredDomain build_three_tangent(double r1, double r2, double r3) {
  Circle c1 = make_circle({0.0, 0.0}, r1);
  Circle c2 = make_circle({r1 + r2, 0.0}, r2);
  // third center from the two tangency distances, upper half-plane
  double d = r1 + r2;
  double a = r1 + r3;
  double b = r2 + r3;
  double x = (d * d + a * a - b * b) / (2.0 * d);
  double y = std::sqrt(std::max(a * a - x * x, 0.0));
  Circle c3 = make_circle({x, y}, r3);
  return DiskCoveredDomain({c1, c2, c3}, {Gap{{0, 1, 2}}});
}

DiskCoveredDomain build_square_lattice(int m, int n) {
  if (m < 1 || n < 1) throw invalid_input_error("build_square_lattice requires m,n >= 1");
  std::vector<Circle> disks;
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i <= m; ++i) {
      disks.push_back(make_circle({2.0 * i, 2.0 * j}, 1.0));
    }
  }
  const double filler_r = std::sqrt(2.0) - 1.0;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < m; ++i) {
      disks.push_back(make_circle({2.0 * i + 1.0, 2.0 * j + 1.0}, filler_r));
    }
  }
  return DiskCoveredDomain(disks, detect_gaps(disks));
}

DiskCoveredDomain build_hex_lattice(int rows, int cols) {
  if (rows < 1 || cols < 1) throw invalid_input_error("build_hex_lattice requires rows,cols >= 1");
  std::vector<Circle> disks;
  for (int j = 0; j < cols; ++j) disks.push_back(make_circle({2.0 * j, 0.0}, 1.0));
  const double h = std::sqrt(3.0);
  for (int j = 0; j < rows; ++j) disks.push_back(make_circle({2.0 * j + 1.0, h}, 1.0));
  return DiskCoveredDomain(disks, detect_gaps(disks));
}

DiskCoveredDomain load_domain(const std::string& path, const TangencyTolerance& tol) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open domain file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw io_error("malformed domain file " + path + ": " + e.what());
  }
  if (!doc.is_object()) throw io_error("domain file must contain a JSON object: " + path);
  for (auto& [key, value] : doc.items()) {
    if (key != "disks" && key != "gaps") {
      throw io_error("unknown key '" + key + "' in domain file " + path);
    }
  }
  if (!doc.contains("disks") || !doc["disks"].is_array()) {
    throw io_error("domain file needs a 'disks' list: " + path);
  }
  std::vector<Circle> disks;
  for (const auto& d : doc["disks"]) {
    if (!d.is_object()) throw io_error("disk entries must be objects: " + path);
    for (auto& [key, value] : d.items()) {
      if (key != "x" && key != "y" && key != "r") {
        throw io_error("unknown key '" + key + "' in disk entry of " + path);
      }
    }
    if (!d.contains("x") || !d.contains("y") || !d.contains("r")) {
      throw io_error("disk entries need numeric x, y, r: " + path);
    }
    disks.push_back(make_circle({d["x"].get<double>(), d["y"].get<double>()}, d["r"].get<double>()));
  }

  std::vector<Gap> gaps;
  if (doc.contains("gaps")) {
    if (!doc["gaps"].is_array()) throw io_error("'gaps' must be a list: " + path);
    for (const auto& g : doc["gaps"]) {
      if (!g.is_array() || g.size() != 3) {
        throw io_error("gap entries must be 3-element index lists: " + path);
      }
      gaps.push_back(Gap{{g[0].get<int>(), g[1].get<int>(), g[2].get<int>()}});
    }
  } else {
    try {
      gaps = detect_gaps(disks, tol);
    } catch (const geometry_error&) {
      // overlapping disks: fall through so validate() reports the pairs
    }
  }

  DiskCoveredDomain domain(std::move(disks), std::move(gaps), tol);
  ValidationReport report = validate(domain, tol);
  if (!report.ok()) throw domain_validation_error(std::move(report));
  return domain;
}

void save_domain(const DiskCoveredDomain& domain, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write domain file: " + path);
  out << "{\n  \"disks\": [\n";
  const auto& disks = domain.base_disks();
  for (size_t i = 0; i < disks.size(); ++i) {
    out << "    {\"x\": " << fmt17(disks[i].center.x) << ", \"y\": " << fmt17(disks[i].center.y)
        << ", \"r\": " << fmt17(disks[i].radius) << "}" << (i + 1 < disks.size() ? "," : "")
        << "\n";
  }
  out << "  ],\n  \"gaps\": [\n";
  const auto& gaps = domain.gaps();
  for (size_t i = 0; i < gaps.size(); ++i) {
    out << "    [" << gaps[i].members[0] << ", " << gaps[i].members[1] << ", " << gaps[i].members[2]
        << "]" << (i + 1 < gaps.size() ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
  if (!out) throw io_error("failed writing domain file: " + path);
}

}  // namespace diskqmc
