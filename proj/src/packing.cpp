#include "diskqmc/packing.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace diskqmc {

bool PackingGenerator::PopsLater::operator()(const Entry& a, const Entry& b) const {
  // priority_queue keeps the entry that pops FIRST on top, so this returns
  // true when a pops after b: radius descending, then x, y, push sequence.
  if (a.radius != b.radius) return a.radius < b.radius;
  if (a.x != b.x) return a.x > b.x;
  if (a.y != b.y) return a.y > b.y;
  return a.seq > b.seq;
}

PackingGenerator::PackingGenerator(const DiskCoveredDomain& domain) : domain_(domain) {
  const auto& disks = domain.base_disks();
  base_emission_index_.assign(disks.size(), -1);
  double max_base_radius = 0.0;
  for (std::int32_t i = 0; i < static_cast<std::int32_t>(disks.size()); ++i) {
    const Circle& c = disks[i];
    max_base_radius = std::max(max_base_radius, c.radius);
    frontier_.push(Entry{c.radius, c.center.x, c.center.y, c.curvature, next_seq_++, i, {}, false});
  }
  min_radius_guard_ = 1e-9 * max_base_radius;
  for (const Gap& g : domain.gaps()) {
    push_gap(disks[g.members[0]], disks[g.members[1]], disks[g.members[2]],
             {g.members[0], g.members[1], g.members[2]}, true);
  }
}

void PackingGenerator::push_gap(const Circle& a, const Circle& b, const Circle& c,
                                std::array<std::int32_t, 3> members, bool domain_indices) {
  double k4 = descartes_fourth_curvature(a.curvature, b.curvature, c.curvature,
                                         DescartesRoot::inner);
  Circle inscribed = descartes_fourth_center(a, b, c, k4, domain_.tolerance());
  frontier_.push(Entry{inscribed.radius, inscribed.center.x, inscribed.center.y,
                       inscribed.curvature, next_seq_++, -1, members, domain_indices});
}

Circle PackingGenerator::member_circle(const Entry& e, int slot) const {
  if (e.members_are_domain_indices) return domain_.base_disks()[e.members[slot]];
  return emitted_[e.members[slot]].circle;
}

std::int32_t PackingGenerator::member_emission_index(const Entry& e, int slot) const {
  if (e.members_are_domain_indices) return base_emission_index_[e.members[slot]];
  return e.members[slot];
}

std::optional<EmittedCircle> PackingGenerator::next() {
  if (frontier_.empty()) return std::nullopt;
  Entry top = frontier_.top();
  frontier_.pop();

  if (top.radius < min_radius_guard_) {
    throw geometry_error(
        "packing radius underflow guard: next radius " + std::to_string(top.radius) +
        " is below 1e-9 x largest base radius; deeper circles are numerically meaningless");
  }

  EmittedCircle out;
  if (top.base_index >= 0) {
    out.circle = domain_.base_disks()[top.base_index];
    out.parents = {-1, -1, -1};
    base_emission_index_[top.base_index] = static_cast<std::int32_t>(emitted_.size());
  } else {
    // a gap's members always pop before the gap itself (its inscribed circle
    // is strictly smaller), so their emission indices are known here
    out.circle = Circle{{top.x, top.y}, top.radius, top.curvature};
    out.parents = {member_emission_index(top, 0), member_emission_index(top, 1),
                   member_emission_index(top, 2)};
    Circle a = member_circle(top, 0);
    Circle b = member_circle(top, 1);
    Circle c = member_circle(top, 2);
    std::int32_t self = static_cast<std::int32_t>(emitted_.size());
    std::array<std::int32_t, 3> p = out.parents;
    emitted_.push_back(out);
    packed_area_.add(disk_area(out.circle));
    max_curvature_ = std::max(max_curvature_, out.circle.curvature);
    push_gap(a, b, out.circle, {p[0], p[1], self}, false);
    push_gap(a, c, out.circle, {p[0], p[2], self}, false);
    push_gap(b, c, out.circle, {p[1], p[2], self}, false);
    return out;
  }
  emitted_.push_back(out);
  packed_area_.add(disk_area(out.circle));
  max_curvature_ = std::max(max_curvature_, out.circle.curvature);
  return out;
}

PackingStats PackingGenerator::stats() const {
  PackingStats s;
  s.count = static_cast<std::int64_t>(emitted_.size());
  s.max_curvature_emitted = max_curvature_;
  s.packed_area = packed_area_.value();
  s.residual_area = domain_.exact_area() - s.packed_area;
  return s;
}

PackingStats PackingGenerator::generate_until(const StopRule& stop) {
  if (const auto* mc = std::get_if<StopMaxCount>(&stop)) {
    while (static_cast<std::int64_t>(emitted_.size()) < mc->n && next()) {
    }
  } else if (const auto* t = std::get_if<StopMaxCurvature>(&stop)) {
    while (!frontier_.empty() && frontier_.top().curvature <= t->t && next()) {
    }
  } else if (const auto* r = std::get_if<StopMinResidual>(&stop)) {
    double floor = 1e-13 * domain_.exact_area();
    if (!(r->area >= floor)) {
      throw invalid_input_error("min_residual target " + std::to_string(r->area) +
                                " is below achievable precision (" + std::to_string(floor) + ")");
    }
    while (stats().residual_area > r->area && next()) {
    }
  }
  return stats();
}

std::int64_t count_by_curvature(std::span<const EmittedCircle> emitted, double T) {
  // emission order is non-increasing in radius, hence non-decreasing in curvature
  auto it = std::upper_bound(emitted.begin(), emitted.end(), T,
                             [](double t, const EmittedCircle& e) { return t < e.circle.curvature; });
  return static_cast<std::int64_t>(it - emitted.begin());
}

std::vector<std::int64_t> curvature_band_counts(std::span<const EmittedCircle> emitted, double T0,
                                                double ratio, int bands) {
  if (bands < 0 || T0 <= 0 || ratio <= 1.0) {
    throw invalid_input_error("curvature_band_counts requires T0 > 0, ratio > 1, bands >= 0");
  }
  std::vector<std::int64_t> counts;
  counts.reserve(bands);
  for (int j = 0; j < bands; ++j) {
    double lo = T0 * std::pow(ratio, j);
    double hi = T0 * std::pow(ratio, j + 1);
    std::int64_t c = 0;
    for (const EmittedCircle& e : emitted) {
      if (e.circle.curvature >= lo && e.circle.curvature < hi) ++c;
    }
    counts.push_back(c);
  }
  return counts;
}

std::vector<std::pair<std::int64_t, double>> residual_series(std::span<const EmittedCircle> emitted,
                                                             const DiskCoveredDomain& domain) {
  std::vector<std::pair<std::int64_t, double>> series;
  series.reserve(emitted.size() + 1);
  KahanSum packed;
  series.emplace_back(0, domain.exact_area());
  for (size_t i = 0; i < emitted.size(); ++i) {
    packed.add(disk_area(emitted[i].circle));
    series.emplace_back(static_cast<std::int64_t>(i) + 1, domain.exact_area() - packed.value());
  }
  return series;
}

void write_packing_dump(const std::string& path, std::span<const EmittedCircle> emitted) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write packing dump: " + path);
  out << "index,x,y,r,curvature,parent_a,parent_b,parent_c\n";
  char buf[200];
  for (size_t i = 0; i < emitted.size(); ++i) {
    const EmittedCircle& e = emitted[i];
    std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g,%.17g,%.17g,%d,%d,%d\n", i, e.circle.center.x,
                  e.circle.center.y, e.circle.radius, e.circle.curvature, e.parents[0],
                  e.parents[1], e.parents[2]);
    out << buf;
  }
  if (!out) throw io_error("failed writing packing dump: " + path);
}

std::vector<EmittedCircle> read_packing_dump(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open packing dump: " + path);
  std::string line;
  if (!std::getline(in, line)) throw io_error("empty packing dump: " + path);
  std::vector<EmittedCircle> out;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream is(line);
    size_t idx;
    double x, y, r, k;
    EmittedCircle e;
    if (!(is >> idx >> x >> y >> r >> k >> e.parents[0] >> e.parents[1] >> e.parents[2])) {
      throw io_error("malformed packing dump row in " + path + ": " + line);
    }
    e.circle = Circle{{x, y}, r, k};
    out.push_back(e);
  }
  return out;
}

}  // namespace diskqmc
