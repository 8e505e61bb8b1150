#pragma once

#include <cstdint>
#include <optional>
#include <queue>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "diskqmc/domain.hpp"
#include "diskqmc/rng.hpp"

namespace diskqmc {

// A packing circle with the emission indices of its three parents
// (-1,-1,-1 for base disks).
struct EmittedCircle {
  Circle circle;
  std::array<std::int32_t, 3> parents{-1, -1, -1};
};

struct PackingStats {
  std::int64_t count = 0;
  double max_curvature_emitted = 0.0;
  double packed_area = 0.0;
  double residual_area = 0.0;
};

struct StopMaxCount {
  std::int64_t n;
};
struct StopMaxCurvature {
  double t;
};
struct StopMinResidual {
  double area;
};
using StopRule = std::variant<StopMaxCount, StopMaxCurvature, StopMinResidual>;

// Emits the base disks and all Apollonian circles of every gap in globally
// non-increasing size order. One priority structure holds base disks (as
// pseudo-gaps keyed by their radius) and pending gaps (keyed by the
// precomputed inscribed-circle radius); since a child gap's inscribed circle
// is strictly smaller than its parent's, largest-first popping is globally
// size-sorted. Ties break on (center.x, center.y, push sequence), so the
// sequence is bit-identical across runs.
class PackingGenerator {
 public:
  explicit PackingGenerator(const DiskCoveredDomain& domain);

  // Next circle in size order, or nullopt when the frontier is exhausted
  // (only possible for gap-free domains). Throws geometry_error if the
  // radius underflow guard trips (radius < 1e-9 x largest base radius).
  std::optional<EmittedCircle> next();

  bool exhausted() const { return frontier_.empty(); }
  const DiskCoveredDomain& domain() const { return domain_; }
  const std::vector<EmittedCircle>& emitted() const { return emitted_; }
  PackingStats stats() const;

  // Advances until the stop rule triggers and returns the stats snapshot.
  // StopMaxCurvature emits exactly the circles with curvature <= t.
  PackingStats generate_until(const StopRule& stop);

 private:
  struct Entry {
    double radius;
    double x, y;
    double curvature;
    std::uint32_t seq;
    std::int32_t base_index;                  // >=0: base-disk pseudo-gap
    std::array<std::int32_t, 3> members{};    // gap parents
    bool members_are_domain_indices = false;  // true for gaps seeded from the domain
  };
  struct PopsLater {
    bool operator()(const Entry& a, const Entry& b) const;
  };

  void push_gap(const Circle& a, const Circle& b, const Circle& c,
                std::array<std::int32_t, 3> members, bool domain_indices);
  Circle member_circle(const Entry& e, int slot) const;
  std::int32_t member_emission_index(const Entry& e, int slot) const;

  const DiskCoveredDomain& domain_;
  std::priority_queue<Entry, std::vector<Entry>, PopsLater> frontier_;
  std::vector<EmittedCircle> emitted_;
  std::vector<std::int32_t> base_emission_index_;
  KahanSum packed_area_;
  double max_curvature_ = 0.0;
  double min_radius_guard_ = 0.0;
  std::uint32_t next_seq_ = 0;
};

// #{ i : curvature(E_i) <= T }. The list must be complete up to T, i.e.
// generated with max_curvature >= T (caller contract).
std::int64_t count_by_curvature(std::span<const EmittedCircle> emitted, double T);

// Counts of circles with curvature in [T0*ratio^j, T0*ratio^(j+1)), j = 0..bands-1.
std::vector<std::int64_t> curvature_band_counts(std::span<const EmittedCircle> emitted, double T0,
                                                double ratio, int bands);

// (N, exact_area - sum of first N disk areas) for N = 0..size.
std::vector<std::pair<std::int64_t, double>> residual_series(std::span<const EmittedCircle> emitted,
                                                             const DiskCoveredDomain& domain);

// CSV dump: index,x,y,r,curvature,parent_a,parent_b,parent_c.
void write_packing_dump(const std::string& path, std::span<const EmittedCircle> emitted);
std::vector<EmittedCircle> read_packing_dump(const std::string& path);

// Depth-first visit of every packing circle with curvature <= max_curvature
// (base disks included). Emits the same set as a size-ordered run stopped at
// that curvature but needs only O(depth) memory, so it scales to the very
// deep prefixes used for reference integration. Deterministic order.
template <class Visitor>
void walk_packing(const DiskCoveredDomain& domain, double max_curvature, Visitor&& visit) {
  struct PendingGap {
    Circle a, b, c;
  };
  const TangencyTolerance& tol = domain.tolerance();
  std::vector<PendingGap> stack;
  for (const Circle& c : domain.base_disks()) {
    if (c.curvature <= max_curvature) visit(c);
  }
  for (const Gap& g : domain.gaps()) {
    stack.push_back({domain.base_disks()[g.members[0]], domain.base_disks()[g.members[1]],
                     domain.base_disks()[g.members[2]]});
  }
  while (!stack.empty()) {
    PendingGap g = stack.back();
    stack.pop_back();
    double k4 = descartes_fourth_curvature(g.a.curvature, g.b.curvature, g.c.curvature,
                                           DescartesRoot::inner);
    if (k4 > max_curvature) continue;  // all descendants are smaller still
    Circle d = descartes_fourth_center(g.a, g.b, g.c, k4, tol);
    visit(d);
    stack.push_back({g.a, g.b, d});
    stack.push_back({g.a, g.c, d});
    stack.push_back({g.b, g.c, d});
  }
}

}  // namespace diskqmc
