#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "diskqmc/geometry.hpp"
#include "diskqmc/rng.hpp"

namespace diskqmc {

// Convex comparison regions for the randomized greedy packer.
struct ConvexRegion {
  enum class Kind { Square, Disk, Ellipse };

  static ConvexRegion square(double side);
  static ConvexRegion disk(double radius);
  static ConvexRegion ellipse(double a, double b);

  bool contains(Vec2 p) const;
  // Distance from an interior point to the boundary (0 outside).
  double boundary_distance(Vec2 p) const;
  std::array<Vec2, 2> bounding_box() const;

  std::string describe() const;

  Kind kind = Kind::Square;
  double p0 = 1.0;  // side / radius / semi-axis a
  double p1 = 1.0;  // semi-axis b
  double exact_area = 1.0;
};

struct GreedySample {
  std::int64_t n;
  double residual;
  double radius;
};

struct GreedyRun {
  std::vector<GreedySample> series;  // one entry per acceptance
  std::int64_t attempts = 0;
  std::int64_t accepted = 0;
  bool stalled = false;
};

// One randomized greedy packer state: sample a uniform point in the bounding
// box; reject if outside the region or covered; otherwise place the largest
// disk centered there that stays inside the region and overlaps nothing.
// Bit-identical runs for identical (region, seed).
class GreedyPacker {
 public:
  GreedyPacker(const ConvexRegion& region, std::uint64_t seed);

  struct StepResult {
    bool accepted;
    Circle circle;  // valid when accepted
  };
  StepResult step();

  const std::vector<Circle>& placed() const { return placed_; }
  std::int64_t attempts() const { return attempts_; }
  double residual() const { return region_.exact_area - packed_.value(); }

  // Largest admissible radius centered at p (ignores coverage).
  double free_radius(Vec2 p) const;
  bool covered(Vec2 p) const;

 private:
  void insert(const Circle& c);
  std::uint64_t cell_key(int level, Vec2 p) const;

  ConvexRegion region_;
  Xoshiro256 rng_;
  std::vector<Circle> placed_;
  KahanSum packed_;
  std::int64_t attempts_ = 0;

  // radius-class grids: level l holds disks with r <= cell size bbox/2^l
  static constexpr int kMinLevel = 1;
  static constexpr int kMaxLevel = 14;
  Vec2 origin_{};
  double extent_ = 1.0;
  std::vector<std::unordered_map<std::uint64_t, std::vector<std::uint32_t>>> levels_;
};

// Runs until target_n acceptances (or a stall of `stall_limit` consecutive
// rejections, reported in the result); series entries are exact bookkeeping.
GreedyRun greedy_run(const ConvexRegion& region, std::int64_t target_n, std::uint64_t seed,
                     std::int64_t stall_limit = 10'000'000);

// CSV dump: N,residual,radius_accepted.
void write_greedy_dump(const std::string& path, const GreedyRun& run);

}  // namespace diskqmc
