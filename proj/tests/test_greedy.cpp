#include <cmath>

#include "diskqmc/greedy.hpp"
#include "doctest.h"

using namespace diskqmc;

TEST_CASE("region geometry") {
  auto square = ConvexRegion::square(1.0);
  CHECK(square.exact_area == doctest::Approx(1.0));
  CHECK(square.contains({0.5, 0.5}));
  CHECK_FALSE(square.contains({1.5, 0.5}));
  CHECK(square.boundary_distance({0.25, 0.5}) == doctest::Approx(0.25));

  auto disk = ConvexRegion::disk(1.0);
  CHECK(disk.boundary_distance({0, 0}) == doctest::Approx(1.0));
  CHECK(disk.boundary_distance({0.5, 0}) == doctest::Approx(0.5));

  auto ell = ConvexRegion::ellipse(2.0, 1.0);
  CHECK(ell.exact_area == doctest::Approx(2.0 * kPi));
  CHECK(ell.boundary_distance({0, 0}) == doctest::Approx(1.0));
  CHECK(ell.boundary_distance({1.9, 0}) == doctest::Approx(0.1).epsilon(1e-9));
  CHECK(ell.boundary_distance({0, 0.9}) == doctest::Approx(0.1).epsilon(1e-9));

  SUBCASE("a disk of the boundary-distance radius stays inside the ellipse") {
    Xoshiro256 rng(31337);
    for (int i = 0; i < 200; ++i) {
      Vec2 p{rng.uniform(-2, 2), rng.uniform(-1, 1)};
      if (!ell.contains(p)) continue;
      double r = ell.boundary_distance(p);
      for (int j = 0; j < 64; ++j) {
        double a = 2.0 * kPi * j / 64;
        Vec2 q{p.x + r * std::cos(a), p.y + r * std::sin(a)};
        CHECK((q.x / 2.0) * (q.x / 2.0) + q.y * q.y <= 1.0 + 1e-9);
      }
    }
  }
}

TEST_CASE("packer primitives match the step contract") {
  auto square = ConvexRegion::square(1.0);
  GreedyPacker packer(square, 7);
  CHECK_FALSE(packer.covered({0.5, 0.5}));
  CHECK(packer.free_radius({0.5, 0.5}) == doctest::Approx(0.5));

  auto disk_region = ConvexRegion::disk(1.0);
  GreedyPacker fresh(disk_region, 7);
  CHECK(fresh.free_radius({0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("free radius accounts for placed disks exactly") {
  auto square = ConvexRegion::square(1.0);
  GreedyPacker packer(square, 11);
  // drive steps until something lands, then verify against a direct scan
  for (int i = 0; i < 2000 && packer.placed().size() < 60; ++i) packer.step();
  REQUIRE(packer.placed().size() >= 60);
  Xoshiro256 rng(99);
  for (int i = 0; i < 500; ++i) {
    Vec2 p{rng.next_double(), rng.next_double()};
    double naive = square.boundary_distance(p);
    for (const Circle& c : packer.placed()) {
      naive = std::min(naive, dist(p, c.center) - c.radius);
    }
    CHECK(packer.free_radius(p) == naive);  // same min over the same set, bit for bit
  }
}

TEST_CASE("the documented worked example") {
  // unit square, one disk at (0.75, 0.5) with r = 0.25; at p = (0.25, 0.5)
  // both the boundary and the disk allow exactly 0.25
  auto square = ConvexRegion::square(1.0);
  double boundary = square.boundary_distance({0.25, 0.5});
  Circle placed = make_circle({0.75, 0.5}, 0.25);
  double from_disk = dist({0.25, 0.5}, placed.center) - placed.radius;
  CHECK(boundary == doctest::Approx(0.25));
  CHECK(from_disk == doctest::Approx(0.25));
  CHECK(std::min(boundary, from_disk) == doctest::Approx(0.25));
}

TEST_CASE("greedy runs are deterministic and well formed") {
  auto square = ConvexRegion::square(1.0);
  GreedyRun a = greedy_run(square, 400, 12345);
  GreedyRun b = greedy_run(square, 400, 12345);
  REQUIRE(a.series.size() == b.series.size());
  CHECK(a.attempts == b.attempts);
  for (size_t i = 0; i < a.series.size(); ++i) {
    CHECK(a.series[i].residual == b.series[i].residual);
    CHECK(a.series[i].radius == b.series[i].radius);
  }
  GreedyRun c = greedy_run(square, 400, 54321);
  CHECK(c.series.back().residual != a.series.back().residual);

  SUBCASE("residuals decrease strictly and stay positive") {
    for (size_t i = 1; i < a.series.size(); ++i) {
      CHECK(a.series[i].residual < a.series[i - 1].residual);
      CHECK(a.series[i].residual > 0.0);
    }
  }
}

TEST_CASE("placed disks stay disjoint and inside the region") {
  for (auto region : {ConvexRegion::square(1.0), ConvexRegion::disk(1.0),
                      ConvexRegion::ellipse(1.5, 0.8)}) {
    GreedyRun run = greedy_run(region, 300, 2024);
    GreedyPacker replay(region, 2024);
    while (replay.placed().size() < 300) replay.step();
    const auto& placed = replay.placed();
    for (size_t i = 0; i < placed.size(); ++i) {
      CHECK(region.boundary_distance(placed[i].center) >= placed[i].radius - 1e-9);
      for (size_t j = i + 1; j < placed.size(); ++j) {
        CHECK(dist(placed[i].center, placed[j].center) >=
              placed[i].radius + placed[j].radius - 1e-9);
      }
    }
  }
}

TEST_CASE("stall reporting") {
  // with a 1-rejection stall limit the first sample falling outside the disk
  // region aborts the run; seed 7 does so on its first draw
  auto region = ConvexRegion::disk(1.0);
  Xoshiro256 probe(7);
  double x = -1.0 + 2.0 * probe.next_double();
  double y = -1.0 + 2.0 * probe.next_double();
  REQUIRE(x * x + y * y > 1.0);  // seed picked for this property
  GreedyRun run = greedy_run(region, 10, 7, 1);
  CHECK(run.stalled);
  CHECK(run.accepted < 10);
}
