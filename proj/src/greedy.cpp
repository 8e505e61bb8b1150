#include "diskqmc/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace diskqmc {

ConvexRegion ConvexRegion::square(double side) {
  if (!(side > 0)) throw invalid_input_error("square side must be positive");
  ConvexRegion r;
  r.kind = Kind::Square;
  r.p0 = side;
  r.exact_area = side * side;
  return r;
}

ConvexRegion ConvexRegion::disk(double radius) {
  if (!(radius > 0)) throw invalid_input_error("disk radius must be positive");
  ConvexRegion r;
  r.kind = Kind::Disk;
  r.p0 = radius;
  r.exact_area = kPi * radius * radius;
  return r;
}

ConvexRegion ConvexRegion::ellipse(double a, double b) {
  if (!(a > 0) || !(b > 0)) throw invalid_input_error("ellipse semi-axes must be positive");
  ConvexRegion r;
  r.kind = Kind::Ellipse;
  r.p0 = a;
  r.p1 = b;
  r.exact_area = kPi * a * b;
  return r;
}

bool ConvexRegion::contains(Vec2 p) const {
  switch (kind) {
    case Kind::Square:
      return p.x >= 0 && p.x <= p0 && p.y >= 0 && p.y <= p0;
    case Kind::Disk:
      return p.x * p.x + p.y * p.y <= p0 * p0;
    case Kind::Ellipse:
      return (p.x / p0) * (p.x / p0) + (p.y / p1) * (p.y / p1) <= 1.0;
  }
  return false;
}

namespace {

// Distance from an interior point to an origin-centered axis-aligned ellipse
// boundary (Eberly's bisection on the first-quadrant problem, a >= b).
double ellipse_boundary_distance(double a, double b, double x, double y) {
  x = std::abs(x);
  y = std::abs(y);
  if (a < b) {
    std::swap(a, b);
    std::swap(x, y);
  }
  if (x == 0.0 && y == 0.0) return b;
  if (y == 0.0) {
    double cusp = (a * a - b * b) / a;
    if (x >= cusp) return a - x;
    double ct = a * x / (a * a - b * b);
    double px = a * ct;
    double py = b * std::sqrt(std::max(0.0, 1.0 - ct * ct));
    return std::sqrt((px - x) * (px - x) + py * py);
  }
  // bisection on t in [t0,t1]: closest point (a^2 x/(t+a^2), b^2 y/(t+b^2))
  auto f = [&](double t) {
    double u = a * x / (t + a * a);
    double v = b * y / (t + b * b);
    return u * u + v * v - 1.0;
  };
  double t0 = -b * b + b * y;  // f(t0) >= 0 for interior points
  double t1 = -b * b + std::sqrt(a * a * x * x + b * b * y * y);  // f(t1) <= 0
  for (int i = 0; i < 200; ++i) {
    double tm = 0.5 * (t0 + t1);
    if (tm == t0 || tm == t1) break;
    (f(tm) >= 0.0 ? t0 : t1) = tm;
  }
  double t = 0.5 * (t0 + t1);
  double px = a * a * x / (t + a * a);
  double py = b * b * y / (t + b * b);
  return std::sqrt((px - x) * (px - x) + (py - y) * (py - y));
}

}  // namespace

double ConvexRegion::boundary_distance(Vec2 p) const {
  if (!contains(p)) return 0.0;
  switch (kind) {
    case Kind::Square:
      return std::min(std::min(p.x, p0 - p.x), std::min(p.y, p0 - p.y));
    case Kind::Disk:
      return p0 - norm(p);
    case Kind::Ellipse:
      return ellipse_boundary_distance(p0, p1, p.x, p.y);
  }
  return 0.0;
}

std::array<Vec2, 2> ConvexRegion::bounding_box() const {
  switch (kind) {
    case Kind::Square:
      return {Vec2{0.0, 0.0}, Vec2{p0, p0}};
    case Kind::Disk:
      return {Vec2{-p0, -p0}, Vec2{p0, p0}};
    case Kind::Ellipse:
      return {Vec2{-p0, -p1}, Vec2{p0, p1}};
  }
  return {};
}

std::string ConvexRegion::describe() const {
  char buf[80];
  switch (kind) {
    case Kind::Square:
      std::snprintf(buf, sizeof buf, "square:%g", p0);
      break;
    case Kind::Disk:
      std::snprintf(buf, sizeof buf, "disk:%g", p0);
      break;
    case Kind::Ellipse:
      std::snprintf(buf, sizeof buf, "ellipse:%g,%g", p0, p1);
      break;
  }
  return buf;
}

GreedyPacker::GreedyPacker(const ConvexRegion& region, std::uint64_t seed)
    : region_(region), rng_(seed), levels_(kMaxLevel + 1) {
  auto box = region_.bounding_box();
  origin_ = box[0];
  extent_ = std::max(box[1].x - box[0].x, box[1].y - box[0].y);
}

std::uint64_t GreedyPacker::cell_key(int level, Vec2 p) const {
  double cell = extent_ / static_cast<double>(1 << level);
  auto ix = static_cast<std::int64_t>(std::floor((p.x - origin_.x) / cell));
  auto iy = static_cast<std::int64_t>(std::floor((p.y - origin_.y) / cell));
  return (static_cast<std::uint64_t>(ix) << 32) ^ (static_cast<std::uint64_t>(iy) & 0xffffffffULL);
}

void GreedyPacker::insert(const Circle& c) {
  int level = kMinLevel;
  while (level < kMaxLevel && extent_ / static_cast<double>(1 << (level + 1)) >= c.radius) {
    ++level;
  }
  levels_[level][cell_key(level, c.center)].push_back(static_cast<std::uint32_t>(placed_.size()));
  placed_.push_back(c);
  packed_.add(disk_area(c));
}

bool GreedyPacker::covered(Vec2 p) const {
  for (int level = kMinLevel; level <= kMaxLevel; ++level) {
    if (levels_[level].empty()) continue;
    double cell = extent_ / static_cast<double>(1 << level);
    for (int dx = -1; dx <= 1; ++dx) {
      for (int dy = -1; dy <= 1; ++dy) {
        auto it = levels_[level].find(cell_key(level, {p.x + dx * cell, p.y + dy * cell}));
        if (it == levels_[level].end()) continue;
        for (std::uint32_t idx : it->second) {
          const Circle& c = placed_[idx];
          Vec2 d = p - c.center;
          if (d.x * d.x + d.y * d.y <= c.radius * c.radius) return true;
        }
      }
    }
  }
  return false;
}

double GreedyPacker::free_radius(Vec2 p) const {
  double best = region_.boundary_distance(p);
  for (int level = kMinLevel; level <= kMaxLevel; ++level) {
    const auto& grid = levels_[level];
    if (grid.empty()) continue;
    double cell = extent_ / static_cast<double>(1 << level);
    // a disk at this level can beat `best` only if its center is within
    // best + cell (radius <= cell) of p
    auto reach = static_cast<std::int64_t>(std::ceil((best + cell) / cell));
    auto ring_cells = (2 * reach + 1) * (2 * reach + 1);
    if (ring_cells >= static_cast<std::int64_t>(grid.size())) {
      for (const auto& [key, bucket] : grid) {
        for (std::uint32_t idx : bucket) {
          const Circle& c = placed_[idx];
          best = std::min(best, dist(p, c.center) - c.radius);
        }
      }
      continue;
    }
    for (std::int64_t dx = -reach; dx <= reach; ++dx) {
      for (std::int64_t dy = -reach; dy <= reach; ++dy) {
        auto it = grid.find(cell_key(level, {p.x + dx * cell, p.y + dy * cell}));
        if (it == grid.end()) continue;
        for (std::uint32_t idx : it->second) {
          const Circle& c = placed_[idx];
          best = std::min(best, dist(p, c.center) - c.radius);
        }
      }
    }
  }
  return best;
}

GreedyPacker::StepResult GreedyPacker::step() {
  ++attempts_;
  auto box = region_.bounding_box();
  Vec2 p{rng_.uniform(box[0].x, box[1].x), rng_.uniform(box[0].y, box[1].y)};
  if (!region_.contains(p) || covered(p)) return {false, Circle{}};
  double r = free_radius(p);
  if (!(r > 0.0)) return {false, Circle{}};
  Circle c = make_circle(p, r);
  insert(c);
  return {true, c};
}

GreedyRun greedy_run(const ConvexRegion& region, std::int64_t target_n, std::uint64_t seed,
                     std::int64_t stall_limit) {
  if (target_n < 1) throw invalid_input_error("greedy_run requires target_n >= 1");
  GreedyPacker packer(region, seed);
  GreedyRun run;
  std::int64_t consecutive_rejections = 0;
  while (run.accepted < target_n) {
    auto res = packer.step();
    if (res.accepted) {
      ++run.accepted;
      consecutive_rejections = 0;
      run.series.push_back({run.accepted, packer.residual(), res.circle.radius});
    } else if (++consecutive_rejections >= stall_limit) {
      run.stalled = true;
      break;
    }
  }
  run.attempts = packer.attempts();
  return run;
}

void write_greedy_dump(const std::string& path, const GreedyRun& run) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot write greedy dump: " + path);
  out << "N,residual,radius_accepted\n";
  char buf[120];
  for (const GreedySample& s : run.series) {
    std::snprintf(buf, sizeof buf, "%lld,%.17g,%.17g\n", static_cast<long long>(s.n), s.residual,
                  s.radius);
    out << buf;
  }
  if (!out) throw io_error("failed writing greedy dump: " + path);
}

}  // namespace diskqmc
