#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "diskqmc/geometry.hpp"

namespace diskqmc {

// Closed-form harmonic test functions: constants, Re/Im (z-z0)^m, log|z-z0|
// (pole outside the domain), e^x cos y, and linear combinations of these.
class HarmonicFn {
 public:
  enum class Kind { Constant, PolyRe, PolyIm, LogPole, ExpCos, Combo };

  static HarmonicFn constant(double c);
  static HarmonicFn poly_re(int degree, Vec2 z0 = {0.0, 0.0});
  static HarmonicFn poly_im(int degree, Vec2 z0 = {0.0, 0.0});
  static HarmonicFn log_pole(Vec2 z0);
  static HarmonicFn exp_cos();
  static HarmonicFn combo(std::vector<std::pair<double, HarmonicFn>> terms);
  static HarmonicFn scaled(double weight, const HarmonicFn& f);

  double operator()(double x, double y) const;
  double operator()(Vec2 p) const { return (*this)(p.x, p.y); }

  Kind kind() const { return kind_; }
  int degree() const { return degree_; }
  Vec2 pole() const { return z0_; }
  double constant_value() const { return c_; }
  const std::vector<std::pair<double, HarmonicFn>>& terms() const { return terms_; }

  std::string describe() const;

  // 5-point discrete Laplacian at p with step h, scaled by max(1, |u(p)|).
  // Small for every function this class can represent.
  double laplacian_residual(Vec2 p, double h = 1e-4) const;

  // Parse "const:<c>", "re:<m>[@x,y]", "im:<m>[@x,y]", "log@x,y", "expcos".
  static HarmonicFn parse(const std::string& spec);

 private:
  HarmonicFn() = default;

  Kind kind_ = Kind::Constant;
  double c_ = 0.0;
  int degree_ = 0;
  Vec2 z0_{0.0, 0.0};
  std::vector<std::pair<double, HarmonicFn>> terms_;
};

}  // namespace diskqmc
