#include <cmath>
#include <cstdio>
#include <fstream>

#include "diskqmc/cubature.hpp"
#include "diskqmc/rng.hpp"
#include "doctest.h"

using namespace diskqmc;

namespace {

const double kGapArea = 0.16125448077398067;  // sqrt(3) - pi/2

}  // namespace

TEST_CASE("build_rule prefixes") {
  auto dom = build_three_tangent(1, 1, 1);
  PackingGenerator gen(dom);
  gen.generate_until(StopMaxCount{100});

  auto r0 = build_rule(gen.emitted(), 0, dom);
  CHECK(r0.size() == 0);
  CHECK(r0.residual_bound == doctest::Approx(dom.exact_area()));

  auto r3 = build_rule(gen.emitted(), 3, dom);
  for (double w : r3.weights) CHECK(w == doctest::Approx(kPi));
  CHECK(r3.residual_bound == doctest::Approx(kGapArea).epsilon(1e-11));

  auto r4 = build_rule(gen.emitted(), 4, dom);
  CHECK(r4.weights[3] ==
        doctest::Approx(kPi * 0.15470053837925153 * 0.15470053837925153).epsilon(1e-12));

  CHECK_THROWS_AS(build_rule(gen.emitted(), 101, dom), std::out_of_range);

  SUBCASE("rules nest: deeper rules extend, never change") {
    for (std::int64_t n = 1; n <= 99; n += 7) {
      auto a = build_rule(gen.emitted(), n, dom);
      auto b = build_rule(gen.emitted(), n + 1, dom);
      for (std::int64_t i = 0; i < n; ++i) {
        CHECK(a.nodes[i] == b.nodes[i]);
        CHECK(a.weights[i] == b.weights[i]);
      }
    }
  }

  SUBCASE("weights positive, total below the exact area") {
    auto r = build_rule(gen.emitted(), 100, dom);
    double total = 0.0;
    for (double w : r.weights) {
      CHECK(w > 0.0);
      total += w;
    }
    CHECK(total < dom.exact_area());
  }
}

TEST_CASE("integration examples with exactly known answers") {
  auto dom = build_three_tangent(1, 1, 1);
  PackingGenerator gen(dom);
  gen.generate_until(StopMaxCount{10});

  SUBCASE("constant function: error equals the residual bound identically") {
    auto rule = build_rule(gen.emitted(), 3, dom);
    auto res = integrate(rule, HarmonicFn::constant(1.0), 1.0);
    CHECK(res.estimate == doctest::Approx(3.0 * kPi));
    CHECK(std::abs(res.estimate - dom.exact_area()) ==
          doctest::Approx(rule.residual_bound).epsilon(1e-12));
  }

  SUBCASE("u = x at the three base-disk centers") {
    auto rule = build_rule(gen.emitted(), 3, dom);
    auto res = integrate(rule, HarmonicFn::poly_re(1), 3.0);
    CHECK(res.estimate == doctest::Approx(3.0 * kPi).epsilon(1e-13));
  }

  SUBCASE("mean value on a single-disk domain integrates x^2-y^2 exactly") {
    DiskCoveredDomain one({make_circle({1, 0}, 1)}, {});
    PackingGenerator g(one);
    g.generate_until(StopMaxCount{1});
    auto rule = build_rule(g.emitted(), 1, one);
    auto res = integrate(rule, HarmonicFn::poly_re(2), 1.0);
    CHECK(res.estimate == doctest::Approx(kPi).epsilon(1e-13));  // area * u(center) = pi * 1
  }
}

TEST_CASE("mean value property via the polar tensor rule") {
  CHECK(mean_value_check(HarmonicFn::constant(1.0), make_circle({2, 1}, 0.5)) <= 1e-14);
  CHECK(mean_value_check(HarmonicFn::poly_re(2), make_circle({1, 0}, 1)) <= 1e-10);
  CHECK(mean_value_check(HarmonicFn::poly_re(3), make_circle({-2, 3}, 2)) <= 1e-10);

  Xoshiro256 rng(555);
  for (int i = 0; i < 20; ++i) {
    Circle disk = make_circle({rng.uniform(-5, 5), rng.uniform(-5, 5)}, rng.uniform(0.1, 3.0));
    for (int m = 0; m <= 5; ++m) {
      CHECK(mean_value_check(HarmonicFn::poly_re(m, {0.5, -0.5}), disk) <= 1e-10);
      CHECK(mean_value_check(HarmonicFn::poly_im(m, {0.5, -0.5}), disk) <= 1e-10);
    }
  }
}

TEST_CASE("gauss-legendre integrates monomials exactly") {
  std::vector<double> xs, ws;
  gauss_legendre(16, xs, ws);
  for (int k = 0; k <= 31; ++k) {
    double s = 0.0;
    for (int i = 0; i < 16; ++i) s += ws[i] * std::pow(xs[i], k);
    CHECK(s == doctest::Approx(1.0 / (k + 1)).epsilon(1e-13));
  }
}

TEST_CASE("sup-norm estimates") {
  auto dom = build_three_tangent(1, 1, 1);

  SUBCASE("closed-form bound dominates the sampled maximum") {
    std::vector<HarmonicFn> fns = {HarmonicFn::constant(3.0), HarmonicFn::poly_re(2, {10, 10}),
                                   HarmonicFn::poly_im(5, {10, 10}), HarmonicFn::log_pole({10, 10}),
                                   HarmonicFn::exp_cos()};
    for (const auto& u : fns) {
      double sampled = supnorm_sampled(u, dom, 256, 1.0);  // no inflation: raw boundary max
      CHECK(supnorm_bound(u, dom) >= sampled);
    }
  }

  SUBCASE("pole inside the domain is rejected") {
    CHECK_THROWS_AS(supnorm_bound(HarmonicFn::log_pole({0, 0}), dom), invalid_input_error);
  }

  SUBCASE("sampled estimate drives the default integrate overload") {
    PackingGenerator gen(dom);
    gen.generate_until(StopMaxCount{50});
    auto rule = build_rule(gen.emitted(), 50, dom);
    HarmonicFn u = HarmonicFn::poly_re(2, {10, 10});
    double sampled = supnorm_sampled(u, dom);
    auto via_domain = integrate(rule, u, dom);
    auto via_value = integrate(rule, u, sampled);
    CHECK(via_domain.estimate == via_value.estimate);
    CHECK(via_domain.certified_bound == via_value.certified_bound);
    CHECK(supnorm_sampled(HarmonicFn::constant(2.0), dom) == doctest::Approx(2.0 * 1.05));
  }
}

TEST_CASE("reference integrals") {
  auto dom = build_three_tangent(1, 1, 1);

  SUBCASE("constant reference recovers the exact area within its certificate") {
    auto ref = reference_integral(dom, HarmonicFn::constant(1.0), 1e-4, 1.0);
    CHECK(ref.achieved_residual <= 1e-4);
    CHECK(std::abs(ref.value - dom.exact_area()) <= ref.uncertainty);
  }

  SUBCASE("self-consistency across two target depths") {
    HarmonicFn u = HarmonicFn::exp_cos();
    double sn = supnorm_bound(u, dom);
    auto a = reference_integral(dom, u, 1e-4, sn);
    auto b = reference_integral(dom, u, 1e-5, sn);
    CHECK(std::abs(a.value - b.value) <= a.uncertainty + b.uncertainty);
  }

  SUBCASE("deep packing agrees with the independent adaptive quadrature") {
    HarmonicFn u = HarmonicFn::poly_re(2, {10, 10});
    double sn = supnorm_bound(u, dom);
    auto packing = reference_integral(dom, u, 1e-5, sn);
    auto quad = integrate_quadrature(dom, u);
    CHECK(std::abs(packing.value - quad.value) <= packing.uncertainty + quad.error_estimate);
  }

  SUBCASE("unachievable target refuses") {
    CHECK_THROWS_AS(reference_integral(dom, HarmonicFn::constant(1.0), 1e-30, 1.0),
                    invalid_input_error);
  }
}

TEST_CASE("normalized poly family stays below the single m-independent bound") {
  auto dom = build_three_tangent(1, 1, 1);
  PackingGenerator gen(dom);
  gen.generate_until(StopMaxCount{1000});
  auto rule = build_rule(gen.emitted(), 1000, dom);
  Vec2 z0{10, 10};
  double R = dom.max_dist_from(z0);
  for (int m = 1; m <= 8; ++m) {
    HarmonicFn u = HarmonicFn::scaled(1.0 / std::pow(R, m), HarmonicFn::poly_re(m, z0));
    auto quad = integrate_quadrature(dom, u);
    auto res = integrate(rule, u, 1.0);  // sup norm of the normalized family is <= 1
    CHECK(std::abs(res.estimate - quad.value) <= rule.residual_bound + quad.error_estimate);
  }
}

TEST_CASE("rule dump carries the trailing bound row") {
  auto dom = build_three_tangent(1, 1, 1);
  PackingGenerator gen(dom);
  gen.generate_until(StopMaxCount{20});
  auto rule = build_rule(gen.emitted(), 20, dom);
  std::string path = "diskqmc_rule_dump_test.csv";
  write_rule_dump(path, rule);
  std::ifstream in(path);
  std::string line, last;
  std::getline(in, line);
  CHECK(line == "index,x,y,weight");
  int rows = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) last = line;
    rows += !line.empty() && line[0] != '#';
  }
  CHECK(rows == 20);
  CHECK(last.rfind("# N=20 residual_bound=", 0) == 0);
  std::remove(path.c_str());
}

TEST_CASE("quadrature oracle on exactly integrable cases") {
  auto dom = build_three_tangent(1, 1, 1);
  auto q = integrate_quadrature(dom, HarmonicFn::constant(1.0));
  CHECK(q.value == doctest::Approx(dom.exact_area()).epsilon(1e-12));

  DiskCoveredDomain one({make_circle({1, 0}, 1)}, {});
  auto q2 = integrate_quadrature(one, HarmonicFn::poly_re(2));
  CHECK(q2.value == doctest::Approx(kPi).epsilon(1e-13));
}
