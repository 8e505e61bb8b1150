// Acceptance suite: one pass/fail line per criterion, nonzero exit when any
// criterion fails. Heavier than the unit tests; expected wall clock is a
// couple of minutes in a release build.

#include <chrono>
#include <cstdarg>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "diskqmc/experiments.hpp"
#include "diskqmc/rng.hpp"

using namespace diskqmc;
using clock_type = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail,
            double seconds) {
  std::printf("[%s] criterion %02d %-22s %s (%.1f s)\n", pass ? "PASS" : "FAIL", id, name.c_str(),
              detail.c_str(), seconds);
  std::fflush(stdout);
  failures += !pass;
}

void run_criterion(int id, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& body) {
  auto t0 = clock_type::now();
  bool pass = false;
  std::string detail;
  try {
    auto [ok, text] = body();
    pass = ok;
    detail = text;
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  report(id, name, pass, detail, std::chrono::duration<double>(clock_type::now() - t0).count());
}

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof buf, pattern, args);
  va_end(args);
  return buf;
}

constexpr std::int64_t kRunLength = 100000;
const Vec2 kZ0{10.0, 10.0};

}  // namespace

int main() {
  auto domain = build_three_tangent(1, 1, 1);
  PackingGenerator generator(domain);
  auto t_gen = clock_type::now();
  generator.generate_until(StopMaxCount{kRunLength});
  double gen_seconds = std::chrono::duration<double>(clock_type::now() - t_gen).count();
  const auto& emitted = generator.emitted();
  auto series = residual_series(emitted, domain);

  // 1 -----------------------------------------------------------------------
  run_criterion(1, "descartes-identity", [&]() -> std::pair<bool, std::string> {
    auto t0 = clock_type::now();
    double worst = 0.0;
    for (const auto& e : emitted) {
      if (e.parents[0] < 0) continue;
      double k1 = emitted[e.parents[0]].circle.curvature;
      double k2 = emitted[e.parents[1]].circle.curvature;
      double k3 = emitted[e.parents[2]].circle.curvature;
      double k4 = e.circle.curvature;
      double lhs = (k1 + k2 + k3 + k4) * (k1 + k2 + k3 + k4);
      double rhs = 2.0 * (k1 * k1 + k2 * k2 + k3 * k3 + k4 * k4);
      worst = std::max(worst, std::abs(lhs - rhs) / rhs);
    }
    double seconds =
        gen_seconds + std::chrono::duration<double>(clock_type::now() - t0).count();
    bool pass = emitted.size() == kRunLength && worst <= 1e-9 && seconds <= 30.0;
    return {pass, fmt("max identity residual %.2e over %zu circles, %.1f s incl. generation",
                      worst, emitted.size(), seconds)};
  });

  // 2 -----------------------------------------------------------------------
  run_criterion(2, "tangency-disjointness", [&]() -> std::pair<bool, std::string> {
    const TangencyTolerance& tol = domain.tolerance();
    double worst_excess = -1.0;
    for (const auto& e : emitted) {
      if (e.parents[0] < 0) continue;
      for (int j = 0; j < 3; ++j) {
        const Circle& p = emitted[e.parents[j]].circle;
        double excess =
            std::abs(tangency_gap(e.circle, p)) - tol.allowance(e.circle.radius + p.radius);
        worst_excess = std::max(worst_excess, excess);
      }
    }
    bool tangent_ok = worst_excess <= 0.0;

    bool pairwise_ok = true;
    for (size_t i = 0; i < 500 && pairwise_ok; ++i) {
      for (size_t j = i + 1; j < 500; ++j) {
        if (!is_disjoint(emitted[i].circle, emitted[j].circle, tol)) {
          pairwise_ok = false;
          break;
        }
      }
    }

    Xoshiro256 rng(20240401);
    bool random_ok = true;
    for (int k = 0; k < 10000; ++k) {
      size_t i = rng.next_u64() % emitted.size();
      size_t j = rng.next_u64() % emitted.size();
      if (i != j && !is_disjoint(emitted[i].circle, emitted[j].circle, tol)) {
        random_ok = false;
        break;
      }
    }
    return {tangent_ok && pairwise_ok && random_ok,
            fmt("tangency excess %.2e, pairwise(500)=%s, random pairs=%s", worst_excess,
                pairwise_ok ? "ok" : "FAIL", random_ok ? "ok" : "FAIL")};
  });

  // 3 -----------------------------------------------------------------------
  run_criterion(3, "size-ordering", [&]() -> std::pair<bool, std::string> {
    for (size_t i = 1; i < emitted.size(); ++i) {
      if (emitted[i].circle.radius > emitted[i - 1].circle.radius) {
        return {false, fmt("radius increases at emission %zu", i)};
      }
    }
    return {true, fmt("non-increasing radii over %zu emissions", emitted.size())};
  });

  // 4 -----------------------------------------------------------------------
  run_criterion(4, "area-bookkeeping", [&]() -> std::pair<bool, std::string> {
    const double expected_area = 3.0 * kPi + std::sqrt(3.0) - kPi / 2.0;
    double area_err = std::abs(domain.exact_area() - expected_area) / expected_area;
    double worst = 0.0;
    for (std::int64_t n : {10LL, 100LL, 1000LL, 10000LL, 100000LL}) {
      auto rule = build_rule(emitted, n, domain);
      KahanSum weights;
      for (double w : rule.weights) weights.add(w);
      double rel = std::abs(weights.value() + rule.residual_bound - domain.exact_area()) /
                   domain.exact_area();
      worst = std::max(worst, rel);
    }
    return {worst <= 1e-10 && area_err <= 1e-12,
            fmt("bookkeeping residual %.2e, closed-form area error %.2e", worst, area_err)};
  });

  // 5 -----------------------------------------------------------------------
  run_criterion(5, "residual-exponent", [&]() -> std::pair<bool, std::string> {
    bool pass = true;
    std::string detail;
    struct Case {
      const char* name;
      DiskCoveredDomain dom;
    };
    std::vector<Case> cases;
    cases.push_back({"three-tangent", build_three_tangent(1, 1, 1)});
    cases.push_back({"lattice(2,2)", build_square_lattice(2, 2)});
    for (auto& c : cases) {
      auto t0 = clock_type::now();
      auto result = fit_residual_experiment(c.dom, 1000, kRunLength);
      double seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
      bool ok = std::abs(result.fit.slope + 0.536) <= 0.05 && result.fit.r_squared >= 0.99 &&
                seconds <= 60.0;
      pass = pass && ok;
      detail += fmt("%s slope %.4f r2 %.5f %.1fs; ", c.name, result.fit.slope,
                    result.fit.r_squared, seconds);
    }
    return {pass, detail};
  });

  // 6 -----------------------------------------------------------------------
  run_criterion(6, "counting-exponent", [&]() -> std::pair<bool, std::string> {
    auto result = fit_counting_experiment(domain, 100.0, 10000.0, 2.0, 6);
    bool pass = std::abs(result.fit.slope - 1.3057) <= 0.04 && result.fit.r_squared >= 0.99;
    return {pass, fmt("slope %.4f (target 1.3057 +- 0.04), r2 %.5f", result.fit.slope,
                      result.fit.r_squared)};
  });

  // 7 -----------------------------------------------------------------------
  run_criterion(7, "honest-certificate", [&]() -> std::pair<bool, std::string> {
    double R = domain.max_dist_from(kZ0);
    std::vector<HarmonicFn> family;
    std::vector<double> supnorms;
    for (int m = 1; m <= 8; ++m) {
      family.push_back(HarmonicFn::scaled(1.0 / std::pow(R, m), HarmonicFn::poly_re(m, kZ0)));
      supnorms.push_back(1.0);  // normalized to sup-norm at most 1
    }
    family.push_back(HarmonicFn::log_pole(kZ0));
    supnorms.push_back(supnorm_bound(family.back(), domain));
    family.push_back(HarmonicFn::exp_cos());
    supnorms.push_back(supnorm_bound(family.back(), domain));

    bool pass = true;
    std::string detail;
    for (std::int64_t n : {100LL, 1000LL, 10000LL}) {
      auto rule = build_rule(emitted, n, domain);

      // constant function against the exact integral: error == bound
      auto const_result = integrate(rule, HarmonicFn::constant(1.0), 1.0);
      double const_err = std::abs(const_result.estimate - domain.exact_area());
      bool const_ok =
          std::abs(const_err - rule.residual_bound) <= 1e-10 * std::max(rule.residual_bound, 1e-300);
      pass = pass && const_ok;

      auto refs = reference_integral_many(domain, family, series[n].second / 100.0, supnorms);
      double worst_margin = 0.0;
      for (size_t k = 0; k < family.size(); ++k) {
        auto res = integrate(rule, family[k], supnorms[k]);
        double err = std::abs(res.estimate - refs[k].value);
        double allowance = res.certified_bound + refs[k].uncertainty;
        double margin = err / allowance;
        worst_margin = std::max(worst_margin, margin);
        pass = pass && err <= allowance;
      }
      detail += fmt("N=%lld const=%s worst err/bound %.3f; ", static_cast<long long>(n),
                    const_ok ? "exact" : "FAIL", worst_margin);
    }
    return {pass, detail};
  });

  // 8 -----------------------------------------------------------------------
  run_criterion(8, "qmc-decay", [&]() -> std::pair<bool, std::string> {
    HarmonicFn u = HarmonicFn::poly_re(2, kZ0);
    auto quad = integrate_quadrature(domain, u);
    std::vector<std::pair<double, double>> errors;
    KahanSum estimate;
    std::int64_t next_idx = 0;
    const int grid_count = 25;
    for (int k = 0; k < grid_count; ++k) {
      double ln = std::log(1000.0) + (std::log(100000.0) - std::log(1000.0)) * k / (grid_count - 1);
      auto n = static_cast<std::int64_t>(std::llround(std::exp(ln)));
      for (; next_idx < n; ++next_idx) {
        const Circle& c = emitted[next_idx].circle;
        estimate.add(disk_area(c) * u(c.center));
      }
      double err = std::abs(estimate.value() - quad.value);
      if (err > 0.0) errors.emplace_back(static_cast<double>(n), err);
    }
    auto error_fit = fit_loglog(errors);

    double supnorm = supnorm_bound(u, domain);
    std::vector<std::pair<double, double>> bounds;
    for (const auto& [n, r] : series) {
      if (n >= 1000) bounds.emplace_back(static_cast<double>(n), r * supnorm);
    }
    auto bound_fit = fit_powerlaw(bounds, 1000.0, static_cast<double>(kRunLength));

    bool pass = error_fit.slope <= -0.45 && std::abs(bound_fit.slope + 0.536) <= 0.05;
    return {pass, fmt("measured slope %.4f (<= -0.45), certified slope %.4f", error_fit.slope,
                      bound_fit.slope)};
  });

  // 9 -----------------------------------------------------------------------
  run_criterion(9, "mean-value-oracle", [&]() -> std::pair<bool, std::string> {
    Xoshiro256 rng(6021023);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
      Circle disk = make_circle({rng.uniform(-5, 5), rng.uniform(-5, 5)}, rng.uniform(0.1, 3.0));
      for (int m = 0; m <= 5; ++m) {
        worst = std::max(worst, mean_value_check(HarmonicFn::poly_re(m, {0.4, -0.3}), disk));
        worst = std::max(worst, mean_value_check(HarmonicFn::poly_im(m, {0.4, -0.3}), disk));
      }
    }
    return {worst <= 1e-10, fmt("max discrepancy %.2e over 20 disks x degrees 0..5", worst)};
  });

  // 10 ----------------------------------------------------------------------
  run_criterion(10, "lp-identity", [&]() -> std::pair<bool, std::string> {
    std::vector<double> ps = {1.0, 2.0, 3.0};
    auto result = lp_check(domain, emitted, 10000, ps, 1000000, 1234567);
    bool pass = true;
    std::string detail = fmt("hits %lld; ", static_cast<long long>(result.hits));
    for (const auto& row : result.rows) {
      pass = pass && row.within_4_sigma;
      double sigmas = row.standard_error > 0
                          ? std::abs(row.measured_norm - row.expected_norm) / row.standard_error
                          : 0.0;
      detail += fmt("p=%g: %.2f sigma; ", row.p, sigmas);
    }
    return {pass, detail};
  });

  // 11 ----------------------------------------------------------------------
  run_criterion(11, "greedy-observation", [&]() -> std::pair<bool, std::string> {
    auto t0 = clock_type::now();
    std::vector<std::uint64_t> seeds = {1, 2, 3, 4, 5};
    auto result = greedy_experiment(ConvexRegion::square(1.0), 10000, seeds, 100, 10000, 1);
    double seconds = std::chrono::duration<double>(clock_type::now() - t0).count();
    double slope = result.pooled_fit.slope;
    bool pass = slope >= -0.35 && slope <= -0.10 && seconds <= 120.0;
    return {pass, fmt("pooled slope %.4f over 5 seeds (band [-0.35,-0.10]), %.1f s", slope,
                      seconds)};
  });

  // 12 ----------------------------------------------------------------------
  run_criterion(12, "determinism", [&]() -> std::pair<bool, std::string> {
    PackingGenerator repeat(domain);
    repeat.generate_until(StopMaxCount{kRunLength});
    bool emissions_ok = repeat.emitted().size() == emitted.size();
    for (size_t i = 0; emissions_ok && i < emitted.size(); ++i) {
      emissions_ok = repeat.emitted()[i].circle.center.x == emitted[i].circle.center.x &&
                     repeat.emitted()[i].circle.center.y == emitted[i].circle.center.y &&
                     repeat.emitted()[i].circle.radius == emitted[i].circle.radius &&
                     repeat.emitted()[i].parents == emitted[i].parents;
    }

    HarmonicFn u = HarmonicFn::exp_cos();
    double sn = supnorm_bound(u, domain);
    auto ref_a = reference_integral(domain, u, 1e-4, sn);
    auto ref_b = reference_integral(domain, u, 1e-4, sn);
    bool reference_ok =
        ref_a.value == ref_b.value && ref_a.achieved_residual == ref_b.achieved_residual;

    std::vector<std::int64_t> grid = {10, 100, 1000};
    auto rows_a = converge_table(domain, HarmonicFn::poly_re(2, kZ0), grid, ReferenceMode::Quadrature);
    auto rows_b = converge_table(domain, HarmonicFn::poly_re(2, kZ0), grid, ReferenceMode::Quadrature);
    bool table_ok = true;
    for (size_t i = 0; i < rows_a.size(); ++i) {
      table_ok = table_ok && rows_a[i].estimate == rows_b[i].estimate &&
                 rows_a[i].certified_bound == rows_b[i].certified_bound &&
                 rows_a[i].error_vs_reference == rows_b[i].error_vs_reference;
    }

    auto greedy_a = greedy_run(ConvexRegion::square(1.0), 2000, 99);
    auto greedy_b = greedy_run(ConvexRegion::square(1.0), 2000, 99);
    bool greedy_ok = greedy_a.attempts == greedy_b.attempts;
    for (size_t i = 0; greedy_ok && i < greedy_a.series.size(); ++i) {
      greedy_ok = greedy_a.series[i].residual == greedy_b.series[i].residual &&
                  greedy_a.series[i].radius == greedy_b.series[i].radius;
    }

    auto lp_a = lp_check(domain, emitted, 10000, std::vector<double>{1.0}, 200000, 42);
    auto lp_b = lp_check(domain, emitted, 10000, std::vector<double>{1.0}, 200000, 42);
    bool lp_ok = lp_a.hits == lp_b.hits;

    bool pass = emissions_ok && reference_ok && table_ok && greedy_ok && lp_ok;
    return {pass, fmt("emissions=%s reference=%s tables=%s greedy=%s lp=%s",
                      emissions_ok ? "ok" : "FAIL", reference_ok ? "ok" : "FAIL",
                      table_ok ? "ok" : "FAIL", greedy_ok ? "ok" : "FAIL",
                      lp_ok ? "ok" : "FAIL")};
  });

  if (failures == 0) {
    std::printf("all 12 acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criterion(s) FAILED\n", failures);
  }
  return failures;
}
