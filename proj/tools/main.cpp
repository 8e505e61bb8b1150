// diskqmc command line: pack disk-covered domains, build cubature rules,
// and reproduce the decay-exponent measurements as CSV tables plus a JSON
// report on stdout.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "diskqmc/experiments.hpp"
#include "diskqmc/version.hpp"
#include "json.hpp"

namespace {

using namespace diskqmc;
using nlohmann::json;
using clock_type = std::chrono::steady_clock;

constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNumeric = 3;

struct CommonOpts {
  std::string domain_path;
  double tol_rel = 1e-9;
  double tol_abs = 1e-12;
  int threads = 1;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool needs_domain) {
  if (needs_domain) {
    cmd->add_option("--domain", opts.domain_path, "domain file (JSON)")->required();
  }
  cmd->add_option("--tolerance-rel", opts.tol_rel, "relative tangency tolerance");
  cmd->add_option("--tolerance-abs", opts.tol_abs, "absolute tangency tolerance");
  cmd->add_option("--threads", opts.threads, "parallelism cap (results do not depend on it)");
  cmd->add_option("--seed", opts.seed, "random seed for sampling commands");
}

DiskCoveredDomain load(const CommonOpts& opts) {
  return load_domain(opts.domain_path, TangencyTolerance{opts.tol_rel, opts.tol_abs});
}

json common_config(const CommonOpts& opts) {
  return json{{"domain", opts.domain_path},
              {"tolerance_rel", opts.tol_rel},
              {"tolerance_abs", opts.tol_abs},
              {"threads", opts.threads},
              {"seed", opts.seed}};
}

json fit_json(const ExponentFit& fit) {
  return json{{"slope", fit.slope},
              {"intercept", fit.intercept},
              {"r_squared", fit.r_squared},
              {"x_min", fit.x_min},
              {"x_max", fit.x_max},
              {"points_used", fit.points_used},
              {"low_confidence", fit.low_confidence}};
}

void emit_report(const std::string& command, const json& config, const json& results,
                 clock_type::time_point started) {
  json report{{"command", command},
              {"version", kVersion},
              {"config", config},
              {"results", results},
              {"wall_clock_seconds",
               std::chrono::duration<double>(clock_type::now() - started).count()}};
  std::cout << report.dump(2) << "\n";
}

std::vector<std::int64_t> parse_grid(const std::string& csv) {
  std::vector<std::int64_t> grid;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) grid.push_back(std::stoll(item));
  return grid;
}

ConvexRegion parse_region(const std::string& spec) {
  auto colon = spec.find(':');
  std::string kind = spec.substr(0, colon);
  std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "square") return ConvexRegion::square(args.empty() ? 1.0 : std::stod(args));
  if (kind == "disk") return ConvexRegion::disk(args.empty() ? 1.0 : std::stod(args));
  if (kind == "ellipse") {
    auto comma = args.find(',');
    if (comma == std::string::npos) {
      throw invalid_input_error("ellipse region needs two semi-axes, e.g. ellipse:2,1");
    }
    return ConvexRegion::ellipse(std::stod(args.substr(0, comma)), std::stod(args.substr(comma + 1)));
  }
  throw invalid_input_error("unknown region '" + spec + "' (square:<s>, disk:<r>, ellipse:<a>,<b>)");
}

int run(int argc, char** argv) {
  CLI::App app{"Apollonian disk packings and quasi-Monte-Carlo cubature for harmonic functions"};
  app.require_subcommand(1);
  auto started = clock_type::now();

  // ---- generate ----------------------------------------------------------
  auto* gen_cmd = app.add_subcommand("generate", "emit a size-ordered packing prefix as CSV");
  CommonOpts gen_opts;
  add_common(gen_cmd, gen_opts, true);
  std::string gen_out;
  std::optional<std::int64_t> gen_max_count;
  std::optional<double> gen_max_curvature, gen_min_residual;
  gen_cmd->add_option("--out", gen_out, "output CSV path")->required();
  gen_cmd->add_option("--max-count", gen_max_count, "stop after this many circles");
  gen_cmd->add_option("--max-curvature", gen_max_curvature, "emit all circles with curvature <= T");
  gen_cmd->add_option("--min-residual", gen_min_residual, "stop once the residual area <= this");

  // ---- validate -----------------------------------------------------------
  auto* val_cmd = app.add_subcommand("validate", "check a domain file; exit 2 on violations");
  CommonOpts val_opts;
  add_common(val_cmd, val_opts, true);

  // ---- converge -----------------------------------------------------------
  auto* conv_cmd = app.add_subcommand("converge", "cubature error table over an N grid");
  CommonOpts conv_opts;
  add_common(conv_cmd, conv_opts, true);
  std::string conv_fn = "const:1", conv_grid = "10,100,1000", conv_out, conv_ref = "auto";
  std::string conv_rule_out;
  conv_cmd->add_option("--fn", conv_fn, "function spec (const:<c>, re:<m>@x,y, im:<m>@x,y, log@x,y, expcos)");
  conv_cmd->add_option("--grid", conv_grid, "comma separated increasing N grid");
  conv_cmd->add_option("--out", conv_out, "output CSV path")->required();
  conv_cmd->add_option("--reference", conv_ref, "auto|packing|quadrature|exact");
  conv_cmd->add_option("--rule-out", conv_rule_out, "also dump the rule at the largest grid N");

  // ---- fit-residual ---------------------------------------------------------
  auto* fr_cmd = app.add_subcommand("fit-residual", "log-log fit of residual area vs N");
  CommonOpts fr_opts;
  add_common(fr_cmd, fr_opts, true);
  std::int64_t fr_min = 1000, fr_max = 100000;
  std::string fr_series_out;
  fr_cmd->add_option("--n-min", fr_min, "fit range lower end");
  fr_cmd->add_option("--n-max", fr_max, "fit range upper end");
  fr_cmd->add_option("--series-out", fr_series_out, "optional residual series CSV");

  // ---- fit-counting ---------------------------------------------------------
  auto* fc_cmd = app.add_subcommand("fit-counting", "log-log fit of N(T) vs curvature bound T");
  CommonOpts fc_opts;
  add_common(fc_cmd, fc_opts, true);
  double fc_tmin = 100.0, fc_tmax = 10000.0, fc_ratio = 2.0;
  int fc_bands = 6;
  std::string fc_counts_out;
  fc_cmd->add_option("--t-min", fc_tmin, "fit range lower end");
  fc_cmd->add_option("--t-max", fc_tmax, "fit range upper end");
  fc_cmd->add_option("--band-ratio", fc_ratio, "geometric band ratio");
  fc_cmd->add_option("--bands", fc_bands, "number of curvature bands");
  fc_cmd->add_option("--counts-out", fc_counts_out, "optional N(T) curve CSV");

  // ---- lp-check -------------------------------------------------------------
  auto* lp_cmd = app.add_subcommand("lp-check", "Monte-Carlo check of the residual L^p identity");
  CommonOpts lp_opts;
  add_common(lp_cmd, lp_opts, true);
  std::int64_t lp_n = 10000, lp_samples = 1000000;
  std::string lp_ps = "1,2,3";
  lp_cmd->add_option("--count", lp_n, "packing prefix length N");
  lp_cmd->add_option("--p", lp_ps, "comma separated exponents, each >= 1");
  lp_cmd->add_option("--samples", lp_samples, "Monte-Carlo sample count");

  // ---- greedy ---------------------------------------------------------------
  auto* gr_cmd = app.add_subcommand("greedy", "randomized greedy packer on a convex region");
  CommonOpts gr_opts;
  add_common(gr_cmd, gr_opts, false);
  std::string gr_region = "square:1", gr_seeds = "1,2,3,4,5", gr_series_prefix;
  std::int64_t gr_target = 10000, gr_fit_min = 100, gr_fit_max = 10000;
  gr_cmd->add_option("--region", gr_region, "square:<s>, disk:<r> or ellipse:<a>,<b>");
  gr_cmd->add_option("--target-n", gr_target, "acceptances per seed");
  gr_cmd->add_option("--seeds", gr_seeds, "comma separated seed list (>= 3)");
  gr_cmd->add_option("--n-min", gr_fit_min, "pooled fit lower end");
  gr_cmd->add_option("--n-max", gr_fit_max, "pooled fit upper end");
  gr_cmd->add_option("--series-out", gr_series_prefix, "per-seed CSV path prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (gen_cmd->parsed()) {
    auto domain = load(gen_opts);
    int stops = (gen_max_count ? 1 : 0) + (gen_max_curvature ? 1 : 0) + (gen_min_residual ? 1 : 0);
    if (stops != 1) {
      throw invalid_input_error("generate needs exactly one of --max-count/--max-curvature/--min-residual");
    }
    StopRule stop = gen_max_count        ? StopRule{StopMaxCount{*gen_max_count}}
                    : gen_max_curvature ? StopRule{StopMaxCurvature{*gen_max_curvature}}
                                        : StopRule{StopMinResidual{*gen_min_residual}};
    PackingGenerator gen(domain);
    PackingStats stats = gen.generate_until(stop);
    write_packing_dump(gen_out, gen.emitted());
    json config = common_config(gen_opts);
    config["out"] = gen_out;
    if (gen_max_count) config["max_count"] = *gen_max_count;
    if (gen_max_curvature) config["max_curvature"] = *gen_max_curvature;
    if (gen_min_residual) config["min_residual"] = *gen_min_residual;
    emit_report("generate", config,
                json{{"count", stats.count},
                     {"max_curvature_emitted", stats.max_curvature_emitted},
                     {"packed_area", stats.packed_area},
                     {"residual_area", stats.residual_area},
                     {"exact_area", domain.exact_area()}},
                started);
    return 0;
  }

  if (val_cmd->parsed()) {
    TangencyTolerance tol{val_opts.tol_rel, val_opts.tol_abs};
    try {
      DiskCoveredDomain domain = load(val_opts);
      emit_report("validate", common_config(val_opts),
                  json{{"valid", true},
                       {"disks", domain.base_disks().size()},
                       {"gaps", domain.gaps().size()},
                       {"exact_area", domain.exact_area()}},
                  started);
      return 0;
    } catch (const domain_validation_error& e) {
      json violations = json::array();
      for (const Violation& v : e.report.violations) {
        violations.push_back(json{{"kind", v.kind},
                                  {"indices", v.indices},
                                  {"residual", v.residual},
                                  {"message", v.message}});
      }
      emit_report("validate", common_config(val_opts),
                  json{{"valid", false}, {"violations", violations}}, started);
      return kExitValidation;
    }
  }

  if (conv_cmd->parsed()) {
    auto domain = load(conv_opts);
    HarmonicFn u = HarmonicFn::parse(conv_fn);
    auto grid = parse_grid(conv_grid);
    ReferenceMode mode = conv_ref == "auto"         ? ReferenceMode::Auto
                         : conv_ref == "packing"    ? ReferenceMode::Packing
                         : conv_ref == "quadrature" ? ReferenceMode::Quadrature
                         : conv_ref == "exact"
                             ? ReferenceMode::Exact
                             : throw invalid_input_error("unknown reference mode " + conv_ref);
    auto rows = converge_table(domain, u, grid, mode);
    write_converge_csv(conv_out, rows);
    if (!conv_rule_out.empty()) {
      PackingGenerator gen(domain);
      gen.generate_until(StopMaxCount{grid.back()});
      write_rule_dump(conv_rule_out, build_rule(gen.emitted(), grid.back(), domain));
    }
    json config = common_config(conv_opts);
    config["fn"] = conv_fn;
    config["grid"] = grid;
    config["reference"] = conv_ref;
    config["out"] = conv_out;
    json table = json::array();
    for (const auto& r : rows) {
      table.push_back(json{{"N", r.n},
                           {"estimate", r.estimate},
                           {"certified_bound", r.certified_bound},
                           {"reference", r.reference},
                           {"reference_uncertainty", r.reference_uncertainty},
                           {"error_vs_reference", r.error_vs_reference},
                           {"rescaled_estimate", r.rescaled_estimate}});
    }
    emit_report("converge", config, json{{"rows", table}}, started);
    return 0;
  }

  if (fr_cmd->parsed()) {
    auto domain = load(fr_opts);
    auto result = fit_residual_experiment(domain, fr_min, fr_max);
    if (!fr_series_out.empty()) {
      std::ofstream out(fr_series_out);
      if (!out) throw io_error("cannot write series: " + fr_series_out);
      out << "N,residual\n";
      char buf[80];
      for (const auto& [n, r] : result.series) {
        std::snprintf(buf, sizeof buf, "%lld,%.17g\n", static_cast<long long>(n), r);
        out << buf;
      }
    }
    json config = common_config(fr_opts);
    config["n_min"] = fr_min;
    config["n_max"] = fr_max;
    emit_report("fit-residual", config, json{{"fit", fit_json(result.fit)}}, started);
    return 0;
  }

  if (fc_cmd->parsed()) {
    auto domain = load(fc_opts);
    auto result = fit_counting_experiment(domain, fc_tmin, fc_tmax, fc_ratio, fc_bands);
    if (!fc_counts_out.empty()) {
      std::ofstream out(fc_counts_out);
      if (!out) throw io_error("cannot write counts: " + fc_counts_out);
      out << "T,count\n";
      char buf[80];
      for (const auto& [t, nT] : result.curve) {
        std::snprintf(buf, sizeof buf, "%.17g,%lld\n", t, static_cast<long long>(nT));
        out << buf;
      }
    }
    json bands = json::array();
    for (const auto& [edge, count] : result.bands) {
      bands.push_back(json{{"lower_edge", edge}, {"count", count}});
    }
    json config = common_config(fc_opts);
    config["t_min"] = fc_tmin;
    config["t_max"] = fc_tmax;
    config["band_ratio"] = fc_ratio;
    config["bands"] = fc_bands;
    emit_report("fit-counting", config, json{{"fit", fit_json(result.fit)}, {"bands", bands}},
                started);
    return 0;
  }

  if (lp_cmd->parsed()) {
    auto domain = load(lp_opts);
    std::vector<double> ps;
    {
      std::stringstream ss(lp_ps);
      std::string item;
      while (std::getline(ss, item, ',')) ps.push_back(std::stod(item));
    }
    PackingGenerator gen(domain);
    gen.generate_until(StopMaxCount{lp_n});
    auto result = lp_check(domain, gen.emitted(), lp_n, ps, lp_samples, lp_opts.seed);
    json rows = json::array();
    bool all_within = true;
    for (const auto& r : result.rows) {
      all_within = all_within && r.within_4_sigma;
      rows.push_back(json{{"p", r.p},
                          {"measured_norm", r.measured_norm},
                          {"expected_norm", r.expected_norm},
                          {"standard_error", r.standard_error},
                          {"within_4_sigma", r.within_4_sigma}});
    }
    json config = common_config(lp_opts);
    config["count"] = lp_n;
    config["p"] = ps;
    config["samples"] = lp_samples;
    emit_report("lp-check", config,
                json{{"residual", result.residual},
                     {"hits", result.hits},
                     {"rows", rows},
                     {"all_within_4_sigma", all_within}},
                started);
    return all_within ? 0 : kExitNumeric;
  }

  if (gr_cmd->parsed()) {
    ConvexRegion region = parse_region(gr_region);
    std::vector<std::uint64_t> seeds;
    {
      std::stringstream ss(gr_seeds);
      std::string item;
      while (std::getline(ss, item, ',')) seeds.push_back(std::stoull(item));
    }
    auto result = greedy_experiment(region, gr_target, seeds, gr_fit_min, gr_fit_max,
                                    gr_opts.threads);
    if (!gr_series_prefix.empty()) {
      for (size_t i = 0; i < seeds.size(); ++i) {
        write_greedy_dump(gr_series_prefix + "_seed" + std::to_string(seeds[i]) + ".csv",
                          result.runs[i]);
      }
    }
    json per_seed = json::array();
    for (size_t i = 0; i < seeds.size(); ++i) {
      per_seed.push_back(json{{"seed", seeds[i]},
                              {"accepted", result.runs[i].accepted},
                              {"attempts", result.runs[i].attempts},
                              {"stalled", result.runs[i].stalled},
                              {"final_residual", result.runs[i].series.empty()
                                                     ? region.exact_area
                                                     : result.runs[i].series.back().residual}});
    }
    json config = common_config(gr_opts);
    config["region"] = gr_region;
    config["target_n"] = gr_target;
    config["seeds"] = seeds;
    config["n_min"] = gr_fit_min;
    config["n_max"] = gr_fit_max;
    emit_report("greedy", config,
                json{{"pooled_fit", fit_json(result.pooled_fit)}, {"runs", per_seed}}, started);
    return 0;
  }

  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const CLI::ParseError&) {
    return kExitUsage;  // CLI11_PARSE already reported
  } catch (const diskqmc::domain_validation_error& e) {
    std::cerr << "validation failure: " << e.what() << "\n";
    return kExitValidation;
  } catch (const diskqmc::io_error& e) {
    std::cerr << "file error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const diskqmc::invalid_input_error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  }
}
