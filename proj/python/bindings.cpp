#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "diskqmc/cubature.hpp"
#include "diskqmc/experiments.hpp"
#include "diskqmc/fit.hpp"
#include "diskqmc/greedy.hpp"
#include "diskqmc/version.hpp"

namespace py = pybind11;
using namespace diskqmc;

namespace {

std::pair<double, double> as_tuple(Vec2 v) { return {v.x, v.y}; }
Vec2 from_tuple(std::pair<double, double> t) { return {t.first, t.second}; }

}  // namespace

PYBIND11_MODULE(diskqmc, m) {
  m.doc() = "Apollonian disk packings of finitely disk-covered domains and the "
            "quasi-Monte-Carlo cubature rules they induce for harmonic functions";
  m.attr("__version__") = kVersion;

  py::register_exception<invalid_input_error>(m, "InvalidInputError", PyExc_ValueError);
  py::register_exception<geometry_error>(m, "GeometryError", PyExc_RuntimeError);
  py::register_exception<domain_validation_error>(m, "DomainValidationError", PyExc_ValueError);
  py::register_exception<fit_error>(m, "FitError", PyExc_RuntimeError);

  py::class_<Circle>(m, "Circle")
      .def(py::init([](std::pair<double, double> center, double r) {
             return make_circle(from_tuple(center), r);
           }),
           py::arg("center"), py::arg("r"))
      .def_property_readonly("center", [](const Circle& c) { return as_tuple(c.center); })
      .def_readonly("radius", &Circle::radius)
      .def_readonly("curvature", &Circle::curvature)
      .def("__repr__", [](const Circle& c) {
        return "Circle((" + std::to_string(c.center.x) + ", " + std::to_string(c.center.y) +
               "), r=" + std::to_string(c.radius) + ")";
      });

  py::class_<TangencyTolerance>(m, "TangencyTolerance")
      .def(py::init<double, double>(), py::arg("relative") = 1e-9, py::arg("absolute") = 1e-12)
      .def_readwrite("relative", &TangencyTolerance::relative)
      .def_readwrite("absolute", &TangencyTolerance::absolute);

  py::enum_<DescartesRoot>(m, "DescartesRoot")
      .value("inner", DescartesRoot::inner)
      .value("outer", DescartesRoot::outer);

  m.def("descartes_fourth_curvature", &descartes_fourth_curvature, py::arg("k1"), py::arg("k2"),
        py::arg("k3"), py::arg("root") = DescartesRoot::inner);
  m.def("descartes_fourth_center", &descartes_fourth_center, py::arg("c1"), py::arg("c2"),
        py::arg("c3"), py::arg("k4"), py::arg("tol") = TangencyTolerance{});
  m.def("curvilinear_triangle_area", &curvilinear_triangle_area, py::arg("c1"), py::arg("c2"),
        py::arg("c3"), py::arg("tol") = TangencyTolerance{});
  m.def("is_tangent", &is_tangent, py::arg("a"), py::arg("b"), py::arg("tol") = TangencyTolerance{});
  m.def("is_disjoint", &is_disjoint, py::arg("a"), py::arg("b"),
        py::arg("tol") = TangencyTolerance{});

  py::class_<Gap>(m, "Gap")
      .def_property_readonly("members", [](const Gap& g) { return g.members; });

  py::class_<Violation>(m, "Violation")
      .def_readonly("kind", &Violation::kind)
      .def_readonly("residual", &Violation::residual)
      .def_readonly("message", &Violation::message);

  py::class_<ValidationReport>(m, "ValidationReport")
      .def_readonly("violations", &ValidationReport::violations)
      .def("ok", &ValidationReport::ok)
      .def("__str__", &ValidationReport::to_string);

  py::class_<DiskCoveredDomain>(m, "DiskCoveredDomain")
      .def_property_readonly("base_disks", &DiskCoveredDomain::base_disks)
      .def_property_readonly("gaps", &DiskCoveredDomain::gaps)
      .def_property_readonly("exact_area", &DiskCoveredDomain::exact_area)
      .def("contains",
           [](const DiskCoveredDomain& d, std::pair<double, double> p) {
             return d.contains(from_tuple(p));
           })
      .def("bounding_box", [](const DiskCoveredDomain& d) {
        auto box = d.bounding_box();
        return std::make_pair(as_tuple(box[0]), as_tuple(box[1]));
      });

  m.def("validate", [](const DiskCoveredDomain& d) { return validate(d); });
  m.def("build_three_tangent", &build_three_tangent, py::arg("r1"), py::arg("r2"), py::arg("r3"));
  m.def("build_square_lattice", &build_square_lattice, py::arg("m"), py::arg("n"));
  m.def("build_hex_lattice", &build_hex_lattice, py::arg("rows"), py::arg("cols"));
  m.def("load_domain", &load_domain, py::arg("path"), py::arg("tol") = TangencyTolerance{});
  m.def("save_domain", &save_domain, py::arg("domain"), py::arg("path"));

  py::class_<EmittedCircle>(m, "EmittedCircle")
      .def_readonly("circle", &EmittedCircle::circle)
      .def_readonly("parents", &EmittedCircle::parents);

  py::class_<PackingStats>(m, "PackingStats")
      .def_readonly("count", &PackingStats::count)
      .def_readonly("max_curvature_emitted", &PackingStats::max_curvature_emitted)
      .def_readonly("packed_area", &PackingStats::packed_area)
      .def_readonly("residual_area", &PackingStats::residual_area);

  py::class_<PackingGenerator>(m, "PackingGenerator")
      .def(py::init<const DiskCoveredDomain&>(), py::arg("domain"), py::keep_alive<1, 2>())
      .def("next", &PackingGenerator::next)
      .def("exhausted", &PackingGenerator::exhausted)
      .def("stats", &PackingGenerator::stats)
      .def_property_readonly("emitted", &PackingGenerator::emitted)
      .def(
          "generate_until",
          [](PackingGenerator& g, std::optional<std::int64_t> max_count,
             std::optional<double> max_curvature, std::optional<double> min_residual) {
            int picked = (max_count ? 1 : 0) + (max_curvature ? 1 : 0) + (min_residual ? 1 : 0);
            if (picked != 1) {
              throw invalid_input_error(
                  "pass exactly one of max_count, max_curvature, min_residual");
            }
            StopRule stop = max_count        ? StopRule{StopMaxCount{*max_count}}
                            : max_curvature ? StopRule{StopMaxCurvature{*max_curvature}}
                                            : StopRule{StopMinResidual{*min_residual}};
            return g.generate_until(stop);
          },
          py::arg("max_count") = py::none(), py::arg("max_curvature") = py::none(),
          py::arg("min_residual") = py::none());

  m.def("count_by_curvature",
        [](const std::vector<EmittedCircle>& e, double t) { return count_by_curvature(e, t); });
  m.def("curvature_band_counts",
        [](const std::vector<EmittedCircle>& e, double t0, double ratio, int bands) {
          return curvature_band_counts(e, t0, ratio, bands);
        });
  m.def("residual_series", [](const std::vector<EmittedCircle>& e, const DiskCoveredDomain& d) {
    return residual_series(e, d);
  });
  m.def("write_packing_dump", [](const std::string& path, const std::vector<EmittedCircle>& e) {
    write_packing_dump(path, e);
  });

  py::class_<HarmonicFn>(m, "HarmonicFn")
      .def_static("constant", &HarmonicFn::constant)
      .def_static(
          "poly_re",
          [](int m_, std::pair<double, double> z0) { return HarmonicFn::poly_re(m_, from_tuple(z0)); },
          py::arg("degree"), py::arg("z0") = std::make_pair(0.0, 0.0))
      .def_static(
          "poly_im",
          [](int m_, std::pair<double, double> z0) { return HarmonicFn::poly_im(m_, from_tuple(z0)); },
          py::arg("degree"), py::arg("z0") = std::make_pair(0.0, 0.0))
      .def_static("log_pole",
                  [](std::pair<double, double> z0) { return HarmonicFn::log_pole(from_tuple(z0)); })
      .def_static("exp_cos", &HarmonicFn::exp_cos)
      .def_static("parse", &HarmonicFn::parse)
      .def("__call__", [](const HarmonicFn& f, double x, double y) { return f(x, y); })
      .def("describe", &HarmonicFn::describe);

  py::class_<CubatureRule>(m, "CubatureRule")
      .def_property_readonly("nodes",
                             [](const CubatureRule& r) {
                               std::vector<std::pair<double, double>> out;
                               out.reserve(r.nodes.size());
                               for (Vec2 v : r.nodes) out.push_back(as_tuple(v));
                               return out;
                             })
      .def_readonly("weights", &CubatureRule::weights)
      .def_readonly("residual_bound", &CubatureRule::residual_bound)
      .def_property_readonly("size", &CubatureRule::size);

  m.def("build_rule", [](const std::vector<EmittedCircle>& e, std::int64_t n,
                         const DiskCoveredDomain& d) { return build_rule(e, n, d); });

  py::class_<Integration>(m, "Integration")
      .def_readonly("estimate", &Integration::estimate)
      .def_readonly("certified_bound", &Integration::certified_bound)
      .def_readonly("supnorm", &Integration::supnorm);

  m.def("integrate",
        py::overload_cast<const CubatureRule&, const HarmonicFn&, double>(&integrate),
        py::arg("rule"), py::arg("u"), py::arg("supnorm"));
  m.def("integrate",
        py::overload_cast<const CubatureRule&, const HarmonicFn&, const DiskCoveredDomain&>(
            &integrate),
        py::arg("rule"), py::arg("u"), py::arg("domain"));
  m.def("supnorm_sampled", &supnorm_sampled, py::arg("u"), py::arg("domain"),
        py::arg("samples_per_circle") = 256, py::arg("inflation") = 1.05);
  m.def("supnorm_bound", &supnorm_bound, py::arg("u"), py::arg("domain"));

  py::class_<Reference>(m, "Reference")
      .def_readonly("value", &Reference::value)
      .def_readonly("uncertainty", &Reference::uncertainty)
      .def_readonly("achieved_residual", &Reference::achieved_residual)
      .def_readonly("circles", &Reference::circles);

  m.def("reference_integral", &reference_integral, py::arg("domain"), py::arg("u"),
        py::arg("target_residual"), py::arg("supnorm"));
  m.def("mean_value_check", &mean_value_check, py::arg("u"), py::arg("disk"),
        py::arg("radial") = 64, py::arg("angular") = 64);
  m.def("write_rule_dump", &write_rule_dump, py::arg("path"), py::arg("rule"));

  py::class_<Quadrature>(m, "Quadrature")
      .def_readonly("value", &Quadrature::value)
      .def_readonly("error_estimate", &Quadrature::error_estimate);

  m.def("integrate_quadrature", &integrate_quadrature, py::arg("domain"), py::arg("u"),
        py::arg("rel_tol") = 1e-12);

  py::class_<ConvexRegion>(m, "ConvexRegion")
      .def_static("square", &ConvexRegion::square)
      .def_static("disk", &ConvexRegion::disk)
      .def_static("ellipse", &ConvexRegion::ellipse)
      .def_readonly("exact_area", &ConvexRegion::exact_area)
      .def("contains",
           [](const ConvexRegion& r, std::pair<double, double> p) { return r.contains(from_tuple(p)); })
      .def("boundary_distance", [](const ConvexRegion& r, std::pair<double, double> p) {
        return r.boundary_distance(from_tuple(p));
      });

  py::class_<GreedySample>(m, "GreedySample")
      .def_readonly("n", &GreedySample::n)
      .def_readonly("residual", &GreedySample::residual)
      .def_readonly("radius", &GreedySample::radius);

  py::class_<GreedyRun>(m, "GreedyRun")
      .def_readonly("series", &GreedyRun::series)
      .def_readonly("attempts", &GreedyRun::attempts)
      .def_readonly("accepted", &GreedyRun::accepted)
      .def_readonly("stalled", &GreedyRun::stalled);

  m.def("greedy_run", &greedy_run, py::arg("region"), py::arg("target_n"), py::arg("seed"),
        py::arg("stall_limit") = 10'000'000);

  py::class_<ExponentFit>(m, "ExponentFit")
      .def_readonly("slope", &ExponentFit::slope)
      .def_readonly("intercept", &ExponentFit::intercept)
      .def_readonly("r_squared", &ExponentFit::r_squared)
      .def_readonly("x_min", &ExponentFit::x_min)
      .def_readonly("x_max", &ExponentFit::x_max)
      .def_readonly("points_used", &ExponentFit::points_used)
      .def_readonly("low_confidence", &ExponentFit::low_confidence);

  m.def("fit_powerlaw",
        [](const std::vector<std::pair<double, double>>& pts, double x_min, double x_max,
           int max_points) { return fit_powerlaw(pts, x_min, x_max, max_points); },
        py::arg("points"), py::arg("x_min"), py::arg("x_max"), py::arg("max_points") = 512);
}
