#include "diskqmc/harmonic.hpp"

#include <cmath>
#include <complex>
#include <sstream>

namespace diskqmc {

HarmonicFn HarmonicFn::constant(double c) {
  HarmonicFn f;
  f.kind_ = Kind::Constant;
  f.c_ = c;
  return f;
}

HarmonicFn HarmonicFn::poly_re(int degree, Vec2 z0) {
  if (degree < 0) throw invalid_input_error("poly_re requires degree >= 0");
  HarmonicFn f;
  f.kind_ = Kind::PolyRe;
  f.degree_ = degree;
  f.z0_ = z0;
  return f;
}

HarmonicFn HarmonicFn::poly_im(int degree, Vec2 z0) {
  if (degree < 0) throw invalid_input_error("poly_im requires degree >= 0");
  HarmonicFn f;
  f.kind_ = Kind::PolyIm;
  f.degree_ = degree;
  f.z0_ = z0;
  return f;
}

HarmonicFn HarmonicFn::log_pole(Vec2 z0) {
  HarmonicFn f;
  f.kind_ = Kind::LogPole;
  f.z0_ = z0;
  return f;
}

HarmonicFn HarmonicFn::exp_cos() {
  HarmonicFn f;
  f.kind_ = Kind::ExpCos;
  return f;
}

HarmonicFn HarmonicFn::combo(std::vector<std::pair<double, HarmonicFn>> terms) {
  HarmonicFn f;
  f.kind_ = Kind::Combo;
  f.terms_ = std::move(terms);
  return f;
}

HarmonicFn HarmonicFn::scaled(double weight, const HarmonicFn& f) {
  return combo({{weight, f}});
}

double HarmonicFn::operator()(double x, double y) const {
  switch (kind_) {
    case Kind::Constant:
      return c_;
    case Kind::PolyRe:
    case Kind::PolyIm: {
      // iterated multiplication; degrees stay small
      double wr = x - z0_.x, wi = y - z0_.y;
      double pr = 1.0, pi = 0.0;
      for (int i = 0; i < degree_; ++i) {
        double nr = pr * wr - pi * wi;
        pi = pr * wi + pi * wr;
        pr = nr;
      }
      return kind_ == Kind::PolyRe ? pr : pi;
    }
    case Kind::LogPole: {
      double dx = x - z0_.x, dy = y - z0_.y;
      return 0.5 * std::log(dx * dx + dy * dy);
    }
    case Kind::ExpCos:
      return std::exp(x) * std::cos(y);
    case Kind::Combo: {
      double s = 0.0;
      for (const auto& [w, f] : terms_) s += w * f(x, y);
      return s;
    }
  }
  return 0.0;
}

std::string HarmonicFn::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::Constant:
      os << "const:" << c_;
      break;
    case Kind::PolyRe:
      os << "re:" << degree_ << "@" << z0_.x << "," << z0_.y;
      break;
    case Kind::PolyIm:
      os << "im:" << degree_ << "@" << z0_.x << "," << z0_.y;
      break;
    case Kind::LogPole:
      os << "log@" << z0_.x << "," << z0_.y;
      break;
    case Kind::ExpCos:
      os << "expcos";
      break;
    case Kind::Combo: {
      os << "combo(";
      for (size_t i = 0; i < terms_.size(); ++i) {
        os << (i ? " + " : "") << terms_[i].first << "*" << terms_[i].second.describe();
      }
      os << ")";
      break;
    }
  }
  return os.str();
}

double HarmonicFn::laplacian_residual(Vec2 p, double h) const {
  const HarmonicFn& u = *this;
  double lap = (u(p.x + h, p.y) + u(p.x - h, p.y) + u(p.x, p.y + h) + u(p.x, p.y - h) -
                4.0 * u(p.x, p.y)) /
               (h * h);
  return std::abs(lap) / std::max(1.0, std::abs(u(p)));
}

HarmonicFn HarmonicFn::parse(const std::string& spec) {
  auto parse_point = [](const std::string& s) {
    Vec2 p;
    char comma;
    std::istringstream is(s);
    if (!(is >> p.x >> comma >> p.y) || comma != ',') {
      throw invalid_input_error("cannot parse point '" + s + "' (expected x,y)");
    }
    return p;
  };
  if (spec == "expcos") return exp_cos();
  if (spec.rfind("const:", 0) == 0) return constant(std::stod(spec.substr(6)));
  if (spec.rfind("log@", 0) == 0) return log_pole(parse_point(spec.substr(4)));
  for (const char* prefix : {"re:", "im:"}) {
    if (spec.rfind(prefix, 0) == 0) {
      std::string rest = spec.substr(3);
      Vec2 z0{0.0, 0.0};
      auto at = rest.find('@');
      if (at != std::string::npos) {
        z0 = parse_point(rest.substr(at + 1));
        rest = rest.substr(0, at);
      }
      int m = std::stoi(rest);
      return prefix[0] == 'r' ? poly_re(m, z0) : poly_im(m, z0);
    }
  }
  throw invalid_input_error("unknown function spec '" + spec +
                            "' (expected const:<c>, re:<m>[@x,y], im:<m>[@x,y], log@x,y, expcos)");
}

}  // namespace diskqmc
