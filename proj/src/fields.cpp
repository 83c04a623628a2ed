#include "gpmag/fields.hpp"

#include <algorithm>

namespace gpmag {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double gaussian_profile(double amplitude, double sigma, double r) {
  return amplitude * std::exp(-r * r / (2.0 * sigma * sigma));
}

double bump_profile(double amplitude, double r0, double r) {
  if (r >= r0) return 0.0;
  const double t = 1.0 - r * r / (r0 * r0);
  return amplitude * t * t;
}

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + " must be positive and finite");
}

}  // namespace

std::string field_name(const FieldSpec& spec) {
  return std::visit(Overloaded{[](const field::Constant&) { return std::string("constant"); },
                               [](const field::Gaussian&) { return std::string("gaussian"); },
                               [](const field::Bump&) { return std::string("bump"); },
                               [](const field::Dipole&) { return std::string("dipole"); },
                               [](const field::Custom&) { return std::string("custom"); }},
                    spec);
}

void validate(const FieldSpec& spec) {
  std::visit(Overloaded{[](const field::Constant& c) {
                          if (!std::isfinite(c.strength)) throw ConfigError("constant field must be finite");
                        },
                        [](const field::Gaussian& g) { require_positive(g.sigma, "gaussian sigma"); },
                        [](const field::Bump& b) { require_positive(b.radius, "bump radius"); },
                        [](const field::Dipole& d) {
                          require_positive(d.sigma, "dipole sigma");
                          require_positive(d.half_separation, "dipole half separation");
                        },
                        [](const field::Custom& c) {
                          if (!c.samples.finite()) throw ConfigError("custom field has non-finite samples");
                        }},
             spec);
}

double evaluate(const FieldSpec& spec, double x1, double x2) {
  return std::visit(
      Overloaded{[](const field::Constant& c) { return c.strength; },
                 [&](const field::Gaussian& g) {
                   return gaussian_profile(g.amplitude, g.sigma, std::hypot(x1 - g.center.x1, x2 - g.center.x2));
                 },
                 [&](const field::Bump& b) {
                   return bump_profile(b.amplitude, b.radius, std::hypot(x1 - b.center.x1, x2 - b.center.x2));
                 },
                 [&](const field::Dipole& d) {
                   const double y = x2 - d.center.x2;
                   const double xp = x1 - d.center.x1 - d.half_separation;
                   const double xm = x1 - d.center.x1 + d.half_separation;
                   return gaussian_profile(d.amplitude, d.sigma, std::hypot(xp, y)) -
                          gaussian_profile(d.amplitude, d.sigma, std::hypot(xm, y));
                 },
                 [](const field::Custom&) -> double {
                   throw ConfigError("custom fields are only defined at their sample nodes");
                 }},
      spec);
}

std::optional<double> total_flux(const FieldSpec& spec) {
  using std::numbers::pi;
  return std::visit(
      Overloaded{[](const field::Constant& c) -> std::optional<double> {
                   if (c.strength == 0.0) return 0.0;
                   return std::nullopt;
                 },
                 [](const field::Gaussian& g) -> std::optional<double> {
                   return g.amplitude * 2.0 * pi * g.sigma * g.sigma;
                 },
                 [](const field::Bump& b) -> std::optional<double> {
                   return b.amplitude * pi * b.radius * b.radius / 3.0;
                 },
                 [](const field::Dipole&) -> std::optional<double> { return 0.0; },
                 [](const field::Custom& c) -> std::optional<double> {
                   return integrate(c.samples, Region::full_square());
                 }},
      spec);
}

HypothesisReport hypothesis_report(const FieldSpec& spec, const GridSpec<double>& grid) {
  const ScalarField<double> B = sample_field(spec, grid);
  const auto nm = norms(B, Region::full_square());
  HypothesisReport r;
  r.l1 = nm.l1;
  r.linf = nm.linf;
  const double lo = B.values.minCoeff(), hi = B.values.maxCoeff();
  r.nonnegative = lo >= 0.0;
  r.sign_constant = lo >= 0.0 || hi <= 0.0;
  r.flux = total_flux(spec);
  return r;
}

std::vector<RadialPiece> radial_pieces(const FieldSpec& spec) {
  using std::numbers::pi;
  std::vector<RadialPiece> out;
  auto gaussian = [](double amp, double sigma, double sign, Point2 c) {
    RadialPiece p;
    p.sign = sign;
    p.center = c;
    p.profile = [amp, sigma](double r) { return gaussian_profile(amp, sigma, r); };
    // int_0^r s amp e^{-s^2/2 sigma^2} ds
    p.enclosed_over_2pi = [amp, sigma](double r) {
      return amp * sigma * sigma * -std::expm1(-r * r / (2.0 * sigma * sigma));
    };
    return p;
  };
  std::visit(Overloaded{[&](const field::Constant& c) {
                          RadialPiece p;
                          p.profile = [b = c.strength](double) { return b; };
                          p.enclosed_over_2pi = [b = c.strength](double r) { return 0.5 * b * r * r; };
                          out.push_back(std::move(p));
                        },
                        [&](const field::Gaussian& g) { out.push_back(gaussian(g.amplitude, g.sigma, 1.0, g.center)); },
                        [&](const field::Bump& b) {
                          RadialPiece p;
                          p.center = b.center;
                          p.profile = [amp = b.amplitude, r0 = b.radius](double r) { return bump_profile(amp, r0, r); };
                          p.enclosed_over_2pi = [amp = b.amplitude, r0 = b.radius](double r) {
                            const double u = std::min(r, r0) / r0;
                            const double u2 = u * u;
                            // int_0^r s (1 - s^2/r0^2)^2 ds = r0^2 (1 - (1 - u^2)^3) / 6
                            const double t = 1.0 - u2;
                            return amp * r0 * r0 * (1.0 - t * t * t) / 6.0;
                          };
                          out.push_back(std::move(p));
                        },
                        [&](const field::Dipole& d) {
                          out.push_back(gaussian(d.amplitude, d.sigma, 1.0,
                                                 {d.center.x1 + d.half_separation, d.center.x2}));
                          out.push_back(gaussian(d.amplitude, d.sigma, -1.0,
                                                 {d.center.x1 - d.half_separation, d.center.x2}));
                        },
                        [](const field::Custom&) {}},
             spec);
  return out;
}

}  // namespace gpmag
