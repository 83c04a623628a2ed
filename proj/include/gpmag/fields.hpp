#pragma once

// Catalog of magnetic fields B: constant, Gaussian, compactly supported bump,
// opposite-sign Gaussian pair, and user-supplied samples.

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gpmag/grid.hpp"

namespace gpmag {

struct Point2 {
  double x1 = 0.0;
  double x2 = 0.0;
};

namespace field {

struct Constant {
  double strength = 1.0;
};

/// amplitude * exp(-|x - c|^2 / (2 sigma^2))
struct Gaussian {
  double amplitude = 1.0;
  double sigma = 1.0 / std::numbers::sqrt2;
  Point2 center{};
};

/// amplitude * (1 - |x - c|^2 / r0^2)^2 inside |x - c| < r0, zero outside. C^1.
struct Bump {
  double amplitude = 1.0;
  double radius = 1.0;
  Point2 center{};
};

/// +Gaussian at center + (c, 0), -Gaussian at center - (c, 0).
struct Dipole {
  double amplitude = 1.0;
  double sigma = 1.0 / std::numbers::sqrt2;
  double half_separation = 2.0;
  Point2 center{};
};

struct Custom {
  ScalarField<double> samples;
  std::string source;
};

}  // namespace field

using FieldSpec = std::variant<field::Constant, field::Gaussian, field::Bump, field::Dipole, field::Custom>;

std::string field_name(const FieldSpec& spec);

/// Rejects non-positive widths, supports and separations.
void validate(const FieldSpec& spec);

/// Pointwise value; Custom fields have no analytic expression and throw.
double evaluate(const FieldSpec& spec, double x1, double x2);

template <typename Scalar>
ScalarField<Scalar> sample_field(const FieldSpec& spec, const GridSpec<Scalar>& grid) {
  validate(spec);
  if (const auto* c = std::get_if<field::Custom>(&spec)) {
    if (c->samples.grid.n != grid.n || c->samples.grid.halfwidth != static_cast<double>(grid.halfwidth))
      throw GridMismatch("custom field grid does not match the requested grid");
    return ScalarField<Scalar>(grid, c->samples.values.template cast<Scalar>());
  }
  return ScalarField<Scalar>::sample(grid, [&](Scalar x1, Scalar x2) {
    return static_cast<Scalar>(evaluate(spec, static_cast<double>(x1), static_cast<double>(x2)));
  });
}

/// Total flux over R^2; std::nullopt marks an unbounded (divergent) flux.
std::optional<double> total_flux(const FieldSpec& spec);

struct HypothesisReport {
  double l1 = 0.0;    // on the truncated square
  double linf = 0.0;
  bool sign_constant = false;
  bool nonnegative = false;
  std::optional<double> flux;
};

HypothesisReport hypothesis_report(const FieldSpec& spec, const GridSpec<double>& grid);

/// A radially symmetric piece of a field: sign * profile(|x - center|).
struct RadialPiece {
  double sign = 1.0;
  Point2 center{};
  std::function<double(double)> profile;
  /// Closed-form enclosed flux / (2 pi) up to radius r, when known.
  std::function<double(double)> enclosed_over_2pi;
};

/// Decomposition into radial pieces; empty for Custom fields.
std::vector<RadialPiece> radial_pieces(const FieldSpec& spec);

}  // namespace gpmag
