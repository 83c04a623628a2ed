#pragma once

// Cut-off lower bound for the magnetic kinetic energy on balls,
//   int_{B_R} |(grad - iA) psi|^2 >= 1/2 int_{B_{R/2}} B |psi|^2
//                                    - C / R^2 int_{B_R \ B_{R/2}} |psi|^2,
// with the explicit cut-off chi(t) = cos^2(pi (t - 1/2)) on (1/2, 1), which
// gives C = sup|chi'|^2 = pi^2, and the ingredient bound
//   int |(grad - iA) phi|^2 >= +-int B |phi|^2 for phi vanishing on the sphere.

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "gpmag/energy.hpp"
#include "gpmag/grid.hpp"

namespace gpmag {

struct CutoffSpec {
  double radius = 1.0;

  static double profile(double t) {
    if (t <= 0.5) return 1.0;
    if (t >= 1.0) return 0.0;
    const double c = std::cos(std::numbers::pi * (t - 0.5));
    return c * c;
  }
  static double derivative(double t) {
    if (t <= 0.5 || t >= 1.0) return 0.0;
    return -std::numbers::pi * std::sin(2.0 * std::numbers::pi * (t - 0.5));
  }
  static constexpr double derivative_bound() { return std::numbers::pi; }
  static constexpr double constant() { return std::numbers::pi * std::numbers::pi; }

  double operator()(double x1, double x2) const { return profile(std::hypot(x1, x2) / radius); }
};

template <typename Scalar>
ScalarField<Scalar> make_cutoff(double radius, const GridSpec<Scalar>& grid) {
  require_region_fits(grid, Region::ball(radius));
  const CutoffSpec chi{radius};
  return ScalarField<Scalar>::sample(grid, [&](Scalar x1, Scalar x2) {
    return static_cast<Scalar>(chi(static_cast<double>(x1), static_cast<double>(x2)));
  });
}

struct SpectralReport {
  double radius = 0.0;
  double constant = CutoffSpec::constant();
  double lhs = 0.0;   // int_{B_R} |D psi|^2
  double rhs1 = 0.0;  // 1/2 int_{B_{R/2}} B |psi|^2
  double rhs2 = 0.0;  // C / R^2 int_{annulus(R/2, R)} |psi|^2
  double margin = 0.0;
};

namespace detail {
template <typename Scalar>
void require_nonnegative_on_ball(const ScalarField<Scalar>& B, double radius, double sign) {
  const auto& g = B.grid;
  for (Index i = 0; i < g.n; ++i)
    for (Index j = 0; j < g.n; ++j) {
      const double x1 = static_cast<double>(g.coord(i)), x2 = static_cast<double>(g.coord(j));
      if (x1 * x1 + x2 * x2 <= radius * radius && sign * static_cast<double>(B(i, j)) < 0.0)
        throw HypothesisError("magnetic field has the wrong sign inside B(0, R) at (" + std::to_string(x1) + ", " +
                              std::to_string(x2) + "); the bound assumes a sign-definite field");
    }
}
}  // namespace detail

template <typename Scalar>
SpectralReport cutoff_margin(const WaveField<Scalar>& psi, const VectorField<Scalar>& A, const ScalarField<Scalar>& B,
                              double radius) {
  require_same_grid(psi.grid, A.grid);
  require_same_grid(psi.grid, B.grid);
  require_region_fits(psi.grid, Region::ball(radius));
  detail::require_nonnegative_on_ball(B, radius, 1.0);
  const Plane<Scalar> density = psi.values.abs2();
  SpectralReport r;
  r.radius = radius;
  r.lhs = 2.0 * energy(psi, A, Region::ball(radius)).kinetic;
  r.rhs1 = 0.5 * static_cast<double>(weighted_sum<Scalar>(B.values * density,
                                                           node_weights(psi.grid, Region::ball(radius / 2))));
  r.rhs2 = r.constant / (radius * radius) *
           static_cast<double>(weighted_sum<Scalar>(density, node_weights(psi.grid, Region::annulus(radius / 2, radius))));
  r.margin = r.lhs - r.rhs1 + r.rhs2;
  return r;
}

struct DirichletReport {
  double kinetic = 0.0;   // int_{B_R} |D phi|^2
  double field_term = 0.0;  // sign * int_{B_R} B |phi|^2
  double margin = 0.0;
};

/// int_{B_R} |D phi|^2 - sign * int_{B_R} B |phi|^2 for phi supported in
/// B(0, R - 2a). sign = +1 needs B >= 0 on the ball, sign = -1 needs B <= 0.
template <typename Scalar>
DirichletReport dirichlet_bound(const WaveField<Scalar>& phi, const VectorField<Scalar>& A, const ScalarField<Scalar>& B,
                                double radius, int sign = +1) {
  require_same_grid(phi.grid, A.grid);
  require_same_grid(phi.grid, B.grid);
  require_region_fits(phi.grid, Region::ball(radius));
  if (sign != 1 && sign != -1) throw ConfigError("sign must be +1 or -1");
  detail::require_nonnegative_on_ball(B, radius, sign);
  const auto& g = phi.grid;
  const double support = radius - 2.0 * static_cast<double>(g.spacing);
  const Scalar peak = phi.values.abs().maxCoeff();
  for (Index i = 0; i < g.n; ++i)
    for (Index j = 0; j < g.n; ++j) {
      const double x1 = static_cast<double>(g.coord(i)), x2 = static_cast<double>(g.coord(j));
      if (x1 * x1 + x2 * x2 > support * support && std::abs(phi(i, j)) > Scalar(1e-8) * peak)
        throw ConfigError("test function does not vanish outside B(0, R - 2a)");
    }
  DirichletReport r;
  r.kinetic = 2.0 * energy(phi, A, Region::ball(radius)).kinetic;
  r.field_term = sign * static_cast<double>(weighted_sum<Scalar>(B.values * phi.values.abs2(),
                                                                 node_weights(g, Region::ball(radius))));
  r.margin = r.kinetic - r.field_term;
  return r;
}

template <typename Scalar>
double dirichlet_bound_margin(const WaveField<Scalar>& phi, const VectorField<Scalar>& A, const ScalarField<Scalar>& B,
                              double radius, int sign = +1) {
  return dirichlet_bound(phi, A, B, radius, sign).margin;
}

/// Smooth random state: sum of Fourier modes exp(i pi (k1 x1 + k2 x2) / L)
/// with |k| <= max_mode and complex Gaussian coefficients.
template <typename Scalar>
WaveField<Scalar> band_limited_state(const GridSpec<Scalar>& g, int max_mode, std::uint64_t seed) {
  using Complex = std::complex<Scalar>;
  using Mat = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const Index m = 2 * max_mode + 1;
  Mat coeff = Mat::Zero(m, m);
  int modes = 0;
  for (int k1 = -max_mode; k1 <= max_mode; ++k1)
    for (int k2 = -max_mode; k2 <= max_mode; ++k2) {
      const double re = normal(rng), im = normal(rng);
      if (k1 * k1 + k2 * k2 > max_mode * max_mode) continue;
      coeff(k1 + max_mode, k2 + max_mode) = Complex(Scalar(re), Scalar(im));
      ++modes;
    }
  coeff /= std::sqrt(static_cast<Scalar>(std::max(modes, 1)));
  Mat basis(g.n, m);
  for (Index i = 0; i < g.n; ++i)
    for (Index k = 0; k < m; ++k)
      basis(i, k) = std::polar(Scalar(1), std::numbers::pi_v<Scalar> * static_cast<Scalar>(k - max_mode) * g.coord(i) /
                                              g.halfwidth);
  const Mat values = basis * coeff * basis.transpose();
  return WaveField<Scalar>(g, values.array());
}

/// exp(-B0 |x|^2 / 4), the lowest Landau level state in the symmetric gauge.
template <typename Scalar>
WaveField<Scalar> landau_ground_state(const GridSpec<Scalar>& g, Scalar strength) {
  return WaveField<Scalar>::sample(g, [&](Scalar x1, Scalar x2) {
    return std::complex<Scalar>(std::exp(-strength * (x1 * x1 + x2 * x2) / Scalar(4)));
  });
}

struct SuiteRow {
  int trial = 0;
  double lhs = 0.0;
  double rhs1 = 0.0;
  double rhs2 = 0.0;
  double margin = 0.0;
};

struct SuiteResult {
  std::vector<SuiteRow> rows;
  int violations = 0;
  double worst_relative_margin = 0.0;
};

inline std::uint64_t trial_seed(std::uint64_t seed, int trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  std::array<std::uint32_t, 2> out{};
  seq.generate(out.begin(), out.end());
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

struct SuiteOptions {
  int trials = 100;
  double halfwidth = 12.0;
  Index n = 257;
  double strength = 1.0;  // constant field B0
  double radius = 8.0;
  int max_mode = -1;  // -1: n / 8
  std::uint64_t seed = 1;
  double tolerance = 1e-10;  // relative margin tolerance
};

/// Random band-limited states in a constant field with the symmetric gauge.
/// A trial fails when margin < -tolerance * (lhs + 1).
SuiteResult cutoff_suite(const SuiteOptions& opts);

/// Random compactly supported states for the ingredient bound; the field sign
/// follows opts.strength and the branch sign is chosen to match it. A trial
/// fails when margin < -tolerance * kinetic.
SuiteResult dirichlet_suite(const SuiteOptions& opts);

}  // namespace gpmag
