#include "gpmag/gauge.hpp"

namespace gpmag {

namespace {

double enclosed_over_2pi(const RadialPiece& p, double r) {
  if (p.enclosed_over_2pi) return p.enclosed_over_2pi(r);
  return integrate_1d([&](double s) { return s * p.profile(s); }, 0.0, r, 1e-13 * std::max(1.0, r));
}

}  // namespace

std::array<double, 2> oracle_potential(std::span<const RadialPiece> pieces, double x1, double x2) {
  std::array<double, 2> A{0.0, 0.0};
  for (const auto& p : pieces) {
    const double d1 = x1 - p.center.x1, d2 = x2 - p.center.x2;
    const double r2 = d1 * d1 + d2 * d2;
    if (r2 == 0.0) continue;
    // A_theta / r with A_theta = enclosed / r
    const double scale = p.sign * enclosed_over_2pi(p, std::sqrt(r2)) / r2;
    A[0] -= scale * d2;
    A[1] += scale * d1;
  }
  return A;
}

double oracle_annulus_integral(std::span<const RadialPiece> pieces, double r0, double r1) {
  if (r1 <= r0) return 0.0;
  const bool centred_single = pieces.size() == 1 && pieces[0].center.x1 == 0.0 && pieces[0].center.x2 == 0.0;
  if (centred_single) {
    const auto& p = pieces[0];
    return integrate_1d(
        [&](double r) {
          const double a = enclosed_over_2pi(p, r) / r;
          return 2.0 * std::numbers::pi * r * a * a;
        },
        r0, r1, 1e-11);
  }
  // Periodic trapezoid in angle is spectrally accurate for the smooth integrand.
  constexpr int kAngles = 512;
  return integrate_1d(
      [&](double r) {
        double ring = 0.0;
        for (int k = 0; k < kAngles; ++k) {
          const double t = 2.0 * std::numbers::pi * k / kAngles;
          const auto A = oracle_potential(pieces, r * std::cos(t), r * std::sin(t));
          ring += A[0] * A[0] + A[1] * A[1];
        }
        return r * ring * (2.0 * std::numbers::pi / kAngles);
      },
      r0, r1, 1e-10);
}

}  // namespace gpmag
