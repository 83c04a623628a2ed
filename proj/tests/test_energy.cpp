#include <random>

#include "doctest.h"
#include "gpmag/energy.hpp"
#include "gpmag/gauge.hpp"
#include "gpmag/parallel.hpp"

using namespace gpmag;

namespace {

WaveField<double> random_wave(const GridSpec<double>& g, std::uint64_t seed, double scale = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  WaveField<double> psi(g);
  for (Index i = 0; i < g.n; ++i)
    for (Index j = 0; j < g.n; ++j) psi(i, j) = {scale * nd(rng), scale * nd(rng)};
  return psi;
}

VectorField<double> random_potential(const GridSpec<double>& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  VectorField<double> A(g);
  for (Index i = 0; i < g.n; ++i)
    for (Index j = 0; j < g.n; ++j) {
      A.c1(i, j) = nd(rng);
      A.c2(i, j) = nd(rng);
    }
  return A;
}

}  // namespace

TEST_CASE("covariant derivative examples") {
  const auto g = make_grid(2.0, 33);
  const auto one = WaveField<double>::constant(g, {1.0, 0.0});
  const auto D0 = covariant_derivative(one, VectorField<double>(g));
  CHECK(D0.d1.abs().maxCoeff() == 0.0);
  CHECK(D0.d2.abs().maxCoeff() == 0.0);

  const double c = 1.3;
  const auto plane = WaveField<double>::sample(g, [&](double x1, double) { return std::polar(1.0, c * x1); });
  const auto Ac = VectorField<double>::sample(g, [&](double, double) { return std::array{c, 0.0}; });
  const auto Dc = covariant_derivative(plane, Ac);
  CHECK(Dc.d1.abs().maxCoeff() < 1e-12);
  CHECK(Dc.d2.abs().maxCoeff() < 1e-12);
}

TEST_CASE("kinetic term of psi = 1 approaches the L2 norm of A") {
  const auto g = make_grid(4.0, 257);
  const auto one = WaveField<double>::constant(g, {1.0, 0.0});
  const auto rep = energy(one, symmetric_gauge(1.0, g));
  // int_{[-4,4]^2} |x|^2 / 4 = 2 * 8 * (2 * 4^3 / 3) / 4
  const double oracle = 2.0 * 8.0 * (2.0 * 64.0 / 3.0) / 4.0;
  CHECK(2.0 * rep.kinetic == doctest::Approx(oracle).epsilon(1e-2));
}

TEST_CASE("energy examples") {
  const auto g = make_grid(1.0, 129);
  const auto one = WaveField<double>::constant(g, {1.0, 0.0});
  CHECK(energy(one, VectorField<double>(g)).total == 0.0);
  const auto zero = energy(WaveField<double>(g), random_potential(g, 1));
  CHECK(zero.kinetic == 0.0);
  CHECK(zero.total == doctest::Approx(1.0).epsilon(1e-14));
  const auto sym = energy(one, symmetric_gauge(1.0, g));
  CHECK(sym.total == doctest::Approx(1.0 / 3.0).epsilon(1e-2));
  CHECK(sym.potential == 0.0);
  CHECK_THROWS_AS(energy(one, VectorField<double>(make_grid(1.0, 65))), GridMismatch);
  CHECK_THROWS_AS(energy(one, VectorField<double>(g), Region::ball(2.0)), ConfigError);
}

TEST_CASE("energy report invariants") {
  const auto g = make_grid(1.5, 24);
  for (std::uint64_t s = 0; s < 5; ++s) {
    const auto r = energy(random_wave(g, s), random_potential(g, s + 50), Region::ball(1.2));
    CHECK(r.kinetic >= 0.0);
    CHECK(r.potential >= 0.0);
    CHECK(r.total == doctest::Approx(r.kinetic + r.potential).epsilon(1e-13));
    CHECK(r.region.describe() == Region::ball(1.2).describe());
  }
}

TEST_CASE("discrete energy converges to the continuum value") {
  // psi = e^{-|x|^2/2} e^{i x1}, A = symmetric gauge of B0 = 1 on [-3,3]^2;
  // the continuum density is integrated by nested adaptive quadrature.
  const auto psi_fn = [](double x1, double x2) {
    return std::exp(-(x1 * x1 + x2 * x2) / 2) * std::polar(1.0, x1);
  };
  const auto density = [](double x1, double x2) {
    const double m = std::exp(-(x1 * x1 + x2 * x2) / 2);
    // grad psi - iA psi = psi * (-x1 + i(1 + x2/2), -x2 - i x1/2)
    const double kin = m * m * (x1 * x1 + std::pow(1 + x2 / 2, 2) + x2 * x2 + x1 * x1 / 4);
    const double pot = std::pow(1 - m * m, 2);
    return 0.5 * kin + 0.25 * pot;
  };
  const double L = 3.0;
  const double oracle = integrate_1d(
      [&](double x1) { return integrate_1d([&](double x2) { return density(x1, x2); }, -L, L, 1e-12); }, -L, L, 1e-11);
  std::vector<double> err;
  for (Index n : {33, 65, 129, 257}) {
    const auto g = make_grid(L, n);
    const auto psi = WaveField<double>::sample(g, psi_fn);
    err.push_back(std::abs(energy(psi, symmetric_gauge(1.0, g)).total - oracle));
  }
  const double order = std::log2(err[2] / err[3]);
  MESSAGE("energy errors " << err[0] << " " << err[1] << " " << err[2] << " " << err[3]);
  CHECK(order >= 1.5);
  CHECK(std::log2(err[1] / err[2]) >= 1.5);
}

TEST_CASE("energy gradient vanishes at critical points") {
  const auto g = make_grid(1.0, 33);
  const auto one = WaveField<double>::constant(g, {1.0, 0.0});
  CHECK(energy_gradient(one, VectorField<double>(g)).values.abs().maxCoeff() < 1e-10);
  CHECK(energy_gradient(WaveField<double>(g), VectorField<double>(g)).values.abs().maxCoeff() == 0.0);
}

TEST_CASE("energy gradient matches central finite differences") {
  const auto g = make_grid(1.0, 8, 8);
  const auto psi = random_wave(g, 7, 0.7);
  const auto A = random_potential(g, 8);
  const EnergyFunctional<double> E(A, Region::ball(0.9));
  const auto grad = E.gradient(psi);
  for (int k = 0; k < 20; ++k) {
    const auto dir = random_wave(g, 1000 + static_cast<std::uint64_t>(k));
    double analytic = 0;
    for (Index i = 0; i < g.n; ++i)
      for (Index j = 0; j < g.n; ++j)
        analytic += grad(i, j).real() * dir(i, j).real() + grad(i, j).imag() * dir(i, j).imag();
    const double h = 1e-5;
    WaveField<double> plus = psi, minus = psi;
    plus.values += h * dir.values;
    minus.values -= h * dir.values;
    const double fd = (E.value(plus) - E.value(minus)) / (2 * h);
    CHECK(fd == doctest::Approx(analytic).epsilon(1e-6));
  }
}

TEST_CASE("energy evaluation is independent of the thread count") {
  const auto g = make_grid(2.0, 65);
  const auto psi = random_wave(g, 3);
  const auto A = random_potential(g, 4);
  set_thread_count(1);
  const auto e1 = energy(psi, A);
  const auto g1 = energy_gradient(psi, A);
  set_thread_count(4);
  const auto e4 = energy(psi, A);
  const auto g4 = energy_gradient(psi, A);
  set_thread_count(1);
  CHECK(e1.total == e4.total);
  CHECK((g1.values - g4.values).abs().maxCoeff() == 0.0);
}

TEST_CASE("diamagnetic inequality") {
  const auto g = make_grid(2.0, 33);
  SUBCASE("real non-negative states are the equality case") {
    auto psi = random_wave(g, 11);
    psi.values = psi.values.abs().cast<std::complex<double>>();
    CHECK(diamagnetic_margin(psi, VectorField<double>(g)).values.abs().maxCoeff() < 1e-12);
  }
  SUBCASE("holds edgewise for arbitrary data") {
    for (std::uint64_t s = 0; s < 10; ++s)
      CHECK(diamagnetic_margin(random_wave(g, s), random_potential(g, s + 1)).values.minCoeff() >= -1e-12);
  }
  SUBCASE("strict where a pure phase varies") {
    const auto psi = WaveField<double>::sample(g, [](double x1, double x2) {
      return std::polar(1.0, std::sin(x1) + 0.5 * x2 * x2);
    });
    const auto m = diamagnetic_margin(psi, VectorField<double>(g));
    CHECK(m.values.minCoeff() >= 0.0);
    CHECK(m.values.maxCoeff() > 0.0);
  }
}

TEST_CASE("energy vanishes only for covariantly constant unit-modulus states") {
  const auto g = make_grid(1.0, 33);
  const double c = 0.4;
  const auto plane = WaveField<double>::sample(g, [&](double x1, double) { return std::polar(1.0, c * x1); });
  const auto Ac = VectorField<double>::sample(g, [&](double, double) { return std::array{c, 0.0}; });
  CHECK(energy(plane, Ac).total < 1e-24);
  WaveField<double> dented = plane;
  dented(10, 10) *= 0.9;
  CHECK(energy(dented, Ac).total > 1e-6);
}
