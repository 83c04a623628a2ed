#include <algorithm>
#include <random>

#include "doctest.h"
#include "gpmag/grid.hpp"
#include "gpmag/quadrature.hpp"

using namespace gpmag;

namespace {

ScalarField<double> random_field(const GridSpec<double>& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarField<double> f(g);
  for (Index i = 0; i < g.n; ++i)
    for (Index j = 0; j < g.n; ++j) f(i, j) = u(rng);
  return f;
}

// Chord-length integration in x = R sin(t), split where the chord is kinked;
// independent of the piecewise closed form.
double disc_rect_area_oracle(double R, double x0, double x1, double y0, double y1) {
  const auto chord = [&](double t) {
    const double h = R * std::cos(t);
    return std::max(0.0, std::min(y1, h) - std::max(y0, -h)) * R * std::cos(t);
  };
  const double t0 = std::asin(std::clamp(x0 / R, -1.0, 1.0)), t1 = std::asin(std::clamp(x1 / R, -1.0, 1.0));
  std::vector<double> cuts{t0, t1};
  for (double y : {y0, y1})
    if (std::abs(y) < R) {
      const double t = std::acos(std::abs(y) / R);
      for (double c : {t, -t})
        if (c > t0 && c < t1) cuts.push_back(c);
    }
  std::sort(cuts.begin(), cuts.end());
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) area += integrate_1d(chord, cuts[k], cuts[k + 1], 1e-14);
  return area;
}

}  // namespace

TEST_CASE("make_grid spacing and validation") {
  CHECK(make_grid(1.0, 3, 3).spacing == doctest::Approx(1.0));
  CHECK(make_grid(12.0, 257).spacing == 0.09375);
  CHECK_THROWS_AS(make_grid(12.0, 15), ConfigError);
  CHECK_THROWS_AS(make_grid(std::nan(""), 33), ConfigError);
  CHECK_THROWS_AS(make_grid(-1.0, 33), ConfigError);
  const auto g = make_grid(12.0, 257);
  CHECK(g.coord(0) == -12.0);
  CHECK(g.coord(g.center()) == 0.0);
  CHECK(g.coord(256) == 12.0);
}

TEST_CASE("curl and div of linear fields are exact") {
  const auto g = make_grid(3.0, 33);
  const auto rot = VectorField<double>::sample(g, [](double x1, double x2) { return std::array{-x2, x1}; });
  CHECK((curl2d(rot).values - 2.0).abs().maxCoeff() < 1e-12);
  CHECK(div2d(rot).values.abs().maxCoeff() < 1e-12);
  const auto radial = VectorField<double>::sample(g, [](double x1, double x2) { return std::array{x1, x2}; });
  CHECK((div2d(radial).values - 2.0).abs().maxCoeff() < 1e-12);
  // curl of the gradient of |x|^2 vanishes
  const auto chi = ScalarField<double>::sample(g, [](double x1, double x2) { return x1 * x1 + x2 * x2; });
  CHECK(curl2d(gradient(chi)).values.abs().maxCoeff() < 1e-12);
}

TEST_CASE("grad_perp of linear and quadratic potentials") {
  const auto g = make_grid(2.0, 17);
  const auto w1 = ScalarField<double>::sample(g, [](double x1, double) { return x1; });
  const auto A1 = grad_perp(w1);
  CHECK(A1.c1.abs().maxCoeff() < 1e-13);
  CHECK((A1.c2 - 1.0).abs().maxCoeff() < 1e-13);
  const auto w2 = ScalarField<double>::sample(g, [](double x1, double x2) { return 0.5 * (x1 * x1 + x2 * x2); });
  const auto A2 = grad_perp(w2);
  for (Index i = 0; i < g.n; ++i)
    for (Index j = 0; j < g.n; ++j) {
      CHECK(A2.c1(i, j) == doctest::Approx(-g.coord(j)).epsilon(1e-12));
      CHECK(A2.c2(i, j) == doctest::Approx(g.coord(i)).epsilon(1e-12));
    }
}

TEST_CASE("div of grad_perp vanishes at interior nodes for arbitrary w") {
  const auto g = make_grid(1.0, 40);
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto w = random_field(g, seed);
    const auto A = grad_perp(w);
    const double scale = std::max(A.c1.abs().maxCoeff(), A.c2.abs().maxCoeff());
    const Plane<double> d = div2d(A).values * interior_mask(g);
    CHECK(d.abs().maxCoeff() <= 1e-12 * scale);
  }
}

TEST_CASE("difference operators are linear") {
  const auto g = make_grid(1.5, 24);
  const auto f = random_field(g, 7), h = random_field(g, 8);
  const double alpha = 0.37, beta = -2.1;
  const ScalarField<double> comb(g, alpha * f.values + beta * h.values);
  const auto lhs = grad_perp(comb);
  const auto rf = grad_perp(f), rh = grad_perp(h);
  const double scale = lhs.c1.abs().maxCoeff() + lhs.c2.abs().maxCoeff();
  CHECK((lhs.c1 - alpha * rf.c1 - beta * rh.c1).abs().maxCoeff() <= 1e-13 * scale);
  CHECK((lhs.c2 - alpha * rf.c2 - beta * rh.c2).abs().maxCoeff() <= 1e-13 * scale);
  const VectorField<double> vf(g, f.values, h.values), vh(g, h.values, f.values);
  const VectorField<double> vc(g, alpha * vf.c1 + beta * vh.c1, alpha * vf.c2 + beta * vh.c2);
  const double cs = curl2d(vc).values.abs().maxCoeff();
  CHECK((curl2d(vc).values - alpha * curl2d(vf).values - beta * curl2d(vh).values).abs().maxCoeff() <= 1e-13 * cs);
  CHECK((div2d(vc).values - alpha * div2d(vf).values - beta * div2d(vh).values).abs().maxCoeff() <=
        1e-13 * div2d(vc).values.abs().maxCoeff());
  CHECK(integrate(comb, Region::ball(1.2)) ==
        doctest::Approx(alpha * integrate(f, Region::ball(1.2)) + beta * integrate(h, Region::ball(1.2))).epsilon(1e-13));
}

TEST_CASE("disc-rectangle coverage matches chord-length quadrature") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int t = 0; t < 200; ++t) {
    double x0 = u(rng), x1 = u(rng), y0 = u(rng), y1 = u(rng);
    if (x0 > x1) std::swap(x0, x1);
    if (y0 > y1) std::swap(y0, y1);
    CHECK(detail::disc_rect_area(1.0, x0, x1, y0, y1) ==
          doctest::Approx(disc_rect_area_oracle(1.0, x0, x1, y0, y1)).epsilon(1e-10));
  }
  CHECK(detail::disc_rect_area(1.0, -2, 2, -2, 2) == doctest::Approx(std::numbers::pi).epsilon(1e-14));
}

TEST_CASE("integrate: areas and symmetry") {
  const auto g2 = make_grid(2.0, 33);
  const ScalarField<double> one(g2, Plane<double>::Ones(33, 33));
  CHECK(std::abs(integrate(one, Region::full_square()) - 16.0) < 1e-12);
  const auto x = ScalarField<double>::sample(g2, [](double x1, double) { return x1; });
  CHECK(std::abs(integrate(x, Region::full_square())) < 1e-12);

  const auto g4 = make_grid(4.0, 513);
  const ScalarField<double> one4(g4, Plane<double>::Ones(513, 513));
  CHECK(std::abs(integrate(one4, Region::ball(1.0)) - std::numbers::pi) < 1e-3);
  CHECK(integrate(one4, Region::annulus(1.0, 2.0)) == doctest::Approx(3.0 * std::numbers::pi).epsilon(1e-10));
  CHECK_THROWS_AS(integrate(one4, Region::ball(4.5)), ConfigError);
  CHECK_THROWS_AS(Region::annulus(2.0, 1.0), ConfigError);
}

TEST_CASE("ball quadrature converges at order >= 1.5 for a smooth integrand") {
  // int_{B_1} e^{-|x|^2} (1 + x1) = pi (1 - e^{-1})
  const double exact = std::numbers::pi * (1.0 - std::exp(-1.0));
  std::vector<double> err, h;
  for (Index n : {33, 65, 129, 257, 513}) {
    const auto g = make_grid(1.7, n);
    const auto f = ScalarField<double>::sample(g, [](double x1, double x2) {
      return std::exp(-(x1 * x1 + x2 * x2)) * (1.0 + x1);
    });
    err.push_back(std::abs(integrate(f, Region::ball(1.0)) - exact));
    h.push_back(g.spacing);
  }
  // least-squares slope of log(err) against log(h)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(err.size());
  for (std::size_t k = 0; k < err.size(); ++k) {
    const double lx = std::log(h[k]), ly = std::log(err[k]);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
  }
  const double order = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  MESSAGE("observed ball quadrature order " << order);
  CHECK(order >= 1.5);
}

TEST_CASE("norms") {
  const auto g = make_grid(1.0, 17);
  const ScalarField<double> one(g, Plane<double>::Ones(17, 17));
  const auto n1 = norms(one, Region::full_square());
  CHECK(n1.l1 == doctest::Approx(4.0));
  CHECK(n1.l2 == doctest::Approx(2.0));
  CHECK(n1.linf == 1.0);
  const auto n0 = norms(ScalarField<double>(g), Region::full_square());
  CHECK(n0.l1 == 0.0);
  CHECK(n0.l2 == 0.0);
  CHECK(n0.linf == 0.0);

  const auto g12 = make_grid(12.0, 257);
  const auto gauss = ScalarField<double>::sample(g12, [](double x1, double x2) { return std::exp(-(x1 * x1 + x2 * x2)); });
  CHECK(std::abs(norms(gauss, Region::full_square()).l1 - std::numbers::pi) < 1e-6);
}

TEST_CASE("interpolation reproduces cubics and works in single precision") {
  const auto g = make_grid(2.0, 21);
  const auto f = ScalarField<double>::sample(g, [](double x1, double x2) { return x1 * x1 * x1 - 2 * x1 * x2 + x2 * x2; });
  for (auto [p, q] : {std::pair{0.13, -0.71}, {1.93, 1.99}, {-1.999, 0.5}}) {
    CHECK(interpolate(f.values, g, p, q) == doctest::Approx(p * p * p - 2 * p * q + q * q).epsilon(1e-12));
  }
  const auto gf = make_grid(1.0f, 17);
  const auto rot = VectorField<float>::sample(gf, [](float x1, float x2) { return std::array{-x2, x1}; });
  CHECK((curl2d(rot).values - 2.0f).abs().maxCoeff() < 1e-5f);
}

TEST_CASE("fields validate value counts and finiteness") {
  const auto g = make_grid(1.0, 16);
  CHECK_THROWS_AS(ScalarField<double>(g, Plane<double>::Zero(15, 16)), GridMismatch);
  ScalarField<double> f(g);
  f(3, 4) = std::numeric_limits<double>::infinity();
  CHECK_FALSE(f.finite());
  CHECK_THROWS_AS(require_same_grid(g, make_grid(1.0, 17)), GridMismatch);
}
