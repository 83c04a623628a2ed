#include "doctest.h"
#include "gpmag/fields.hpp"

using namespace gpmag;

TEST_CASE("sample_field evaluates the catalog") {
  const auto g = make_grid(4.0, 33);
  const auto c = sample_field(FieldSpec{field::Constant{1.0}}, g);
  CHECK((c.values == 1.0).all());

  const FieldSpec gauss = field::Gaussian{1.0, 1.0 / std::sqrt(2.0), {}};
  CHECK(evaluate(gauss, 1.0, 0.0) == doctest::Approx(0.3678794).epsilon(1e-7));

  const FieldSpec bump = field::Bump{2.0, 1.5, {0.5, 0.0}};
  CHECK(evaluate(bump, 2.0, 0.0) == 0.0);
  CHECK(evaluate(bump, 0.5, 0.0) == 2.0);
  // C^1: the radial derivative vanishes at the support boundary
  const double eps = 1e-6;
  CHECK(std::abs(evaluate(bump, 2.0 - eps, 0.0)) / eps < 1e-5);

  const FieldSpec dip = field::Dipole{1.0, 0.5, 1.0, {}};
  CHECK(evaluate(dip, 1.0, 0.0) == doctest::Approx(1.0 - std::exp(-8.0)));
  CHECK(evaluate(dip, -1.0, 0.0) == doctest::Approx(-(1.0 - std::exp(-8.0))));
}

TEST_CASE("sample_field is consistent across nested grids") {
  const FieldSpec gauss = field::Gaussian{1.3, 0.8, {0.2, -0.1}};
  const auto coarse = sample_field(gauss, make_grid(3.0, 17));
  const auto fine = sample_field(gauss, make_grid(3.0, 33));
  for (Index i = 0; i < 17; ++i)
    for (Index j = 0; j < 17; ++j) CHECK(coarse(i, j) == fine(2 * i, 2 * j));
}

TEST_CASE("custom fields require a matching grid") {
  const auto g = make_grid(2.0, 17);
  field::Custom custom{ScalarField<double>(g), "inline"};
  CHECK_NOTHROW(sample_field(FieldSpec{custom}, g));
  CHECK_THROWS_AS(sample_field(FieldSpec{custom}, make_grid(2.0, 19)), GridMismatch);
}

TEST_CASE("validation rejects degenerate parameters") {
  CHECK_THROWS_AS(validate(field::Gaussian{1.0, 0.0, {}}), ConfigError);
  CHECK_THROWS_AS(validate(field::Bump{1.0, -1.0, {}}), ConfigError);
  CHECK_THROWS_AS(validate(field::Dipole{1.0, 1.0, 0.0, {}}), ConfigError);
}

TEST_CASE("total flux") {
  CHECK(total_flux(field::Dipole{}) == 0.0);
  CHECK(*total_flux(field::Gaussian{}) == doctest::Approx(std::numbers::pi));
  CHECK_FALSE(total_flux(field::Constant{1.0}).has_value());
  CHECK(*total_flux(field::Constant{0.0}) == 0.0);
  CHECK(*total_flux(field::Bump{2.0, 1.5, {}}) == doctest::Approx(2.0 * std::numbers::pi * 1.5 * 1.5 / 3.0));
}

TEST_CASE("flux of sampled fields agrees with the closed form") {
  const auto g = make_grid(8.0, 257);  // L >= 6 sigma for every entry
  for (const FieldSpec& spec : {FieldSpec{field::Gaussian{1.0, 1.0, {0.5, 0.0}}}, FieldSpec{field::Bump{1.0, 2.0, {}}},
                                FieldSpec{field::Gaussian{2.0, 0.7, {}}}}) {
    const field::Custom custom{sample_field(spec, g), "sampled"};
    const double exact = *total_flux(spec);
    CHECK(*total_flux(FieldSpec{custom}) == doctest::Approx(exact).epsilon(1e-3));
  }
}

TEST_CASE("hypothesis report") {
  const auto g = make_grid(12.0, 257);
  const auto c = hypothesis_report(field::Constant{1.0}, g);
  CHECK(c.sign_constant);
  CHECK(c.linf == 1.0);
  CHECK(c.l1 == doctest::Approx(576.0));
  CHECK(hypothesis_report(field::Constant{1.0}, make_grid(24.0, 257)).l1 > c.l1);
  CHECK_FALSE(c.flux.has_value());

  const auto gs = hypothesis_report(field::Gaussian{}, g);
  CHECK(gs.sign_constant);
  CHECK(gs.nonnegative);
  CHECK(gs.l1 == doctest::Approx(std::numbers::pi).epsilon(1e-6));
  CHECK(gs.linf == 1.0);

  CHECK_FALSE(hypothesis_report(field::Dipole{}, g).sign_constant);
}

TEST_CASE("radial pieces reproduce the field") {
  const FieldSpec dip = field::Dipole{1.5, 0.8, 1.2, {0.3, 0.1}};
  const auto pieces = radial_pieces(dip);
  REQUIRE(pieces.size() == 2);
  for (auto [x1, x2] : {std::pair{0.0, 0.0}, {1.4, 0.2}, {-1.0, -0.5}}) {
    double v = 0;
    for (const auto& p : pieces) v += p.sign * p.profile(std::hypot(x1 - p.center.x1, x2 - p.center.x2));
    CHECK(v == doctest::Approx(evaluate(dip, x1, x2)));
  }
}
