#include "gpmag/spectral.hpp"

#include "gpmag/gauge.hpp"

namespace gpmag {

namespace {

struct SuiteSetup {
  GridSpec<double> grid;
  VectorField<double> potential;
  ScalarField<double> field;
  int max_mode;
};

SuiteSetup setup(const SuiteOptions& opts) {
  if (opts.trials < 1) throw ConfigError("property suite needs at least one trial");
  const auto grid = make_grid(opts.halfwidth, opts.n);
  require_region_fits(grid, Region::ball(opts.radius));
  const int modes = opts.max_mode > 0 ? opts.max_mode : static_cast<int>(opts.n / 8);
  return {grid, symmetric_gauge(opts.strength, grid),
          ScalarField<double>(grid, Plane<double>::Constant(grid.n, grid.n, opts.strength)), modes};
}

}  // namespace

SuiteResult cutoff_suite(const SuiteOptions& opts) {
  const SuiteSetup s = setup(opts);
  detail::require_nonnegative_on_ball(s.field, opts.radius, 1.0);
  SuiteResult result;
  for (int t = 0; t < opts.trials; ++t) {
    const auto psi = band_limited_state(s.grid, s.max_mode, trial_seed(opts.seed, t));
    const SpectralReport r = cutoff_margin(psi, s.potential, s.field, opts.radius);
    result.rows.push_back({t, r.lhs, r.rhs1, r.rhs2, r.margin});
    const double rel = r.margin / (r.lhs + 1.0);
    result.worst_relative_margin = t == 0 ? rel : std::min(result.worst_relative_margin, rel);
    if (r.margin < -opts.tolerance * (r.lhs + 1.0)) ++result.violations;
  }
  return result;
}

SuiteResult dirichlet_suite(const SuiteOptions& opts) {
  const SuiteSetup s = setup(opts);
  const int sign = opts.strength < 0.0 ? -1 : 1;
  detail::require_nonnegative_on_ball(s.field, opts.radius, sign);
  const double support = opts.radius - 3.0 * s.grid.spacing;
  const ScalarField<double> taper = make_cutoff(support, s.grid);
  SuiteResult result;
  for (int t = 0; t < opts.trials; ++t) {
    auto phi = band_limited_state(s.grid, s.max_mode, trial_seed(opts.seed, t));
    phi.values *= taper.values.cast<std::complex<double>>();
    const DirichletReport r = dirichlet_bound(phi, s.potential, s.field, opts.radius, sign);
    result.rows.push_back({t, r.kinetic, r.field_term, 0.0, r.margin});
    const double rel = r.kinetic > 0.0 ? r.margin / r.kinetic : 0.0;
    result.worst_relative_margin = t == 0 ? rel : std::min(result.worst_relative_margin, rel);
    if (r.margin < -opts.tolerance * r.kinetic) ++result.violations;
  }
  return result;
}

}  // namespace gpmag
