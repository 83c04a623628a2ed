#pragma once

// Monotone descent on the discrete energy plus the diagnostics expected of
// minimizers: modulus bound, Euler-Lagrange residual, far-field modulus
// profile, winding numbers and the smooth-phase decomposition psi = rho e^{i chi}.

#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "gpmag/energy.hpp"
#include "gpmag/grid.hpp"

namespace gpmag {

struct MinimizeOptions {
  long max_iterations = 200000;
  /// Converged when the energy drops by less than this fraction over
  /// `energy_window` consecutive accepted steps.
  double energy_tolerance = 1e-10;
  int energy_window = 10;
  double gradient_tolerance = 1e-6;  // sup-norm of the discrete gradient
  bool project_modulus = false;      // clamp |psi| <= 1 after every step
  double initial_step = 0.1;
  double min_step = 1e-16;
  std::vector<double> profile_radii;  // empty: 20 radii up to 0.95 L

  void validate() const {
    if (max_iterations < 1) throw ConfigError("max_iterations must be >= 1");
    if (!(energy_tolerance > 0.0) || !(gradient_tolerance > 0.0)) throw ConfigError("tolerances must be positive");
    if (energy_window < 1) throw ConfigError("energy_window must be >= 1");
    if (!(initial_step > 0.0)) throw ConfigError("initial_step must be positive");
  }
};

struct ProfileRow {
  double radius = 0.0;
  double min_modulus = 0.0;
  double mean_modulus = 0.0;
};

template <typename Scalar>
struct MinimizeReport {
  WaveField<Scalar> state;
  std::vector<double> energy_history;
  std::vector<double> gradient_history;
  EnergyReport final_energy;
  double gradient_sup = 0.0;
  double el_residual = 0.0;
  double max_modulus = 0.0;
  std::vector<ProfileRow> modulus_profile;
  bool converged = false;
  long iterations = 0;
  std::string stop_reason;
};

template <typename Scalar>
Scalar sup_norm(const WaveField<Scalar>& f) {
  return f.values.abs().maxCoeff();
}

/// sup over interior nodes of |dE/dpsi| / (node quadrature weight): the
/// discrete form of -(grad - iA)^2 psi - (1 - |psi|^2) psi.
template <typename Scalar>
double el_residual(const EnergyFunctional<Scalar>& functional, const WaveField<Scalar>& gradient) {
  const Index n = gradient.grid.n;
  const auto& w = functional.node_weights_plane();
  Scalar r = 0;
  for (Index i = 1; i + 1 < n; ++i)
    for (Index j = 1; j + 1 < n; ++j) r = std::max(r, std::abs(gradient.values(i, j)) / w(i, j));
  return static_cast<double>(r);
}

template <typename Scalar>
double el_residual(const WaveField<Scalar>& psi, const VectorField<Scalar>& A) {
  require_same_grid(psi.grid, A.grid);
  const EnergyFunctional<Scalar> functional(A);
  return el_residual(functional, functional.gradient(psi));
}

/// min and mean of |psi| on circles about the origin.
template <typename Scalar>
std::vector<ProfileRow> modulus_profile(const WaveField<Scalar>& psi, std::span<const double> radii) {
  const auto& g = psi.grid;
  const Plane<Scalar> rho = psi.modulus();
  std::vector<ProfileRow> rows;
  for (double r : radii) {
    if (!(r >= 0.0) || r > static_cast<double>(g.halfwidth)) throw ConfigError("profile radius outside [0, L]");
    const int samples = std::max(32, 4 * static_cast<int>(std::ceil(2.0 * std::numbers::pi * r / g.spacing)));
    ProfileRow row{r, std::numeric_limits<double>::infinity(), 0.0};
    for (int k = 0; k < samples; ++k) {
      const double t = 2.0 * std::numbers::pi * k / samples;
      const double v = static_cast<double>(
          interpolate(rho, g, static_cast<Scalar>(r * std::cos(t)), static_cast<Scalar>(r * std::sin(t))));
      row.min_modulus = std::min(row.min_modulus, v);
      row.mean_modulus += v / samples;
    }
    rows.push_back(row);
  }
  return rows;
}

template <typename Scalar>
std::vector<double> default_profile_radii(const GridSpec<Scalar>& g) {
  std::vector<double> r;
  for (int k = 1; k <= 20; ++k) r.push_back(0.95 * static_cast<double>(g.halfwidth) * k / 20.0);
  return r;
}

template <typename Scalar>
void project_modulus(WaveField<Scalar>& psi) {
  psi.values = psi.values.unaryExpr([](std::complex<Scalar> z) {
    const Scalar m = std::abs(z);
    return m > Scalar(1) ? z / m : z;
  });
}

namespace detail {
template <typename Scalar>
Scalar real_inner(const Plane<std::complex<Scalar>>& x, const Plane<std::complex<Scalar>>& y) {
  return (x.real() * y.real() + x.imag() * y.imag()).sum();
}
}  // namespace detail

/// Gradient descent with alternating Barzilai-Borwein steps. Every accepted
/// step strictly lowers the energy; rejected steps are halved.
template <typename Scalar>
MinimizeReport<Scalar> minimize(const WaveField<Scalar>& psi0, const VectorField<Scalar>& A,
                                const MinimizeOptions& opts = {}) {
  opts.validate();
  require_same_grid(psi0.grid, A.grid);
  if (!psi0.finite()) throw NumericalError("initial state has non-finite values");
  const EnergyFunctional<Scalar> functional(A);

  MinimizeReport<Scalar> report;
  WaveField<Scalar> psi = psi0;
  if (opts.project_modulus) project_modulus(psi);
  Scalar E = functional.value(psi);
  WaveField<Scalar> g = functional.gradient(psi);
  report.energy_history.push_back(static_cast<double>(E));
  Scalar gsup = sup_norm(g);
  report.gradient_history.push_back(static_cast<double>(gsup));

  Scalar step = static_cast<Scalar>(opts.initial_step);
  long it = 0;
  for (;; ++it) {
    if (gsup <= Scalar(opts.gradient_tolerance)) {
      report.converged = true;
      report.stop_reason = "gradient tolerance";
      break;
    }
    const auto& h = report.energy_history;
    if (static_cast<long>(h.size()) > opts.energy_window) {
      const double old = h[h.size() - 1 - static_cast<std::size_t>(opts.energy_window)];
      const double drop = old - h.back();
      if (drop <= opts.energy_tolerance * std::max(std::abs(h.back()), std::numeric_limits<double>::min())) {
        report.converged = true;
        report.stop_reason = "energy tolerance";
        break;
      }
    }
    if (it >= opts.max_iterations) {
      report.stop_reason = "iteration cap";
      break;
    }

    WaveField<Scalar> trial(psi.grid);
    Scalar E_trial = E;
    bool accepted = false;
    while (step >= Scalar(opts.min_step)) {
      trial.values = psi.values - step * g.values;
      if (opts.project_modulus) project_modulus(trial);
      E_trial = functional.value(trial);
      if (std::isfinite(static_cast<double>(E_trial)) && E_trial < E) {
        accepted = true;
        break;
      }
      step /= Scalar(2);
    }
    if (!accepted) {
      // No representable decrease along the gradient remains.
      report.converged = true;
      report.stop_reason = "energy tolerance (no decrease at machine precision)";
      break;
    }

    WaveField<Scalar> g_new = functional.gradient(trial);
    if (!g_new.finite()) throw NumericalError("gradient became non-finite at iteration " + std::to_string(it));
    const Plane<std::complex<Scalar>> s = trial.values - psi.values;
    const Plane<std::complex<Scalar>> y = g_new.values - g.values;
    const Scalar sy = detail::real_inner(s, y);
    if (sy > Scalar(0)) {
      step = (it % 2 == 0) ? detail::real_inner(s, s) / sy : sy / detail::real_inner(y, y);
    } else {
      step *= Scalar(2);
    }
    psi = std::move(trial);
    g = std::move(g_new);
    E = E_trial;
    gsup = sup_norm(g);
    report.energy_history.push_back(static_cast<double>(E));
    report.gradient_history.push_back(static_cast<double>(gsup));
  }

  report.iterations = it;
  report.max_modulus = static_cast<double>(psi.values.abs().maxCoeff());
  report.final_energy = functional.report(psi);
  report.gradient_sup = static_cast<double>(gsup);
  report.el_residual = el_residual(functional, g);
  const std::vector<double> radii =
      opts.profile_radii.empty() ? default_profile_radii(psi.grid) : opts.profile_radii;
  report.modulus_profile = modulus_profile(psi, radii);
  report.state = std::move(psi);
  return report;
}

// ---------------------------------------------------------------------------
// Initializers

/// tanh(r / r_c) e^{i n theta}
template <typename Scalar>
WaveField<Scalar> winding_ansatz(const GridSpec<Scalar>& g, int winding, Scalar core_radius) {
  if (!(core_radius > Scalar(0))) throw ConfigError("core radius must be positive");
  return WaveField<Scalar>::sample(g, [&](Scalar x1, Scalar x2) {
    const Scalar r = std::hypot(x1, x2);
    if (r == Scalar(0)) return std::complex<Scalar>(0);
    return std::polar(std::tanh(r / core_radius), static_cast<Scalar>(winding) * std::atan2(x2, x1));
  });
}

/// 1 + amplitude * (complex Gaussian noise), deterministic in the seed.
template <typename Scalar>
WaveField<Scalar> random_perturbation(const GridSpec<Scalar>& g, Scalar amplitude, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  WaveField<Scalar> psi(g);
  for (Index i = 0; i < g.n; ++i)
    for (Index j = 0; j < g.n; ++j) {
      const double re = normal(rng), im = normal(rng);
      psi.values(i, j) = std::complex<Scalar>(Scalar(1) + amplitude * Scalar(re), amplitude * Scalar(im));
    }
  return psi;
}

// ---------------------------------------------------------------------------
// Winding and phase

/// Integer phase circulation of psi around the circle |x| = R. Throws when
/// |psi| <= 0.1 somewhere on the contour (a vortex sits on it).
template <typename Scalar>
int winding_number(const WaveField<Scalar>& psi, double radius) {
  const auto& g = psi.grid;
  if (!(radius > 0.0) || radius > static_cast<double>(g.halfwidth))
    throw ConfigError("winding radius must lie in (0, L]");
  const int samples = std::max(64, 8 * static_cast<int>(std::ceil(2.0 * std::numbers::pi * radius / g.spacing)));
  std::vector<std::complex<Scalar>> z(static_cast<std::size_t>(samples));
  for (int k = 0; k < samples; ++k) {
    const double t = 2.0 * std::numbers::pi * k / samples;
    z[static_cast<std::size_t>(k)] = interpolate(psi.values, g, static_cast<Scalar>(radius * std::cos(t)),
                                                 static_cast<Scalar>(radius * std::sin(t)));
    if (std::abs(z[static_cast<std::size_t>(k)]) <= Scalar(0.1))
      throw NumericalError("modulus too small on the winding contour (vortex on the circle r = " +
                           std::to_string(radius) + ")");
  }
  double total = 0.0;
  for (int k = 0; k < samples; ++k) {
    const auto a = z[static_cast<std::size_t>(k)], b = z[static_cast<std::size_t>((k + 1) % samples)];
    total += static_cast<double>(std::arg(b * std::conj(a)));
  }
  return static_cast<int>(std::lround(total / (2.0 * std::numbers::pi)));
}

template <typename Scalar>
struct PhaseDecomposition {
  ScalarField<Scalar> modulus;
  ScalarField<Scalar> phase;  // zero outside the mask
  Plane<unsigned char> mask;  // 1 where modulus > threshold
  std::vector<int> windings;
  double residual = 0.0;  // || Abar - (chi(x + a e) - chi(x)) / a || over masked edges
};

/// Unwraps the phase along a breadth-first spanning tree of the above-threshold
/// nodes. The set must be connected and free of holes; a hole means a vortex
/// obstructs a single-valued smooth phase.
template <typename Scalar>
PhaseDecomposition<Scalar> phase_extract(const WaveField<Scalar>& psi, const VectorField<Scalar>& A,
                                         Scalar threshold = Scalar(0.2), std::span<const double> circles = {}) {
  require_same_grid(psi.grid, A.grid);
  const auto& g = psi.grid;
  const Index n = g.n;
  PhaseDecomposition<Scalar> out;
  out.modulus = ScalarField<Scalar>(g, psi.modulus());
  out.phase = ScalarField<Scalar>(g);
  out.mask = (out.modulus.values > threshold).template cast<unsigned char>();

  std::vector<std::pair<Index, Index>> queue;
  Plane<unsigned char> seen = Plane<unsigned char>::Zero(n, n);
  Index components = 0;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (!out.mask(i, j) || seen(i, j)) continue;
      ++components;
      if (components > 1) continue;
      out.phase.values(i, j) = std::arg(psi.values(i, j));
      seen(i, j) = 1;
      queue.assign(1, {i, j});
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto [ci, cj] = queue[head];
        const std::array<std::pair<Index, Index>, 4> nbrs{{{ci + 1, cj}, {ci - 1, cj}, {ci, cj + 1}, {ci, cj - 1}}};
        for (auto [ni, nj] : nbrs) {
          if (ni < 0 || nj < 0 || ni >= n || nj >= n || !out.mask(ni, nj) || seen(ni, nj)) continue;
          seen(ni, nj) = 1;
          out.phase.values(ni, nj) =
              out.phase.values(ci, cj) + std::arg(psi.values(ni, nj) * std::conj(psi.values(ci, cj)));
          queue.push_back({ni, nj});
        }
      }
    }
  if (components == 0) throw NumericalError("no node has modulus above the phase threshold");
  if (components > 1)
    throw NumericalError("above-threshold region is disconnected (" + std::to_string(components) + " components)");

  // Holes: 8-connected background components that do not reach the border.
  Plane<unsigned char> bg_seen = Plane<unsigned char>::Zero(n, n);
  Index holes = 0;
  std::pair<Index, Index> first_hole{-1, -1};
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (out.mask(i, j) || bg_seen(i, j)) continue;
      bool touches_border = false;
      bg_seen(i, j) = 1;
      queue.assign(1, {i, j});
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto [ci, cj] = queue[head];
        if (ci == 0 || cj == 0 || ci == n - 1 || cj == n - 1) touches_border = true;
        for (Index di = -1; di <= 1; ++di)
          for (Index dj = -1; dj <= 1; ++dj) {
            const Index ni = ci + di, nj = cj + dj;
            if (ni < 0 || nj < 0 || ni >= n || nj >= n || out.mask(ni, nj) || bg_seen(ni, nj)) continue;
            bg_seen(ni, nj) = 1;
            queue.push_back({ni, nj});
          }
      }
      if (!touches_border) {
        if (holes == 0) first_hole = {i, j};
        ++holes;
      }
    }
  if (holes > 0)
    throw NumericalError("above-threshold region is multiply connected: " + std::to_string(holes) +
                         " hole(s), first near (" + std::to_string(static_cast<double>(g.coord(first_hole.first))) +
                         ", " + std::to_string(static_cast<double>(g.coord(first_hole.second))) +
                         "); a vortex obstructs a smooth phase");

  const Plane<Scalar> w1 = edge_weights(g, Region::full_square(), 0);
  const Plane<Scalar> w2 = edge_weights(g, Region::full_square(), 1);
  CompensatedSum<Scalar> acc;
  const Scalar a = g.spacing;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (!out.mask(i, j)) continue;
      if (i + 1 < n && out.mask(i + 1, j)) {
        const Scalar d = (A.c1(i, j) + A.c1(i + 1, j)) / 2 - (out.phase(i + 1, j) - out.phase(i, j)) / a;
        acc.add(w1(i, j) * d * d);
      }
      if (j + 1 < n && out.mask(i, j + 1)) {
        const Scalar d = (A.c2(i, j) + A.c2(i, j + 1)) / 2 - (out.phase(i, j + 1) - out.phase(i, j)) / a;
        acc.add(w2(i, j) * d * d);
      }
    }
  out.residual = static_cast<double>(std::sqrt(acc.value()));
  for (double r : circles) out.windings.push_back(winding_number(psi, r));
  return out;
}

}  // namespace gpmag
