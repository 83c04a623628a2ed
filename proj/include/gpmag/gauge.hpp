#pragma once

// Vector potentials from magnetic fields: the Coulomb gauge A' = grad_perp(G * B)
// with G the logarithmic fundamental solution of the 2D Laplacian, the
// symmetric gauge for constant fields, lattice gauge transformations, and a
// radial circulation oracle used for verification and far-field extension.

#include <unsupported/Eigen/FFT>

#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include "gpmag/fields.hpp"
#include "gpmag/grid.hpp"
#include "gpmag/quadrature.hpp"

namespace gpmag {

/// Smallest size >= n whose only prime factors are 2, 3 and 5.
inline Index fast_fft_size(Index n) {
  for (Index m = std::max<Index>(n, 1);; ++m) {
    Index r = m;
    for (Index p : {2, 3, 5})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

/// ln|x| / 2pi sampled on lattice offsets, with the origin replaced by its
/// average over the central cell [-a/2, a/2]^2.
template <typename Scalar>
class KernelSpec {
 public:
  using Complex = std::complex<Scalar>;

  explicit KernelSpec(const GridSpec<Scalar>& grid)
      : grid_(grid), padded_(fast_fft_size(2 * grid.n - 1)) {
    origin_ = origin_cell_average(grid.spacing);
    Plane<Complex> k = Plane<Complex>::Zero(padded_, padded_);
    const Index n = grid.n;
    for (Index di = -(n - 1); di <= n - 1; ++di)
      for (Index dj = -(n - 1); dj <= n - 1; ++dj)
        k(wrap(di), wrap(dj)) = Complex(value(di, dj), 0);
    fft2(k, false);
    spectrum_ = std::move(k);
  }

  const GridSpec<Scalar>& grid() const { return grid_; }
  Index padded_size() const { return padded_; }
  Scalar origin_value() const { return origin_; }

  Scalar value(Index di, Index dj) const {
    if (di == 0 && dj == 0) return origin_;
    const Scalar a = grid_.spacing;
    const Scalar r = a * std::hypot(static_cast<Scalar>(di), static_cast<Scalar>(dj));
    return std::log(r) / (Scalar(2) * std::numbers::pi_v<Scalar>);
  }

  /// (1/2pi) * mean of ln|x| over the square of side a centred at 0:
  /// ln(a/2) + (ln 2 - 3 + pi/2) / 2, from int_{[0,1]^2} ln(x^2 + y^2) = ln 2 - 3 + pi/2.
  static Scalar origin_cell_average(Scalar a) {
    using std::numbers::pi_v;
    const Scalar mean_log = std::log(a / Scalar(2)) +
                            Scalar(0.5) * (std::numbers::ln2_v<Scalar> - Scalar(3) + pi_v<Scalar> / Scalar(2));
    return mean_log / (Scalar(2) * pi_v<Scalar>);
  }

  /// Free-space discrete convolution a^2 sum_q K(p - q) f(q), exact for the
  /// linear (non-periodic) sum since the padded size is >= 2n - 1.
  Plane<Scalar> convolve(const Plane<Scalar>& f) const {
    const Index n = grid_.n;
    Plane<Complex> buf = Plane<Complex>::Zero(padded_, padded_);
    buf.block(0, 0, n, n) = f.template cast<Complex>();
    fft2(buf, false);
    buf *= spectrum_;
    fft2(buf, true);
    const Scalar a2 = grid_.spacing * grid_.spacing;
    return buf.block(0, 0, n, n).real() * a2;
  }

 private:
  Index wrap(Index d) const { return d >= 0 ? d : d + padded_; }

  static void fft2(Plane<Complex>& data, bool inverse) {
    Eigen::FFT<Scalar> fft;
    const Index m = data.rows();
    std::vector<Complex> in(static_cast<std::size_t>(m)), out(static_cast<std::size_t>(m));
    auto pass = [&](auto&& get, auto&& set) {
      for (Index r = 0; r < m; ++r) {
        for (Index k = 0; k < m; ++k) in[static_cast<std::size_t>(k)] = get(r, k);
        if (inverse)
          fft.inv(out, in);
        else
          fft.fwd(out, in);
        for (Index k = 0; k < m; ++k) set(r, k, out[static_cast<std::size_t>(k)]);
      }
    };
    pass([&](Index r, Index k) { return data(r, k); }, [&](Index r, Index k, Complex v) { data(r, k) = v; });
    pass([&](Index c, Index k) { return data(k, c); }, [&](Index c, Index k, Complex v) { data(k, c) = v; });
  }

  GridSpec<Scalar> grid_;
  Index padded_;
  Scalar origin_{};
  Plane<Complex> spectrum_;
};

/// Kernels are built once per grid; concurrent readers share them.
template <typename Scalar>
std::shared_ptr<const KernelSpec<Scalar>> cached_kernel(const GridSpec<Scalar>& grid) {
  static std::mutex mutex;
  static std::map<std::pair<Index, Scalar>, std::shared_ptr<const KernelSpec<Scalar>>> cache;
  const auto key = std::make_pair(grid.n, grid.halfwidth);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto kernel = std::make_shared<const KernelSpec<Scalar>>(grid);
  std::lock_guard lock(mutex);
  return cache.try_emplace(key, std::move(kernel)).first->second;
}

struct GrowthRow {
  double radius = 0.0;
  double integral = 0.0;  // int_{B(0,R)} |A|^2
};

template <typename Scalar>
struct GaugeReport {
  ScalarField<Scalar> w;
  VectorField<Scalar> potential;
  double curl_residual = 0.0;     // ||curl A' - B||_2 / ||B||_2
  double div_residual = 0.0;      // ||div A'||_2 over interior nodes
  double div_residual_sup = 0.0;  // max |div A'| over interior nodes
  int correction_sweeps = 0;
  std::vector<GrowthRow> growth;
  std::vector<std::string> warnings;
};

struct GaugeOptions {
  /// Defect-correction sweeps w <- w + G * (B - curl grad_perp w) on interior
  /// nodes. Zero gives the plain convolution.
  int max_correction_sweeps = 12;
  double correction_tolerance = 1e-11;
  std::vector<double> growth_radii;
};

/// Profile of int_{B(0,R)} |A|^2 over the requested radii (all <= L).
template <typename Scalar>
std::vector<GrowthRow> l2_growth_profile(const VectorField<Scalar>& A, std::span<const double> radii) {
  std::vector<GrowthRow> rows;
  rows.reserve(radii.size());
  const Plane<Scalar> density = A.c1.square() + A.c2.square();
  for (double R : radii) {
    if (!(R > 0.0) || R > static_cast<double>(A.grid.halfwidth) * (1.0 + 1e-12))
      throw ConfigError("growth radius " + std::to_string(R) + " outside (0, L]");
    rows.push_back({R, static_cast<double>(weighted_sum<Scalar>(density, node_weights(A.grid, Region::ball(R))))});
  }
  return rows;
}

template <typename Scalar>
GaugeReport<Scalar> coulomb_gauge(const ScalarField<Scalar>& B, const GaugeOptions& opts = {}) {
  if (!B.finite()) throw NumericalError("magnetic field has non-finite samples");
  const auto& g = B.grid;
  GaugeReport<Scalar> report;

  const Scalar bmax = B.values.abs().maxCoeff();
  if (bmax > Scalar(0)) {
    const Region rim = Region::annulus(0.9 * static_cast<double>(g.halfwidth), static_cast<double>(g.halfwidth));
    const Scalar rim_max = norms(B, rim).linf;
    if (rim_max >= Scalar(1e-8) * bmax)
      report.warnings.push_back("field is not negligible near the boundary (rim max " +
                                std::to_string(static_cast<double>(rim_max / bmax)) +
                                " of peak); truncation error of the free-space convolution dominates");
  }

  const auto kernel = cached_kernel(g);
  const Plane<Scalar> interior = interior_mask(g);
  Plane<Scalar> w = kernel->convolve(B.values);
  for (int sweep = 0; sweep < opts.max_correction_sweeps; ++sweep) {
    const ScalarField<Scalar> wf(g, w);
    const Plane<Scalar> defect = (B.values - curl2d(grad_perp(wf)).values) * interior;
    const Scalar dmax = defect.abs().maxCoeff();
    if (!(dmax > Scalar(opts.correction_tolerance) * bmax)) break;
    w += kernel->convolve(defect);
    report.correction_sweeps = sweep + 1;
  }

  report.w = ScalarField<Scalar>(g, std::move(w));
  report.potential = grad_perp(report.w);
  if (!report.potential.finite()) throw NumericalError("Coulomb potential is not finite");

  const Plane<Scalar> full = node_weights(g, Region::full_square());
  const Plane<Scalar> curl_err = curl2d(report.potential).values - B.values;
  const Scalar bnorm = std::sqrt(weighted_sum<Scalar>(B.values.square(), full));
  const Scalar enorm = std::sqrt(weighted_sum<Scalar>(curl_err.square(), full));
  report.curl_residual = bnorm > Scalar(0) ? static_cast<double>(enorm / bnorm) : static_cast<double>(enorm);
  const Plane<Scalar> div = div2d(report.potential).values * interior;
  report.div_residual = static_cast<double>(std::sqrt(weighted_sum<Scalar>(div.square(), full)));
  report.div_residual_sup = static_cast<double>(div.abs().maxCoeff());
  report.growth = l2_growth_profile(report.potential, opts.growth_radii);
  return report;
}

/// A = (B0 / 2) (-x2, x1).
template <typename Scalar>
VectorField<Scalar> symmetric_gauge(Scalar strength, const GridSpec<Scalar>& grid) {
  return VectorField<Scalar>::sample(grid, [&](Scalar x1, Scalar x2) {
    return std::array<Scalar, 2>{-strength / 2 * x2, strength / 2 * x1};
  });
}

/// Nodal field G whose endpoint averages along every lattice edge equal the
/// edge difference quotient of chi. Each grid line leaves one alternating
/// mode free; it is fixed by least squares against the nodal derivative.
template <typename Scalar>
VectorField<Scalar> lattice_gradient(const ScalarField<Scalar>& chi) {
  const auto& g = chi.grid;
  const Index n = g.n;
  const Scalar a = g.spacing;
  const Plane<Scalar> target1 = partial(chi.values, a, 0);
  const Plane<Scalar> target2 = partial(chi.values, a, 1);
  VectorField<Scalar> G(g);
  std::vector<Scalar> line(static_cast<std::size_t>(n));
  auto solve_line = [&](auto&& at_chi, auto&& at_target, auto&& store) {
    line[0] = 0;
    for (Index k = 0; k + 1 < n; ++k)
      line[static_cast<std::size_t>(k + 1)] =
          Scalar(2) * (at_chi(k + 1) - at_chi(k)) / a - line[static_cast<std::size_t>(k)];
    Scalar alt = 0;
    for (Index k = 0; k < n; ++k) {
      const Scalar sign = (k % 2 == 0) ? Scalar(1) : Scalar(-1);
      alt += sign * (at_target(k) - line[static_cast<std::size_t>(k)]);
    }
    alt /= static_cast<Scalar>(n);
    for (Index k = 0; k < n; ++k) store(k, line[static_cast<std::size_t>(k)] + ((k % 2 == 0) ? alt : -alt));
  };
  for (Index j = 0; j < n; ++j)
    solve_line([&](Index k) { return chi.values(k, j); }, [&](Index k) { return target1(k, j); },
               [&](Index k, Scalar v) { G.c1(k, j) = v; });
  for (Index i = 0; i < n; ++i)
    solve_line([&](Index k) { return chi.values(i, k); }, [&](Index k) { return target2(i, k); },
               [&](Index k, Scalar v) { G.c2(i, k) = v; });
  return G;
}

/// (psi e^{i chi}, A + grad chi) with the lattice-consistent gradient, which
/// leaves the discrete energy invariant.
template <typename Scalar>
std::pair<WaveField<Scalar>, VectorField<Scalar>> gauge_transform(const WaveField<Scalar>& psi,
                                                                   const VectorField<Scalar>& A,
                                                                   const ScalarField<Scalar>& chi) {
  require_same_grid(psi.grid, A.grid);
  require_same_grid(psi.grid, chi.grid);
  WaveField<Scalar> out(psi.grid);
  out.values = psi.values * chi.values.unaryExpr([](Scalar c) { return std::polar(Scalar(1), c); });
  const VectorField<Scalar> G = lattice_gradient(chi);
  return {std::move(out), VectorField<Scalar>(A.grid, A.c1 + G.c1, A.c2 + G.c2)};
}

// ---------------------------------------------------------------------------
// Radial oracle: for a field radial about the origin, the circulation identity
// gives the Coulomb potential's tangential component
//   A_theta(r) = (1/r) int_0^r s B(s) ds.

template <typename Profile>
double radial_oracle_at(Profile&& profile, double r, double tol = 1e-13) {
  if (r <= 0.0) return 0.0;
  const double enclosed = integrate_1d([&](double s) { return s * profile(s); }, 0.0, r, tol * std::max(1.0, r));
  return enclosed / r;
}

template <typename Profile>
std::vector<double> radial_oracle(Profile&& profile, std::span<const double> radii) {
  std::vector<double> out;
  out.reserve(radii.size());
  for (double r : radii) out.push_back(radial_oracle_at(profile, r));
  return out;
}

/// Coulomb potential of a field built from radial pieces, by superposition of
/// the per-piece circulation identity. Counterclockwise for positive flux.
std::array<double, 2> oracle_potential(std::span<const RadialPiece> pieces, double x1, double x2);

/// int over annulus(r0, r1) of |A|^2 for the superposed oracle potential.
double oracle_annulus_integral(std::span<const RadialPiece> pieces, double r0, double r1);

/// Growth profile that uses the grid potential inside `grid_radius` and the
/// oracle superposition on the annulus beyond it.
template <typename Scalar>
std::vector<GrowthRow> extended_growth_profile(const VectorField<Scalar>& A, std::span<const RadialPiece> pieces,
                                               double grid_radius, std::span<const double> radii) {
  if (pieces.empty()) throw ConfigError("oracle extension needs a field made of radial pieces");
  const double base = radii.empty() ? 0.0
                                    : l2_growth_profile(A, std::span<const double>(&grid_radius, 1)).front().integral;
  std::vector<GrowthRow> rows;
  for (double R : radii) {
    if (R <= grid_radius) {
      rows.push_back(l2_growth_profile(A, std::span<const double>(&R, 1)).front());
    } else {
      rows.push_back({R, base + oracle_annulus_integral(pieces, grid_radius, R)});
    }
  }
  return rows;
}

}  // namespace gpmag
