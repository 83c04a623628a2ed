#pragma once

// Uniform node-centered grid on [-L, L]^2, the real/vector/complex fields that
// live on it, second-order difference operators, and region quadrature.

#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "gpmag/errors.hpp"
#include "gpmag/parallel.hpp"

namespace gpmag {

using Index = Eigen::Index;

/// Node values, row index i runs along x1, column index j along x2.
template <typename Scalar>
using Plane = Eigen::Array<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr Index kMinGridPoints = 16;

template <typename Scalar>
struct GridSpec {
  Scalar halfwidth{};
  Index n{};
  Scalar spacing{};

  Scalar coord(Index i) const { return -halfwidth + spacing * static_cast<Scalar>(i); }
  Index center() const { return (n - 1) / 2; }

  friend bool operator==(const GridSpec& a, const GridSpec& b) {
    return a.n == b.n && a.halfwidth == b.halfwidth;
  }
};

/// Spacing is 2L/(n-1); the origin is a node when n is odd.
template <typename Scalar>
GridSpec<Scalar> make_grid(Scalar halfwidth, Index n, Index min_points = kMinGridPoints) {
  if (!std::isfinite(static_cast<double>(halfwidth)) || !(halfwidth > Scalar(0)))
    throw ConfigError("grid halfwidth must be finite and positive");
  if (n < std::max<Index>(min_points, 2))
    throw ConfigError("grid needs at least " + std::to_string(min_points) +
                      " points per axis, got " + std::to_string(n));
  return {halfwidth, n, Scalar(2) * halfwidth / static_cast<Scalar>(n - 1)};
}

template <typename Scalar>
void require_same_grid(const GridSpec<Scalar>& a, const GridSpec<Scalar>& b) {
  if (!(a == b)) throw GridMismatch("fields live on different grids");
}

namespace detail {
template <typename Derived>
bool all_finite(const Eigen::ArrayBase<Derived>& a) {
  for (Index i = 0; i < a.size(); ++i)
    if (!std::isfinite(std::abs(a.derived().data()[i]))) return false;
  return true;
}
}  // namespace detail

template <typename Scalar>
struct ScalarField {
  GridSpec<Scalar> grid;
  Plane<Scalar> values;

  ScalarField() = default;
  explicit ScalarField(const GridSpec<Scalar>& g) : grid(g), values(Plane<Scalar>::Zero(g.n, g.n)) {}
  ScalarField(const GridSpec<Scalar>& g, Plane<Scalar> v) : grid(g), values(std::move(v)) {
    if (values.rows() != g.n || values.cols() != g.n) throw GridMismatch("value count must equal n^2");
  }

  Scalar operator()(Index i, Index j) const { return values(i, j); }
  Scalar& operator()(Index i, Index j) { return values(i, j); }
  bool finite() const { return detail::all_finite(values); }

  template <typename Fn>
  static ScalarField sample(const GridSpec<Scalar>& g, Fn&& fn) {
    ScalarField f(g);
    for (Index i = 0; i < g.n; ++i)
      for (Index j = 0; j < g.n; ++j) f.values(i, j) = fn(g.coord(i), g.coord(j));
    return f;
  }
};

template <typename Scalar>
struct VectorField {
  GridSpec<Scalar> grid;
  Plane<Scalar> c1;
  Plane<Scalar> c2;

  VectorField() = default;
  explicit VectorField(const GridSpec<Scalar>& g)
      : grid(g), c1(Plane<Scalar>::Zero(g.n, g.n)), c2(Plane<Scalar>::Zero(g.n, g.n)) {}
  VectorField(const GridSpec<Scalar>& g, Plane<Scalar> a1, Plane<Scalar> a2)
      : grid(g), c1(std::move(a1)), c2(std::move(a2)) {
    if (c1.rows() != g.n || c1.cols() != g.n || c2.rows() != g.n || c2.cols() != g.n)
      throw GridMismatch("component counts must equal n^2");
  }

  bool finite() const { return detail::all_finite(c1) && detail::all_finite(c2); }

  template <typename Fn>
  static VectorField sample(const GridSpec<Scalar>& g, Fn&& fn) {
    VectorField f(g);
    for (Index i = 0; i < g.n; ++i)
      for (Index j = 0; j < g.n; ++j) {
        const std::array<Scalar, 2> v = fn(g.coord(i), g.coord(j));
        f.c1(i, j) = v[0];
        f.c2(i, j) = v[1];
      }
    return f;
  }
};

template <typename Scalar>
struct WaveField {
  using Complex = std::complex<Scalar>;
  GridSpec<Scalar> grid;
  Plane<Complex> values;

  WaveField() = default;
  explicit WaveField(const GridSpec<Scalar>& g) : grid(g), values(Plane<Complex>::Zero(g.n, g.n)) {}
  WaveField(const GridSpec<Scalar>& g, Plane<Complex> v) : grid(g), values(std::move(v)) {
    if (values.rows() != g.n || values.cols() != g.n) throw GridMismatch("value count must equal n^2");
  }

  Complex operator()(Index i, Index j) const { return values(i, j); }
  Complex& operator()(Index i, Index j) { return values(i, j); }
  bool finite() const { return detail::all_finite(values); }
  Plane<Scalar> modulus() const { return values.abs(); }

  static WaveField constant(const GridSpec<Scalar>& g, Complex c) {
    return WaveField(g, Plane<Complex>::Constant(g.n, g.n, c));
  }

  template <typename Fn>
  static WaveField sample(const GridSpec<Scalar>& g, Fn&& fn) {
    WaveField f(g);
    for (Index i = 0; i < g.n; ++i)
      for (Index j = 0; j < g.n; ++j) f.values(i, j) = fn(g.coord(i), g.coord(j));
    return f;
  }
};

// ---------------------------------------------------------------------------
// Regions

struct Region {
  enum class Kind { FullSquare, Ball, Annulus };
  Kind kind = Kind::FullSquare;
  double inner = 0.0;
  double outer = 0.0;

  static Region full_square() { return {}; }
  static Region ball(double radius) {
    if (!(radius > 0.0) || !std::isfinite(radius)) throw ConfigError("ball radius must be positive");
    return {Kind::Ball, 0.0, radius};
  }
  static Region annulus(double r1, double r2) {
    if (!(r1 > 0.0) || !(r2 > r1) || !std::isfinite(r2))
      throw ConfigError("annulus radii must satisfy 0 < R1 < R2");
    return {Kind::Annulus, r1, r2};
  }

  bool contains(double x1, double x2) const {
    const double r2 = x1 * x1 + x2 * x2;
    switch (kind) {
      case Kind::FullSquare: return true;
      case Kind::Ball: return r2 <= outer * outer;
      case Kind::Annulus: return r2 >= inner * inner && r2 <= outer * outer;
    }
    return false;
  }

  std::string describe() const;
};

inline std::string Region::describe() const {
  switch (kind) {
    case Kind::FullSquare: return "full-square";
    case Kind::Ball: return "ball(" + std::to_string(outer) + ")";
    case Kind::Annulus: return "annulus(" + std::to_string(inner) + "," + std::to_string(outer) + ")";
  }
  return "?";
}

template <typename Scalar>
void require_region_fits(const GridSpec<Scalar>& g, const Region& region) {
  if (region.kind != Region::Kind::FullSquare &&
      region.outer > static_cast<double>(g.halfwidth) * (1.0 + 1e-12))
    throw ConfigError("region " + region.describe() + " exceeds grid halfwidth " +
                      std::to_string(static_cast<double>(g.halfwidth)));
}

namespace detail {

// Exact area of the disc |x| <= R intersected with [x0,x1]x[y0,y1]. The
// intersection width in x2 is piecewise one of: constant, c - h(x), 2 h(x)
// with h = sqrt(R^2 - x^2), all of which have closed-form antiderivatives.
inline double disc_rect_area(double R, double x0, double x1, double y0, double y1) {
  if (!(R > 0.0) || x1 <= x0 || y1 <= y0) return 0.0;
  x0 = std::max(x0, -R);
  x1 = std::min(x1, R);
  if (x1 <= x0) return 0.0;
  const double R2 = R * R;
  auto h = [&](double x) { return std::sqrt(std::max(0.0, R2 - x * x)); };
  // antiderivative of h
  auto H = [&](double x) {
    const double t = std::clamp(x / R, -1.0, 1.0);
    return 0.5 * (x * h(x) + R2 * std::asin(t));
  };
  std::array<double, 8> cuts{};
  std::size_t nc = 0;
  cuts[nc++] = x0;
  cuts[nc++] = x1;
  for (double y : {y0, y1}) {
    if (std::abs(y) < R) {
      const double s = std::sqrt(R2 - y * y);
      for (double c : {-s, s})
        if (c > x0 && c < x1) cuts[nc++] = c;
    }
  }
  std::sort(cuts.begin(), cuts.begin() + static_cast<std::ptrdiff_t>(nc));
  double area = 0.0;
  for (std::size_t k = 0; k + 1 < nc; ++k) {
    const double a = cuts[k], b = cuts[k + 1];
    if (b <= a) continue;
    const double m = 0.5 * (a + b);
    const double hm = h(m);
    const bool upper_is_h = hm < y1;
    const bool lower_is_h = -hm > y0;
    const double top = upper_is_h ? hm : y1;
    const double bottom = lower_is_h ? -hm : y0;
    if (top <= bottom) continue;
    const double dH = H(b) - H(a);
    area += (upper_is_h ? dH : y1 * (b - a)) - (lower_is_h ? -dH : y0 * (b - a));
  }
  return std::max(area, 0.0);
}

inline double region_rect_area(const Region& region, double x0, double x1, double y0, double y1) {
  const double full = (x1 - x0) * (y1 - y0);
  if (full <= 0.0) return 0.0;
  auto min_r2 = [&] {
    const double dx = std::max({x0, 0.0, -x1}), dy = std::max({y0, 0.0, -y1});
    return dx * dx + dy * dy;
  };
  auto max_r2 = [&] {
    const double dx = std::max(std::abs(x0), std::abs(x1)), dy = std::max(std::abs(y0), std::abs(y1));
    return dx * dx + dy * dy;
  };
  auto disc = [&](double R) {
    if (max_r2() <= R * R) return full;
    if (min_r2() >= R * R) return 0.0;
    return disc_rect_area(R, x0, x1, y0, y1);
  };
  switch (region.kind) {
    case Region::Kind::FullSquare: return full;
    case Region::Kind::Ball: return disc(region.outer);
    case Region::Kind::Annulus: return std::max(0.0, disc(region.outer) - disc(region.inner));
  }
  return 0.0;
}

/// Dual-cell extent of node i along one axis, clipped to the square.
template <typename Scalar>
std::array<double, 2> dual_interval(const GridSpec<Scalar>& g, Index i) {
  const double x = static_cast<double>(g.coord(i));
  const double h = 0.5 * static_cast<double>(g.spacing);
  return {i == 0 ? x : x - h, i == g.n - 1 ? x : x + h};
}

}  // namespace detail

/// Quadrature weights: area of each node's dual cell inside the square and the
/// region. On the full square these are the tensor trapezoid weights.
template <typename Scalar>
Plane<Scalar> node_weights(const GridSpec<Scalar>& g, const Region& region) {
  require_region_fits(g, region);
  Plane<Scalar> w(g.n, g.n);
  for (Index i = 0; i < g.n; ++i) {
    const auto xi = detail::dual_interval(g, i);
    for (Index j = 0; j < g.n; ++j) {
      const auto yj = detail::dual_interval(g, j);
      w(i, j) = static_cast<Scalar>(detail::region_rect_area(region, xi[0], xi[1], yj[0], yj[1]));
    }
  }
  return w;
}

/// Weights for edges along `axis` (0: x1, 1: x2). An edge from node p to its
/// forward neighbour owns the rectangle spanned by the edge and the transverse
/// dual interval. Shape (n-1) x n for axis 0, n x (n-1) for axis 1.
template <typename Scalar>
Plane<Scalar> edge_weights(const GridSpec<Scalar>& g, const Region& region, int axis) {
  require_region_fits(g, region);
  const Index r = axis == 0 ? g.n - 1 : g.n;
  const Index c = axis == 0 ? g.n : g.n - 1;
  Plane<Scalar> w(r, c);
  for (Index i = 0; i < r; ++i)
    for (Index j = 0; j < c; ++j) {
      std::array<double, 2> xi, yj;
      if (axis == 0) {
        xi = {static_cast<double>(g.coord(i)), static_cast<double>(g.coord(i + 1))};
        yj = detail::dual_interval(g, j);
      } else {
        xi = detail::dual_interval(g, i);
        yj = {static_cast<double>(g.coord(j)), static_cast<double>(g.coord(j + 1))};
      }
      w(i, j) = static_cast<Scalar>(detail::region_rect_area(region, xi[0], xi[1], yj[0], yj[1]));
    }
  return w;
}

/// Neumaier-compensated sum in fixed row-major order.
template <typename Scalar>
class CompensatedSum {
 public:
  void add(Scalar v) {
    const Scalar t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v))
      comp_ += (sum_ - t) + v;
    else
      comp_ += (v - t) + sum_;
    sum_ = t;
  }
  Scalar value() const { return sum_ + comp_; }

 private:
  Scalar sum_{0};
  Scalar comp_{0};
};

template <typename Scalar, typename DerivedF, typename DerivedW>
Scalar weighted_sum(const Eigen::ArrayBase<DerivedF>& f, const Eigen::ArrayBase<DerivedW>& w) {
  CompensatedSum<Scalar> s;
  for (Index i = 0; i < f.rows(); ++i)
    for (Index j = 0; j < f.cols(); ++j) {
      const Scalar wij = w(i, j);
      if (wij != Scalar(0)) s.add(wij * f(i, j));
    }
  return s.value();
}

template <typename Scalar>
Scalar integrate(const ScalarField<Scalar>& f, const Region& region) {
  return weighted_sum<Scalar>(f.values, node_weights(f.grid, region));
}

template <typename Scalar>
struct Norms {
  Scalar l1{};
  Scalar l2{};
  Scalar linf{};
};

template <typename Scalar>
Norms<Scalar> norms(const ScalarField<Scalar>& f, const Region& region) {
  const Plane<Scalar> w = node_weights(f.grid, region);
  Norms<Scalar> out;
  out.l1 = weighted_sum<Scalar>(f.values.abs(), w);
  out.l2 = std::sqrt(weighted_sum<Scalar>(f.values.square(), w));
  const auto& g = f.grid;
  for (Index i = 0; i < g.n; ++i)
    for (Index j = 0; j < g.n; ++j)
      if (region.contains(static_cast<double>(g.coord(i)), static_cast<double>(g.coord(j))))
        out.linf = std::max(out.linf, std::abs(f.values(i, j)));
  return out;
}

template <typename Scalar>
std::array<Norms<Scalar>, 2> norms(const VectorField<Scalar>& f, const Region& region) {
  return {norms(ScalarField<Scalar>(f.grid, f.c1), region), norms(ScalarField<Scalar>(f.grid, f.c2), region)};
}

/// L2 norm of |A| = sqrt(A1^2 + A2^2) over the region.
template <typename Scalar>
Scalar l2_norm(const VectorField<Scalar>& f, const Region& region) {
  return std::sqrt(weighted_sum<Scalar>(f.c1.square() + f.c2.square(), node_weights(f.grid, region)));
}

// ---------------------------------------------------------------------------
// Difference operators: central in the interior, one-sided second order on the
// boundary ring.

/// Partial derivative along `axis` (0: x1 = row index, 1: x2 = column index).
template <typename Derived>
auto partial(const Eigen::ArrayBase<Derived>& f, typename Derived::Scalar spacing, int axis)
    -> Plane<typename Derived::Scalar> {
  using Scalar = typename Derived::Scalar;
  const Index n = f.rows();
  Plane<Scalar> d(n, f.cols());
  const Scalar inv2a = Scalar(1) / (Scalar(2) * spacing);
  if (axis == 0) {
    d.row(0) = (Scalar(-3) * f.row(0) + Scalar(4) * f.row(1) - f.row(2)) * inv2a;
    for (Index i = 1; i + 1 < n; ++i) d.row(i) = (f.row(i + 1) - f.row(i - 1)) * inv2a;
    d.row(n - 1) = (Scalar(3) * f.row(n - 1) - Scalar(4) * f.row(n - 2) + f.row(n - 3)) * inv2a;
  } else {
    const Index m = f.cols();
    d.col(0) = (Scalar(-3) * f.col(0) + Scalar(4) * f.col(1) - f.col(2)) * inv2a;
    for (Index j = 1; j + 1 < m; ++j) d.col(j) = (f.col(j + 1) - f.col(j - 1)) * inv2a;
    d.col(m - 1) = (Scalar(3) * f.col(m - 1) - Scalar(4) * f.col(m - 2) + f.col(m - 3)) * inv2a;
  }
  return d;
}

/// B = curl A = d1 A2 - d2 A1.
template <typename Scalar>
ScalarField<Scalar> curl2d(const VectorField<Scalar>& A) {
  const Scalar a = A.grid.spacing;
  return ScalarField<Scalar>(A.grid, partial(A.c2, a, 0) - partial(A.c1, a, 1));
}

template <typename Scalar>
ScalarField<Scalar> div2d(const VectorField<Scalar>& A) {
  const Scalar a = A.grid.spacing;
  return ScalarField<Scalar>(A.grid, partial(A.c1, a, 0) + partial(A.c2, a, 1));
}

/// (-d2 w, d1 w).
template <typename Scalar>
VectorField<Scalar> grad_perp(const ScalarField<Scalar>& w) {
  const Scalar a = w.grid.spacing;
  return VectorField<Scalar>(w.grid, -partial(w.values, a, 1), partial(w.values, a, 0));
}

template <typename Scalar>
VectorField<Scalar> gradient(const ScalarField<Scalar>& w) {
  const Scalar a = w.grid.spacing;
  return VectorField<Scalar>(w.grid, partial(w.values, a, 0), partial(w.values, a, 1));
}

/// Interior-node mask (excludes the boundary ring).
template <typename Scalar>
Plane<Scalar> interior_mask(const GridSpec<Scalar>& g) {
  Plane<Scalar> m = Plane<Scalar>::Zero(g.n, g.n);
  m.block(1, 1, g.n - 2, g.n - 2).setOnes();
  return m;
}

// ---------------------------------------------------------------------------
// Off-node evaluation by tensor-product cubic Lagrange interpolation.

template <typename T, typename Scalar>
T interpolate(const Plane<T>& values, const GridSpec<Scalar>& g, Scalar x1, Scalar x2) {
  auto stencil = [&](Scalar x, Index& base, std::array<Scalar, 4>& w) {
    const Scalar s = (x + g.halfwidth) / g.spacing;
    Index k = static_cast<Index>(std::floor(s));
    base = std::clamp<Index>(k - 1, 0, g.n - 4);
    const Scalar t = s - static_cast<Scalar>(base);
    for (int m = 0; m < 4; ++m) {
      Scalar l = 1;
      for (int q = 0; q < 4; ++q)
        if (q != m) l *= (t - Scalar(q)) / Scalar(m - q);
      w[m] = l;
    }
  };
  Index bi, bj;
  std::array<Scalar, 4> wi, wj;
  stencil(x1, bi, wi);
  stencil(x2, bj, wj);
  T acc{};
  for (int p = 0; p < 4; ++p) {
    T row{};
    for (int q = 0; q < 4; ++q) row += wj[q] * values(bi + p, bj + q);
    acc += wi[p] * row;
  }
  return acc;
}

}  // namespace gpmag
