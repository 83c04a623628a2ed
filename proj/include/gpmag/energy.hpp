#pragma once

// Lattice-gauge discretization of the magnetic Ginzburg-Landau energy
//   E(psi) = 1/2 int |(grad - iA) psi|^2 + 1/4 int (1 - |psi|^2)^2.
// The covariant derivative on the edge x -> x + a e_mu is
//   D_mu psi = (exp(-i a Abar_mu) psi(x + a e_mu) - psi(x)) / a,
// Abar_mu the endpoint average of A_mu. Edges leaving the square are absent.

#include <complex>
#include <vector>

#include "gpmag/grid.hpp"
#include "gpmag/parallel.hpp"

namespace gpmag {

/// Link phases exp(-i a Abar) for x1-edges ((n-1) x n) and x2-edges (n x (n-1)).
template <typename Scalar>
struct LinkField {
  using Complex = std::complex<Scalar>;
  GridSpec<Scalar> grid;
  Plane<Complex> u1;
  Plane<Complex> u2;

  explicit LinkField(const VectorField<Scalar>& A) : grid(A.grid) {
    const Index n = grid.n;
    const Scalar a = grid.spacing;
    auto phase = [a](Scalar abar) { return std::polar(Scalar(1), -a * abar); };
    u1 = ((A.c1.topRows(n - 1) + A.c1.bottomRows(n - 1)) / Scalar(2)).unaryExpr(phase);
    u2 = ((A.c2.leftCols(n - 1) + A.c2.rightCols(n - 1)) / Scalar(2)).unaryExpr(phase);
  }
};

/// (grad - iA) psi on lattice edges, stored at the edge's lower node; entries
/// for edges that would leave the square are zero.
template <typename Scalar>
struct CovariantDerivField {
  using Complex = std::complex<Scalar>;
  GridSpec<Scalar> grid;
  Plane<Complex> d1;
  Plane<Complex> d2;
};

template <typename Scalar>
CovariantDerivField<Scalar> covariant_derivative(const WaveField<Scalar>& psi, const LinkField<Scalar>& links) {
  require_same_grid(psi.grid, links.grid);
  using Complex = std::complex<Scalar>;
  const Index n = psi.grid.n;
  const Scalar inv_a = Scalar(1) / psi.grid.spacing;
  CovariantDerivField<Scalar> D{psi.grid, Plane<Complex>::Zero(n, n), Plane<Complex>::Zero(n, n)};
  D.d1.topRows(n - 1) = (links.u1 * psi.values.bottomRows(n - 1) - psi.values.topRows(n - 1)) * inv_a;
  D.d2.leftCols(n - 1) = (links.u2 * psi.values.rightCols(n - 1) - psi.values.leftCols(n - 1)) * inv_a;
  return D;
}

template <typename Scalar>
CovariantDerivField<Scalar> covariant_derivative(const WaveField<Scalar>& psi, const VectorField<Scalar>& A) {
  require_same_grid(psi.grid, A.grid);
  return covariant_derivative(psi, LinkField<Scalar>(A));
}

struct EnergyReport {
  double kinetic = 0.0;    // 1/2 int |D psi|^2
  double potential = 0.0;  // 1/4 int (1 - |psi|^2)^2
  double total = 0.0;
  Region region;
};

/// Energy on a fixed potential with precomputed links and quadrature weights.
/// The minimizer evaluates this repeatedly; rows are processed in parallel and
/// reduced in row order, so results do not depend on the thread count.
template <typename Scalar>
class EnergyFunctional {
 public:
  using Complex = std::complex<Scalar>;

  EnergyFunctional(const VectorField<Scalar>& A, const Region& region = Region::full_square())
      : links_(A),
        region_(region),
        node_w_(node_weights(A.grid, region)),
        edge_w1_(edge_weights(A.grid, region, 0)),
        edge_w2_(edge_weights(A.grid, region, 1)) {
    if (!A.finite()) throw NumericalError("vector potential has non-finite values");
  }

  const GridSpec<Scalar>& grid() const { return links_.grid; }
  const LinkField<Scalar>& links() const { return links_; }
  const Plane<Scalar>& node_weights_plane() const { return node_w_; }

  EnergyReport report(const WaveField<Scalar>& psi) const {
    require_same_grid(psi.grid, grid());
    const Index n = grid().n;
    std::vector<Scalar> kin(static_cast<std::size_t>(n), 0), pot(static_cast<std::size_t>(n), 0);
    parallel_rows(n, [&](long i) {
      CompensatedSum<Scalar> k, p;
      const Scalar inv_a2 = Scalar(1) / (grid().spacing * grid().spacing);
      for (Index j = 0; j < n; ++j) {
        const Complex z = psi.values(i, j);
        if (i + 1 < n && edge_w1_(i, j) != Scalar(0))
          k.add(edge_w1_(i, j) * std::norm(links_.u1(i, j) * psi.values(i + 1, j) - z) * inv_a2);
        if (j + 1 < n && edge_w2_(i, j) != Scalar(0))
          k.add(edge_w2_(i, j) * std::norm(links_.u2(i, j) * psi.values(i, j + 1) - z) * inv_a2);
        if (node_w_(i, j) != Scalar(0)) {
          const Scalar defect = Scalar(1) - std::norm(z);
          p.add(node_w_(i, j) * defect * defect);
        }
      }
      kin[static_cast<std::size_t>(i)] = k.value();
      pot[static_cast<std::size_t>(i)] = p.value();
    });
    CompensatedSum<Scalar> k, p;
    for (Index i = 0; i < n; ++i) {
      k.add(kin[static_cast<std::size_t>(i)]);
      p.add(pot[static_cast<std::size_t>(i)]);
    }
    EnergyReport r;
    r.kinetic = static_cast<double>(k.value() / Scalar(2));
    r.potential = static_cast<double>(p.value() / Scalar(4));
    r.total = r.kinetic + r.potential;
    r.region = region_;
    return r;
  }

  Scalar value(const WaveField<Scalar>& psi) const { return static_cast<Scalar>(report(psi).total); }

  /// Exact gradient of the discrete energy with respect to (Re psi, Im psi),
  /// packed as dE/dRe + i dE/dIm.
  WaveField<Scalar> gradient(const WaveField<Scalar>& psi) const {
    require_same_grid(psi.grid, grid());
    const Index n = grid().n;
    const Scalar inv_a2 = Scalar(1) / (grid().spacing * grid().spacing);
    // weighted edge differences W_e d_e / a^2
    Plane<Complex> f1(n - 1, n), f2(n, n - 1);
    parallel_rows(n, [&](long i) {
      for (Index j = 0; j < n; ++j) {
        const Complex z = psi.values(i, j);
        if (i + 1 < n) f1(i, j) = edge_w1_(i, j) * inv_a2 * (links_.u1(i, j) * psi.values(i + 1, j) - z);
        if (j + 1 < n) f2(i, j) = edge_w2_(i, j) * inv_a2 * (links_.u2(i, j) * psi.values(i, j + 1) - z);
      }
    });
    WaveField<Scalar> g(grid());
    parallel_rows(n, [&](long i) {
      for (Index j = 0; j < n; ++j) {
        Complex acc{};
        if (i + 1 < n) acc -= f1(i, j);
        if (i > 0) acc += std::conj(links_.u1(i - 1, j)) * f1(i - 1, j);
        if (j + 1 < n) acc -= f2(i, j);
        if (j > 0) acc += std::conj(links_.u2(i, j - 1)) * f2(i, j - 1);
        const Complex z = psi.values(i, j);
        acc -= node_w_(i, j) * (Scalar(1) - std::norm(z)) * z;
        g.values(i, j) = acc;
      }
    });
    return g;
  }

 private:
  LinkField<Scalar> links_;
  Region region_;
  Plane<Scalar> node_w_;
  Plane<Scalar> edge_w1_;
  Plane<Scalar> edge_w2_;
};

template <typename Scalar>
EnergyReport energy(const WaveField<Scalar>& psi, const VectorField<Scalar>& A,
                    const Region& region = Region::full_square()) {
  require_same_grid(psi.grid, A.grid);
  return EnergyFunctional<Scalar>(A, region).report(psi);
}

template <typename Scalar>
WaveField<Scalar> energy_gradient(const WaveField<Scalar>& psi, const VectorField<Scalar>& A) {
  require_same_grid(psi.grid, A.grid);
  return EnergyFunctional<Scalar>(A).gradient(psi);
}

/// Per node, the minimum over incident edges of |D psi| - |D |psi||, where the
/// second derivative is the plain difference of nodal moduli.
template <typename Scalar>
ScalarField<Scalar> diamagnetic_margin(const WaveField<Scalar>& psi, const VectorField<Scalar>& A) {
  require_same_grid(psi.grid, A.grid);
  const auto D = covariant_derivative(psi, A);
  const Index n = psi.grid.n;
  const Scalar inv_a = Scalar(1) / psi.grid.spacing;
  const Plane<Scalar> rho = psi.values.abs();
  ScalarField<Scalar> margin(psi.grid);
  margin.values.setConstant(std::numeric_limits<Scalar>::infinity());
  auto visit = [&](Index i, Index j, Index k, Index l, Scalar cov) {
    const Scalar m = cov - std::abs(rho(k, l) - rho(i, j)) * inv_a;
    margin.values(i, j) = std::min(margin.values(i, j), m);
    margin.values(k, l) = std::min(margin.values(k, l), m);
  };
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < n; ++j) {
      if (i + 1 < n) visit(i, j, i + 1, j, std::abs(D.d1(i, j)));
      if (j + 1 < n) visit(i, j, i, j + 1, std::abs(D.d2(i, j)));
    }
  return margin;
}

}  // namespace gpmag
