#pragma once

// Experiment harness for the flux/energy dichotomy: growth of the minimal
// energy in a constant field, the flux-energy bound on balls, and the
// constant-modulus trial energy for integrable fields.

#include <filesystem>
#include <string>
#include <variant>
#include <vector>

#include "gpmag/fields.hpp"
#include "gpmag/gauge.hpp"
#include "gpmag/minimize.hpp"
#include "json.hpp"

namespace gpmag {

using Cell = std::variant<double, std::string>;

struct Curve {
  std::string name;
  std::string x_label;
  std::string y_label;
  std::vector<std::pair<double, double>> points;
};

struct ExperimentTable {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::ordered_json metadata;
  std::vector<Curve> curves;

  std::size_t column(const std::string& key) const;
  double number(std::size_t row, const std::string& key) const;
  std::string to_csv() const;
};

/// Writes <name>.csv, <name>.meta.json and plot/<name>_<curve>.csv under dir.
/// The metadata sidecar is the only file that carries a timestamp.
void write_experiment(const ExperimentTable& table, const std::filesystem::path& dir, bool timestamp = true);

struct ExperimentOptions {
  MinimizeOptions minimizer;
  double spacing = 0.25;       // target grid spacing; n is the next odd count
  std::uint64_t seed = 1;
  double perturbation = 0.1;   // amplitude of the random-perturbation initializer
  double core_radius = 1.0;    // winding ansatz core
};

/// Odd node count giving spacing at most `spacing` on [-L, L].
Index odd_points(double halfwidth, double spacing);

/// Least-squares slope of y against x.
double lsq_slope(std::span<const double> x, std::span<const double> y);

/// Minimal energy on B(0, R) in the constant field B0 with the symmetric
/// gauge, on one grid of half-width 1.25 max R. Each row runs the winding
/// ansatz with n = round(B0 R^2 / 2) and a random perturbation of 1, keeping
/// the lower ball energy. A radius of 0 gives an empty ball and energy 0.
ExperimentTable constant_field_growth(std::span<const double> radii, double strength, const ExperimentOptions& opts);

struct FluxBoundRecord {
  double radius = 0.0;
  double lhs = 0.0;      // 1/4 int_{B(0,R/2)} B
  double c_prime = 0.0;  // max(1, 3 pi C / 4, (|B|_inf + 1) / 2)
  double energy = 0.0;   // energy on B(0, R)
  double rhs = 0.0;      // C' (energy + 1)
  double el_residual = 0.0;
  bool pass = false;
};

/// Checks 1/4 int_{B(0,R/2)} B <= C' (E(psi) + 1) with C = pi^2. The energy is
/// restricted to B(0, R), which can only make the check stricter.
FluxBoundRecord flux_energy_bound_check(const WaveField<double>& psi, const VectorField<double>& A,
                                        const ScalarField<double>& B, double radius);

/// For each half-width L: the Coulomb potential on [-L, L]^2, the trial
/// energy 1/2 int_{B(0,L)} |A'|^2 of psi = 1, and minimizers from psi = 1 and
/// from the winding ansatz with n = round(flux / 2 pi). Throws ConfigError
/// when the flux is unbounded.
ExperimentTable l1_field_energy(const FieldSpec& spec, std::span<const double> lengths, const ExperimentOptions& opts);

/// int_{B(0,R)} |A'|^2 at the requested radii from a grid potential on
/// [-L, L]^2, extended beyond 0.75 L by the superposed radial oracle.
std::vector<GrowthRow> tail_growth(const FieldSpec& spec, double halfwidth, Index n, std::span<const double> radii);

/// Flux-bound checks over the constant-field growth rows and Gaussian
/// minimizers; one row per converged minimizer and radius.
ExperimentTable flux_bound_experiment(std::span<const double> radii, std::span<const double> lengths,
                                      const ExperimentOptions& opts);

}  // namespace gpmag
