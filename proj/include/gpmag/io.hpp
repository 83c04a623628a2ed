#pragma once

// Field files: <base>.bin holds float64 little-endian values, one component
// after another, each row-major; <base>.json is the header
// {"n", "L", "kind": scalar|vector|wave, "components"}. Wave fields store the
// real part then the imaginary part.

#include <filesystem>
#include <string>
#include <vector>

#include "gpmag/grid.hpp"

namespace gpmag::io {

namespace fs = std::filesystem;

struct FieldHeader {
  Index n = 0;
  double halfwidth = 0.0;
  std::string kind;
  std::vector<std::string> components;
};

void write_field(const fs::path& base, const ScalarField<double>& f);
void write_field(const fs::path& base, const VectorField<double>& f);
void write_field(const fs::path& base, const WaveField<double>& f);

FieldHeader read_header(const fs::path& base);
ScalarField<double> read_scalar_field(const fs::path& base);
VectorField<double> read_vector_field(const fs::path& base);
WaveField<double> read_wave_field(const fs::path& base);

/// i, j, x1, x2 followed by one column per component.
void write_csv(const fs::path& path, const ScalarField<double>& f);
void write_csv(const fs::path& path, const VectorField<double>& f);
void write_csv(const fs::path& path, const WaveField<double>& f);

/// Writes text atomically enough for our purposes: creates parent directories
/// and replaces the file.
void write_text(const fs::path& path, const std::string& text);
std::string read_text(const fs::path& path);

/// Shortest decimal that round-trips, so tables are byte-stable.
std::string format_double(double v);

}  // namespace gpmag::io
