#include "gpmag/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace gpmag::io {

namespace {

using nlohmann::json;

fs::path with_suffix(const fs::path& base, const char* suffix) {
  fs::path p = base;
  p += suffix;
  return p;
}

std::uint64_t swap_bytes(std::uint64_t v) {
  std::uint64_t r = 0;
  for (int k = 0; k < 8; ++k, v >>= 8) r = (r << 8) | (v & 0xff);
  return r;
}

void put_le(std::ostream& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  if constexpr (std::endian::native == std::endian::big) bits = swap_bytes(bits);
  char buf[8];
  std::memcpy(buf, &bits, 8);
  out.write(buf, 8);
}

double get_le(const char* p) {
  std::uint64_t bits;
  std::memcpy(&bits, p, 8);
  if constexpr (std::endian::native == std::endian::big) bits = swap_bytes(bits);
  return std::bit_cast<double>(bits);
}

void write_planes(const fs::path& base, const GridSpec<double>& g, const std::string& kind,
                  const std::vector<std::string>& names, const std::vector<const Plane<double>*>& planes) {
  if (base.has_parent_path()) fs::create_directories(base.parent_path());
  std::ofstream bin(with_suffix(base, ".bin"), std::ios::binary | std::ios::trunc);
  if (!bin) throw std::runtime_error("cannot write " + with_suffix(base, ".bin").string());
  for (const auto* p : planes)
    for (Index i = 0; i < g.n; ++i)
      for (Index j = 0; j < g.n; ++j) put_le(bin, (*p)(i, j));
  if (!bin) throw std::runtime_error("write failed for " + with_suffix(base, ".bin").string());
  json header = {{"n", g.n}, {"L", g.halfwidth}, {"kind", kind}, {"components", names}};
  write_text(with_suffix(base, ".json"), header.dump(2) + "\n");
}

std::vector<Plane<double>> read_planes(const fs::path& base, const FieldHeader& h) {
  std::ifstream bin(with_suffix(base, ".bin"), std::ios::binary);
  if (!bin) throw ConfigError("cannot open field data " + with_suffix(base, ".bin").string());
  std::string data((std::istreambuf_iterator<char>(bin)), std::istreambuf_iterator<char>());
  const std::size_t count = h.components.size() * static_cast<std::size_t>(h.n * h.n);
  if (data.size() != 8 * count)
    throw ConfigError("field data " + with_suffix(base, ".bin").string() + " has " + std::to_string(data.size()) +
                      " bytes, header implies " + std::to_string(8 * count));
  std::vector<Plane<double>> planes;
  const char* p = data.data();
  for (std::size_t c = 0; c < h.components.size(); ++c) {
    Plane<double> m(h.n, h.n);
    for (Index i = 0; i < h.n; ++i)
      for (Index j = 0; j < h.n; ++j, p += 8) m(i, j) = get_le(p);
    if (!m.allFinite()) throw ConfigError("field data " + with_suffix(base, ".bin").string() + " is not finite");
    planes.push_back(std::move(m));
  }
  return planes;
}

FieldHeader expect(const fs::path& base, const std::string& kind) {
  FieldHeader h = read_header(base);
  if (h.kind != kind) throw ConfigError("field " + base.string() + " is " + h.kind + ", expected " + kind);
  return h;
}

template <typename Row>
void write_rows(const fs::path& path, const GridSpec<double>& g, const std::string& header, Row&& row) {
  std::ostringstream out;
  out << header << "\n";
  for (Index i = 0; i < g.n; ++i)
    for (Index j = 0; j < g.n; ++j) {
      out << i << "," << j << "," << format_double(g.coord(i)) << "," << format_double(g.coord(j));
      row(out, i, j);
      out << "\n";
    }
  write_text(path, out.str());
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void write_field(const fs::path& base, const ScalarField<double>& f) {
  write_planes(base, f.grid, "scalar", {"value"}, {&f.values});
}

void write_field(const fs::path& base, const VectorField<double>& f) {
  write_planes(base, f.grid, "vector", {"c1", "c2"}, {&f.c1, &f.c2});
}

void write_field(const fs::path& base, const WaveField<double>& f) {
  const Plane<double> re = f.values.real(), im = f.values.imag();
  write_planes(base, f.grid, "wave", {"re", "im"}, {&re, &im});
}

FieldHeader read_header(const fs::path& base) {
  json j;
  try {
    j = json::parse(read_text(with_suffix(base, ".json")));
  } catch (const json::exception& e) {
    throw ConfigError("malformed field header " + with_suffix(base, ".json").string() + ": " + e.what());
  }
  FieldHeader h;
  try {
    h.n = j.at("n").get<Index>();
    h.halfwidth = j.at("L").get<double>();
    h.kind = j.at("kind").get<std::string>();
    h.components = j.at("components").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ConfigError("field header " + with_suffix(base, ".json").string() + ": " + e.what());
  }
  const std::size_t expected = h.kind == "scalar" ? 1 : (h.kind == "vector" || h.kind == "wave") ? 2 : 0;
  if (expected == 0) throw ConfigError("unknown field kind '" + h.kind + "'");
  if (h.components.size() != expected) throw ConfigError("field header lists the wrong number of components");
  return h;
}

ScalarField<double> read_scalar_field(const fs::path& base) {
  const auto h = expect(base, "scalar");
  auto planes = read_planes(base, h);
  return ScalarField<double>(make_grid(h.halfwidth, h.n), std::move(planes[0]));
}

VectorField<double> read_vector_field(const fs::path& base) {
  const auto h = expect(base, "vector");
  auto planes = read_planes(base, h);
  return VectorField<double>(make_grid(h.halfwidth, h.n), std::move(planes[0]), std::move(planes[1]));
}

WaveField<double> read_wave_field(const fs::path& base) {
  const auto h = expect(base, "wave");
  const auto planes = read_planes(base, h);
  WaveField<double> f(make_grid(h.halfwidth, h.n));
  f.values.real() = planes[0];
  f.values.imag() = planes[1];
  return f;
}

void write_csv(const fs::path& path, const ScalarField<double>& f) {
  write_rows(path, f.grid, "i,j,x1,x2,value",
             [&](std::ostream& out, Index i, Index j) { out << "," << format_double(f(i, j)); });
}

void write_csv(const fs::path& path, const VectorField<double>& f) {
  write_rows(path, f.grid, "i,j,x1,x2,c1,c2", [&](std::ostream& out, Index i, Index j) {
    out << "," << format_double(f.c1(i, j)) << "," << format_double(f.c2(i, j));
  });
}

void write_csv(const fs::path& path, const WaveField<double>& f) {
  write_rows(path, f.grid, "i,j,x1,x2,re,im", [&](std::ostream& out, Index i, Index j) {
    out << "," << format_double(f(i, j).real()) << "," << format_double(f(i, j).imag());
  });
}

}  // namespace gpmag::io
