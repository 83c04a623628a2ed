#include "gpmag/config.hpp"

#include <set>

#include "gpmag/io.hpp"

namespace gpmag {

namespace {

using nlohmann::json;

void require_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
}

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  require_object(j, where);
  const std::set<std::string> allowed(keys.begin(), keys.end());
  for (const auto& [key, value] : j.items())
    if (!allowed.contains(key)) throw ConfigError("unknown key '" + (where.empty() ? key : where + "." + key) + "'");
}

template <typename T>
void read(const json& j, const char* key, const std::string& where, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + (where.empty() ? std::string(key) : where + "." + key) + "' has the wrong type");
  }
}

void read_point(const json& j, const std::string& where, Point2& p) {
  if (!j.contains("center")) return;
  std::vector<double> c;
  read(j, "center", where, c);
  if (c.size() != 2) throw ConfigError(where + ".center must have two entries");
  p = {c[0], c[1]};
}

FieldSpec parse_field(const json& j, std::string& path) {
  require_object(j, "field");
  std::string type;
  read(j, "type", "field", type);
  if (type == "constant") {
    allow_keys(j, "field", {"type", "strength"});
    field::Constant f;
    read(j, "strength", "field", f.strength);
    return f;
  }
  if (type == "gaussian") {
    allow_keys(j, "field", {"type", "amplitude", "sigma", "center"});
    field::Gaussian f;
    read(j, "amplitude", "field", f.amplitude);
    read(j, "sigma", "field", f.sigma);
    read_point(j, "field", f.center);
    return f;
  }
  if (type == "bump") {
    allow_keys(j, "field", {"type", "amplitude", "radius", "center"});
    field::Bump f;
    read(j, "amplitude", "field", f.amplitude);
    read(j, "radius", "field", f.radius);
    read_point(j, "field", f.center);
    return f;
  }
  if (type == "dipole") {
    allow_keys(j, "field", {"type", "amplitude", "sigma", "half_separation", "center"});
    field::Dipole f;
    read(j, "amplitude", "field", f.amplitude);
    read(j, "sigma", "field", f.sigma);
    read(j, "half_separation", "field", f.half_separation);
    read_point(j, "field", f.center);
    return f;
  }
  if (type == "custom") {
    allow_keys(j, "field", {"type", "path"});
    read(j, "path", "field", path);
    if (path.empty()) throw ConfigError("custom field needs field.path");
    return field::Custom{io::read_scalar_field(path), path};
  }
  throw ConfigError("unknown field type '" + type + "'");
}

void parse_minimizer(const json& j, MinimizeOptions& m) {
  allow_keys(j, "minimizer", {"max_iterations", "energy_tolerance", "energy_window", "gradient_tolerance",
                              "project_modulus", "initial_step", "min_step"});
  read(j, "max_iterations", "minimizer", m.max_iterations);
  read(j, "energy_tolerance", "minimizer", m.energy_tolerance);
  read(j, "energy_window", "minimizer", m.energy_window);
  read(j, "gradient_tolerance", "minimizer", m.gradient_tolerance);
  read(j, "project_modulus", "minimizer", m.project_modulus);
  read(j, "initial_step", "minimizer", m.initial_step);
  read(j, "min_step", "minimizer", m.min_step);
  m.validate();
}

void parse_initializer(const json& j, InitializerConfig& c) {
  allow_keys(j, "initializer", {"type", "amplitude", "winding", "core_radius"});
  read(j, "type", "initializer", c.type);
  read(j, "amplitude", "initializer", c.amplitude);
  read(j, "winding", "initializer", c.winding);
  read(j, "core_radius", "initializer", c.core_radius);
  if (c.type != "constant" && c.type != "random" && c.type != "winding")
    throw ConfigError("unknown initializer type '" + c.type + "'");
  if (!(c.core_radius > 0.0)) throw ConfigError("initializer.core_radius must be positive");
}

void parse_suite(const json& j, SuiteConfig& s) {
  allow_keys(j, "suite", {"kind", "trials", "halfwidth", "n", "strength", "radius", "max_mode", "tolerance"});
  auto& o = s.options;
  read(j, "kind", "suite", s.kind);
  read(j, "trials", "suite", o.trials);
  read(j, "halfwidth", "suite", o.halfwidth);
  read(j, "n", "suite", o.n);
  read(j, "strength", "suite", o.strength);
  read(j, "radius", "suite", o.radius);
  read(j, "max_mode", "suite", o.max_mode);
  read(j, "tolerance", "suite", o.tolerance);
  if (s.kind != "cutoff" && s.kind != "dirichlet" && s.kind != "both")
    throw ConfigError("unknown suite kind '" + s.kind + "'");
}

void parse_experiment(const json& j, ExperimentConfig& e) {
  allow_keys(j, "experiment",
             {"preset", "radii", "lengths", "strength", "spacing", "perturbation", "core_radius"});
  read(j, "preset", "experiment", e.preset);
  read(j, "radii", "experiment", e.radii);
  read(j, "lengths", "experiment", e.lengths);
  read(j, "strength", "experiment", e.strength);
  read(j, "spacing", "experiment", e.spacing);
  read(j, "perturbation", "experiment", e.perturbation);
  read(j, "core_radius", "experiment", e.core_radius);
  if (!(e.spacing > 0.0)) throw ConfigError("experiment.spacing must be positive");
}

json field_json(const FieldSpec& spec, const std::string& path) {
  return std::visit(
      [&](const auto& f) -> json {
        using F = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<F, field::Constant>)
          return {{"type", "constant"}, {"strength", f.strength}};
        else if constexpr (std::is_same_v<F, field::Gaussian>)
          return {{"type", "gaussian"}, {"amplitude", f.amplitude}, {"sigma", f.sigma},
                  {"center", {f.center.x1, f.center.x2}}};
        else if constexpr (std::is_same_v<F, field::Bump>)
          return {{"type", "bump"}, {"amplitude", f.amplitude}, {"radius", f.radius},
                  {"center", {f.center.x1, f.center.x2}}};
        else if constexpr (std::is_same_v<F, field::Dipole>)
          return {{"type", "dipole"}, {"amplitude", f.amplitude}, {"sigma", f.sigma},
                  {"half_separation", f.half_separation}, {"center", {f.center.x1, f.center.x2}}};
        else
          return {{"type", "custom"}, {"path", path}};
      },
      spec);
}

}  // namespace

RunConfig parse_config(const json& j) {
  allow_keys(j, "", {"command", "field", "grid", "minimizer", "initializer", "radii", "suite", "experiment",
                     "output", "seed", "threads", "quick"});
  RunConfig c;
  read(j, "command", "", c.command);
  if (j.contains("field")) c.field = parse_field(j.at("field"), c.field_path);
  validate(c.field);
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    allow_keys(g, "grid", {"L", "n"});
    read(g, "L", "grid", c.halfwidth);
    read(g, "n", "grid", c.n);
  }
  make_grid(c.halfwidth, c.n);
  if (j.contains("minimizer")) parse_minimizer(j.at("minimizer"), c.minimizer);
  if (j.contains("initializer")) parse_initializer(j.at("initializer"), c.initializer);
  if (j.contains("radii")) {
    const auto& r = j.at("radii");
    allow_keys(r, "radii", {"growth", "profile", "energy"});
    read(r, "growth", "radii", c.growth_radii);
    read(r, "profile", "radii", c.profile_radii);
    read(r, "energy", "radii", c.energy_radii);
  }
  if (j.contains("suite")) parse_suite(j.at("suite"), c.suite);
  if (j.contains("experiment")) parse_experiment(j.at("experiment"), c.experiment);
  read(j, "output", "", c.output);
  read(j, "seed", "", c.seed);
  read(j, "threads", "", c.threads);
  read(j, "quick", "", c.quick);
  if (c.threads < 1) throw ConfigError("threads must be at least 1");
  c.suite.options.seed = c.seed;
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  json j;
  try {
    j = json::parse(io::read_text(path));
  } catch (const json::exception& e) {
    throw ConfigError("malformed config " + path.string() + ": " + e.what());
  }
  return parse_config(j);
}

nlohmann::ordered_json to_json(const RunConfig& c) {
  const auto& m = c.minimizer;
  const auto& s = c.suite.options;
  const auto& e = c.experiment;
  nlohmann::ordered_json j;
  j["command"] = c.command;
  j["field"] = field_json(c.field, c.field_path);
  j["grid"] = {{"L", c.halfwidth}, {"n", c.n}};
  j["minimizer"] = {{"max_iterations", m.max_iterations},   {"energy_tolerance", m.energy_tolerance},
                    {"energy_window", m.energy_window},     {"gradient_tolerance", m.gradient_tolerance},
                    {"project_modulus", m.project_modulus}, {"initial_step", m.initial_step},
                    {"min_step", m.min_step}};
  j["initializer"] = {{"type", c.initializer.type},
                      {"amplitude", c.initializer.amplitude},
                      {"winding", c.initializer.winding},
                      {"core_radius", c.initializer.core_radius}};
  j["radii"] = {{"growth", c.growth_radii}, {"profile", c.profile_radii}, {"energy", c.energy_radii}};
  j["suite"] = {{"kind", c.suite.kind}, {"trials", s.trials},     {"halfwidth", s.halfwidth},
                {"n", s.n},             {"strength", s.strength}, {"radius", s.radius},
                {"max_mode", s.max_mode}, {"tolerance", s.tolerance}};
  j["experiment"] = {{"preset", e.preset},   {"radii", e.radii},
                     {"lengths", e.lengths}, {"strength", e.strength},
                     {"spacing", e.spacing}, {"perturbation", e.perturbation},
                     {"core_radius", e.core_radius}};
  j["output"] = c.output;
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  j["quick"] = c.quick;
  return j;
}

}  // namespace gpmag
