#include <filesystem>

#include "doctest.h"
#include "gpmag/commands.hpp"
#include "gpmag/io.hpp"

using namespace gpmag;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "gpmag_test_cli" / name;
  fs::remove_all(dir);
  return dir;
}

RunConfig config(const std::string& command, json j, const fs::path& out) {
  j["command"] = command;
  j["output"] = out.string();
  return parse_config(j);
}

json report(const fs::path& path) { return json::parse(io::read_text(path)); }

}  // namespace

TEST_CASE("config defaults and echo") {
  const auto c = parse_config(json::object());
  CHECK(c.halfwidth == 12.0);
  CHECK(c.n == 257);
  CHECK(c.threads == 1);
  CHECK(std::holds_alternative<field::Gaussian>(c.field));
  CHECK(c.minimizer.gradient_tolerance == 1e-6);
  CHECK(c.minimizer.energy_tolerance == 1e-10);
  CHECK(c.minimizer.max_iterations == 200000);

  const json custom = {{"field", {{"type", "dipole"}, {"half_separation", 3.0}, {"center", {1.0, -1.0}}}},
                       {"grid", {{"L", 8.0}, {"n", 65}}},
                       {"minimizer", {{"project_modulus", true}}},
                       {"seed", 7}};
  const auto d = parse_config(custom);
  const auto& dip = std::get<field::Dipole>(d.field);
  CHECK(dip.half_separation == 3.0);
  CHECK(dip.center.x2 == -1.0);
  CHECK(d.suite.options.seed == 7);
  // The echo is complete: parsing it reproduces itself.
  const auto echo = to_json(d).dump();
  CHECK(to_json(parse_config(json::parse(echo))).dump() == echo);
}

TEST_CASE("config rejects unknown keys and bad values") {
  CHECK_THROWS_AS(parse_config({{"colour", 1}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"grid", {{"L", 4.0}, {"m", 33}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"field", {{"type", "gaussian"}, {"radius", 2.0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"minimizer", {{"tolerance", 1e-6}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"field", {{"type", "vortex"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"grid", {{"n", "many"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"grid", {{"n", 15}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"field", {{"type", "gaussian"}, {"sigma", -1.0}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"field", {{"type", "custom"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"initializer", {{"type", "zero"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"suite", {{"kind", "all"}}}}), ConfigError);
  CHECK_THROWS_AS(parse_config({{"threads", 0}}), ConfigError);
  CHECK_THROWS_AS(parse_config(json::array()), ConfigError);
  CHECK_THROWS_AS(load_config(scratch("none") / "missing.json"), ConfigError);
}

TEST_CASE("gauge command") {
  SUBCASE("zero field gives a zero potential") {
    const auto out = scratch("gauge_zero");
    const auto c = config("gauge", {{"field", {{"type", "gaussian"}, {"amplitude", 0.0}}}, {"grid", {{"L", 4.0}, {"n", 33}}}}, out);
    CHECK(run_command(c) == kExitOk);
    const auto A = io::read_vector_field(out / "A");
    CHECK(A.c1.abs().maxCoeff() == 0.0);
    CHECK(A.c2.abs().maxCoeff() == 0.0);
    CHECK(fs::exists(out / "config.json"));
  }
  SUBCASE("Gaussian preset") {
    const auto out = scratch("gauge_gauss");
    const auto c = config("gauge", {{"radii", {{"growth", {4.0, 8.0}}}}}, out);
    CHECK(run_command(c) == kExitOk);
    const auto r = report(out / "gauge_report.json");
    CHECK(r["curl_residual"].get<double>() < 1e-3);
    CHECK(r["div_residual_sup"].get<double>() < 1e-10);
    CHECK(r["growth"].size() == 2);
    CHECK(r["flux"].get<double>() == doctest::Approx(std::numbers::pi));
  }
  SUBCASE("custom field on a mismatched grid") {
    const auto out = scratch("gauge_custom");
    fs::create_directories(out);
    io::write_field(out / "B", ScalarField<double>(make_grid(4.0, 33)));
    const auto c = config("gauge",
                          {{"field", {{"type", "custom"}, {"path", (out / "B").string()}}}, {"grid", {{"L", 4.0}, {"n", 17}}}},
                          out / "run");
    CHECK(run_command(c) == kExitConfig);
    const auto ok = config("gauge",
                           {{"field", {{"type", "custom"}, {"path", (out / "B").string()}}}, {"grid", {{"L", 4.0}, {"n", 33}}}},
                           out / "run");
    CHECK(run_command(ok) == kExitOk);
  }
}

TEST_CASE("minimize command") {
  SUBCASE("psi = 1 without a field") {
    const auto out = scratch("min_one");
    const auto c = config("minimize", {{"field", {{"type", "gaussian"}, {"amplitude", 0.0}}}, {"grid", {{"L", 4.0}, {"n", 33}}}}, out);
    CHECK(run_command(c) == kExitOk);
    const auto r = report(out / "minimize_report.json");
    CHECK(r["final_energy"].get<double>() == 0.0);
    CHECK(r["converged"].get<bool>());
    CHECK(io::read_text(out / "history.csv").rfind("iteration,energy,gradient_norm\n0,0,0\n", 0) == 0);
    CHECK(io::read_wave_field(out / "psi").values.real().minCoeff() == 1.0);
  }
  SUBCASE("constant field on a ball") {
    const auto out = scratch("min_const");
    const auto c = config("minimize",
                          {{"field", {{"type", "constant"}, {"strength", 1.0}}},
                           {"grid", {{"L", 10.0}, {"n", 81}}},
                           {"initializer", {{"type", "random"}}},
                           {"radii", {{"energy", {8.0}}}}},
                          out);
    CHECK(run_command(c) == kExitOk);
    const auto r = report(out / "minimize_report.json");
    CHECK(r["ball_energies"][0]["energy"].get<double>() > 0.0);
    CHECK(r["max_modulus"].get<double>() <= 1.0 + 1e-3);
  }
  SUBCASE("iteration cap") {
    const auto out = scratch("min_cap");
    const auto c = config("minimize",
                          {{"field", {{"type", "constant"}}},
                           {"grid", {{"L", 4.0}, {"n", 33}}},
                           {"minimizer", {{"max_iterations", 1}}},
                           {"initializer", {{"type", "random"}}}},
                          out);
    CHECK(run_command(c) == kExitNotConverged);
    CHECK(fs::exists(out / "minimize_report.json"));
  }
}

TEST_CASE("verify command") {
  SUBCASE("both suites pass") {
    const auto out = scratch("verify_ok");
    const auto c = config("verify", {{"suite", {{"kind", "both"}, {"trials", 5}, {"n", 129}}}}, out);
    CHECK(run_command(c) == kExitOk);
    const auto csv = io::read_text(out / "suite_cutoff.csv");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    CHECK(report(out / "verify_report.json")["dirichlet"]["violations"].get<int>() == 0);
  }
  SUBCASE("negative field violates the hypothesis") {
    const auto out = scratch("verify_neg");
    const auto c = config("verify", {{"suite", {{"strength", -1.0}, {"trials", 2}, {"n", 65}}}}, out);
    CHECK(run_command(c) == kExitConfig);
    CHECK(fs::exists(out / "suite_cutoff.csv"));
  }
  SUBCASE("no trials") {
    const auto out = scratch("verify_empty");
    const auto c = config("verify", {{"suite", {{"trials", 0}}}}, out);
    CHECK(run_command(c) == kExitConfig);
    CHECK(io::read_text(out / "suite_cutoff.csv") == "trial,lhs,rhs1,rhs2,margin\n");
  }
}

TEST_CASE("experiment command") {
  SUBCASE("unknown preset") {
    CHECK(run_command(config("experiment", {{"experiment", {{"preset", "sweep"}}}}, scratch("exp_unknown"))) ==
          kExitConfig);
  }
  SUBCASE("l1-energy needs finite flux") {
    const auto c = config("experiment", {{"field", {{"type", "constant"}}}, {"experiment", {{"preset", "l1-energy"}}}},
                          scratch("exp_l1"));
    CHECK(run_command(c) == kExitConfig);
  }
  SUBCASE("small constant-growth table reruns byte for byte") {
    const json j = {{"experiment", {{"preset", "constant-growth"}, {"radii", {2.0, 3.0}}}}};
    const auto a = scratch("exp_a"), b = scratch("exp_b");
    CHECK(run_command(config("experiment", j, a)) == kExitOk);
    CHECK(run_command(config("experiment", j, b)) == kExitOk);
    const auto ta = io::read_text(a / "constant_growth.csv");
    CHECK(std::count(ta.begin(), ta.end(), '\n') == 3);
    CHECK(ta == io::read_text(b / "constant_growth.csv"));
    CHECK(io::read_text(a / "plot" / "constant_growth_E_min.csv") ==
          io::read_text(b / "plot" / "constant_growth_E_min.csv"));
    auto ma = report(a / "constant_growth.meta.json"), mb = report(b / "constant_growth.meta.json");
    CHECK(ma.contains("timestamp"));
    ma.erase("timestamp");
    mb.erase("timestamp");
    CHECK(ma == mb);
  }
}
