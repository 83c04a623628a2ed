#include <string>

#include "CLI11.hpp"
#include "gpmag/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Magnetic Ginzburg-Landau energy toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  int threads = 0;
  std::uint64_t seed = 0;
  bool quick = false;
  for (const char* name : {"gauge", "minimize", "verify", "experiment"}) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides the config)");
    sub->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "random seed (overrides the config)");
    sub->add_flag("--quick", quick, "reduced grids and radii");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : gpmag::kExitConfig;
  }

  const auto* sub = app.get_subcommands().front();
  const std::string command = sub->get_name();
  return gpmag::guarded([&] {
    auto cfg = config_path.empty() ? gpmag::parse_config(nlohmann::json::object()) : gpmag::load_config(config_path);
    if (!cfg.command.empty() && cfg.command != command)
      throw gpmag::ConfigError("config is for '" + cfg.command + "', not '" + command + "'");
    cfg.command = command;
    if (!out_dir.empty()) cfg.output = out_dir;
    if (threads > 0) cfg.threads = threads;
    if (sub->count("--seed") > 0) cfg.suite.options.seed = cfg.seed = seed;
    if (quick) cfg.quick = true;
    return gpmag::run_command(cfg);
  });
}
