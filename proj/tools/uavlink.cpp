#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "uavlink/harness.hpp"

namespace {

enum Exit : int {
  kOk = 0,
  kUsage = 2,
  kConfigMissing = 3,
  kConfigParse = 4,
  kConfigInvalid = 5,
  kOutput = 6,
  kPlotInput = 7,
  kRuntime = 8,
};

int config_exit(uavlink::ConfigErrorKind k) {
  switch (k) {
    case uavlink::ConfigErrorKind::kMissingFile: return kConfigMissing;
    case uavlink::ConfigErrorKind::kParse: return kConfigParse;
    case uavlink::ConfigErrorKind::kValidation: return kConfigInvalid;
  }
  return kConfigInvalid;
}

}  // namespace

int main(int argc, char** argv) {
  namespace h = uavlink::harness;

  CLI::App app{"uavlink: cellular UAV link emulator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::optional<std::uint64_t> seed;
  std::optional<double> duration_s;
  std::string out;
  app.add_option("--seed", seed, "Master seed (overrides the config)");
  app.add_option("--duration", duration_s, "Session duration in seconds (overrides the config)");
  app.add_option("--out", out, "Output directory (overrides the config)");

  std::string config_path;
  auto* run = app.add_subcommand("run", "Run every combination of a scenario config; writes results.csv");
  run->add_option("config", config_path, "Scenario config (.yaml or .json)")->required();

  unsigned threads = 0;
  auto* sw = app.add_subcommand("sweep", "Run a sweep config, members in parallel; writes summary.csv");
  sw->add_option("config", config_path, "Scenario config (.yaml or .json)")->required();
  sw->add_option("-j,--jobs", threads, "Worker threads (default: hardware concurrency)");

  std::string results_dir;
  std::string kind;
  auto* plot = app.add_subcommand("plotdata", "Emit plot-ready series from a results directory");
  plot->add_option("results-dir", results_dir, "Directory written by run or sweep")->required();
  plot->add_option("--kind", kind, "fig3 | fig4 | fig5")->required()->check(CLI::IsMember({"fig3", "fig4", "fig5"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*plot) {
      std::optional<std::filesystem::path> dest;
      if (!out.empty()) dest = out;
      const auto path = h::emit_plotdata(results_dir, *h::parse_plot_kind(kind), dest);
      std::cout << path.string() << '\n';
      return kOk;
    }

    auto cfg = h::load_config(config_path);
    if (seed) cfg.seed = *seed;
    if (duration_s) cfg.duration = uavlink::from_seconds(*duration_s);
    if (!out.empty()) cfg.output_dir = out;
    h::validate(cfg);

    const std::filesystem::path dest = cfg.output_dir;
    const auto rs = *run ? h::run_scenario(cfg, dest) : h::sweep(cfg, dest, threads == 0 ? std::thread::hardware_concurrency() : threads);
    std::cout << rs.members.size() << " run(s), config " << h::fmt_hex64(rs.config_hash) << " -> " << dest.string()
              << '\n';
    return kOk;
  } catch (const uavlink::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return config_exit(e.kind());
  } catch (const h::PlotDataError& e) {
    std::cerr << "plotdata error: " << e.what() << '\n';
    return kPlotInput;
  } catch (const uavlink::OutputError& e) {
    std::cerr << "output error: " << e.what() << '\n';
    return kOutput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
}
