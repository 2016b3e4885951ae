// retrobell <exact|run|scan> --config PATH [--out DIR] [--seed N]
//
// Exit codes: 0 success, 2 config error, 3 separation refusal, 4 I/O error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "retrobell/commands.hpp"
#include "retrobell/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSeparation = 3;
constexpr int kExitIo = 4;

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Retrocausal pilot-wave model of Bell correlations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "Scenario JSON file")->required();
    cmd->add_option("--out", out_dir, "Output directory")->capture_default_str();
    cmd->add_option("--seed", seed, "Override the scenario seed");
  };
  auto* exact = app.add_subcommand("exact", "Closed-form predictions (no sampling)");
  auto* run = app.add_subcommand("run", "Monte Carlo run: summary, records and spot histograms");
  auto* scan = app.add_subcommand("scan", "Setting sweep (bell-curve) or signalling scan (signal)");
  add_common(exact);
  add_common(run);
  add_common(scan);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    auto config = retrobell::load_config(config_path);
    if (seed) config.spec.seed = *seed;
    if (exact->parsed()) {
      const auto summary = retrobell::cmd_exact(config);
      std::cout << summary.dump(2) << "\n";
      if (exact->count("--out") > 0) {
        std::filesystem::create_directories(out_dir);
        std::ofstream(std::filesystem::path(out_dir) / "exact.json", std::ios::binary)
            << summary.dump(2) << "\n";
      }
    } else if (run->parsed()) {
      const auto summary = retrobell::cmd_run(config, out_dir);
      std::cout << "wrote " << summary["files"].size() + 1 << " files to " << out_dir << "\n";
    } else if (scan->parsed()) {
      retrobell::cmd_scan(config, out_dir);
      std::cout << "wrote scan.csv and scan_summary.json to " << out_dir << "\n";
    }
  } catch (const retrobell::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const retrobell::SeparationError& e) {
    std::cerr << "refusing to run: " << e.what() << "\n";
    return kExitSeparation;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
