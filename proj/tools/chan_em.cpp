// chan-em: experiment harness for E-M estimation of Markov channel parameters.
//
// Exit codes: 0 success, 2 config validation, 3 numerical failure, 4 I/O.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "chanem/error.hpp"
#include "chanem/harness.hpp"

namespace {

enum ExitCode { kOk = 0, kConfig = 2, kNumerical = 3, kIo = 4 };

int exit_code_for(chanem::ErrorKind kind) {
  switch (kind) {
    case chanem::ErrorKind::config: return kConfig;
    case chanem::ErrorKind::io: return kIo;
    default: return kNumerical;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Estimate 2-state Markov channel transitions from incomplete observations"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(chanem::kToolVersion));

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_dir;
  std::string preset_name;
  std::optional<std::int64_t> observed_slots;
  std::optional<double> grid_step;
  bool full_sequence = false;

  const char* commands[][2] = {
      {"simulate", "Simulate channels and write the observed datasets"},
      {"trajectories", "E-M trajectories for every start"},
      {"table1", "Final estimates and squared error per start"},
      {"se-grid", "Squared error over a parameter grid"},
      {"multichannel", "Per-channel relative error against iterations"},
      {"rank", "Rank channels by estimated utilization"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config_path, "JSON experiment config");
    sub->add_option("--seed", seed, "Override master_seed");
    sub->add_option("--out", out_dir, "Override output_dir");
    sub->add_option("--preset", preset_name, "Built-in experiment")
        ->check(CLI::IsMember(chanem::preset_names()));
    sub->add_option("--observed-slots", observed_slots, "Override observed_slots (K)");
    if (std::string(name) == "se-grid") sub->add_option("--grid-step", grid_step, "Grid step");
    if (std::string(name) == "simulate") {
      sub->add_flag("--full-sequence", full_sequence, "Also write the complete slot sequence");
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (config_path.empty() == preset_name.empty()) {
      throw chanem::Error(chanem::ErrorKind::config,
                          "give exactly one of --config or --preset");
    }
    chanem::ExperimentConfig config =
        preset_name.empty() ? chanem::load_config(config_path) : chanem::preset(preset_name);
    if (seed) config.master_seed = *seed;
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (observed_slots) config.observed_slots = *observed_slots;
    chanem::GridSpec grid = config.grid.value_or(chanem::GridSpec{});
    if (grid_step) grid.step = *grid_step;

    chanem::CommandOutput out;
    if (command == "simulate") out = chanem::cmd_simulate(config, full_sequence);
    else if (command == "trajectories") out = chanem::cmd_trajectories(config);
    else if (command == "table1") out = chanem::cmd_table1(config);
    else if (command == "se-grid") out = chanem::cmd_se_grid(config, grid);
    else if (command == "multichannel") out = chanem::cmd_multichannel(config);
    else out = chanem::cmd_rank(config);

    std::cout << out.summary;
    for (const auto& f : out.files) std::cout << "wrote " << f.string() << "\n";
    return kOk;
  } catch (const chanem::Error& e) {
    std::cerr << "chan-em " << command << ": " << e.name() << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "chan-em " << command << ": " << e.what() << "\n";
    return kNumerical;
  }
}
