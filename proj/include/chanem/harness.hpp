#pragma once

// Seeded Monte Carlo experiments and their file outputs. Every output file
// starts with a metadata block (tool version, config hash, seed). Given the
// same config and master seed, the files are byte-identical.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "chanem/em.hpp"
#include "chanem/observation.hpp"

namespace chanem {

inline constexpr std::string_view kToolName = "chan-em";
inline constexpr std::string_view kToolVersion = "0.1.0";

struct GridSpec {
  double step = 0.02;
  double lo = 0.0;
  double hi = 1.0;
};

void validate(const GridSpec& grid);

/// Either explicit starting points or `heuristic_count` points on the slope line.
struct StartSpec {
  std::vector<ChannelParams> points;
  std::size_t heuristic_count = 0;

  bool heuristic() const noexcept { return heuristic_count > 0; }
};

struct ExperimentConfig {
  std::vector<ChannelParams> true_params;
  ObservationSchedule schedule;  // seed is mixed with master_seed per channel
  std::int64_t observed_slots = 100000;
  StartSpec starts;
  EmConfig em;
  std::uint64_t master_seed = 1;
  std::string output_dir = "out";
  std::optional<GridSpec> grid;
};

/// Strict parse: unknown fields and bad values raise ErrorKind::config naming
/// the offending field.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);
void validate(const ExperimentConfig& config);

std::vector<std::string> preset_names();
/// paper-fig3, paper-table1, paper-fig4 or paper-fig5.
ExperimentConfig preset(std::string_view name);

/// FNV-1a 64 of the canonical JSON form, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

struct ChannelData {
  StateSequence sequence;
  ObservedDataset dataset;
};

/// Channel `channel` simulated for exactly observed_slots observations. Seeds
/// are derived from master_seed and the channel index only.
ChannelData simulate_channel(const ExperimentConfig& config, std::size_t channel);

/// Starting points for a channel: the heuristic line, the channel's own entry
/// when starts are paired with channels, or the full list for one channel.
std::vector<ChannelParams> channel_starts(const ExperimentConfig& config,
                                          std::size_t channel,
                                          const ObservedDataset& dataset);

struct SeGridPoint {
  double alpha = 0.0;
  double beta = 0.0;
  double se_db = 0.0;
};

/// SE against `truth` at every grid point. Points are clamped inward by epsilon.
std::vector<SeGridPoint> compute_se_grid(const ObservedDataset& dataset,
                                         const ChannelParams& truth,
                                         const GridSpec& grid, double epsilon);

struct ChannelEstimate {
  ChannelParams truth;
  MultiStartResult result;
  std::vector<double> gamma_curve;  // gamma_percent at p = 0..iterations
};

/// Per-channel multi-start E-M with trajectories recorded.
std::vector<ChannelEstimate> run_multichannel(const ExperimentConfig& config);

struct RankEntry {
  std::size_t channel = 0;
  double u_hat = 0.0;
  double u_true = 0.0;
  double uncertainty = 0.0;  // half-width of u implied by the gamma bound
};

struct RankResult {
  std::vector<RankEntry> order;  // ascending u_hat
  std::vector<std::size_t> truth_order;
  std::vector<std::pair<std::size_t, std::size_t>> ambiguous_pairs;
};

/// Ranks channel estimates. Adjacent channels whose u_hat gap is below twice
/// the larger uncertainty are flagged as possibly swapped.
RankResult rank_estimates(const std::vector<ChannelParams>& truths,
                          const std::vector<ChannelParams>& estimates,
                          const std::vector<double>& gamma_percent);

/// Half-width of the utilization interval for an estimate whose average
/// relative error is gamma_percent.
double utilization_uncertainty(const ChannelParams& estimate, double gamma_percent);

struct CommandOutput {
  std::vector<std::filesystem::path> files;
  std::string summary;
};

CommandOutput cmd_simulate(const ExperimentConfig& config, bool write_sequence = false);
CommandOutput cmd_trajectories(const ExperimentConfig& config);
CommandOutput cmd_table1(const ExperimentConfig& config);
CommandOutput cmd_se_grid(const ExperimentConfig& config, const GridSpec& grid);
CommandOutput cmd_multichannel(const ExperimentConfig& config);
CommandOutput cmd_rank(const ExperimentConfig& config);

/// Shortest round-trip decimal form, locale independent.
std::string format_double(double x);

}  // namespace chanem
