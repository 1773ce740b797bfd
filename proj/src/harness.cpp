#include "chanem/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "chanem/error.hpp"
#include "chanem/report_json.hpp"

namespace chanem {

namespace fs = std::filesystem;
using nlohmann::json;

std::string format_double(double x) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

namespace {

std::vector<std::string> metadata_lines(const ExperimentConfig& config) {
  return {std::string(kToolName) + " " + std::string(kToolVersion),
          "config_hash=" + config_hash(config),
          "seed=" + std::to_string(config.master_seed)};
}

json metadata_json(const ExperimentConfig& config) {
  return {{"tool", kToolName},
          {"version", kToolVersion},
          {"config_hash", config_hash(config)},
          {"seed", config.master_seed}};
}

fs::path prepare_output_dir(const ExperimentConfig& config) {
  const fs::path dir(config.output_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_file(const fs::path& path, const std::string& content,
                std::vector<fs::path>& written) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::io, "cannot open " + path.string() + " for writing");
  out << content;
  out.close();
  if (!out) throw Error(ErrorKind::io, "failed writing " + path.string());
  written.push_back(path);
}

std::string csv_preamble(const ExperimentConfig& config) {
  std::string s;
  for (const auto& line : metadata_lines(config)) s += "# " + line + "\n";
  return s;
}

std::string json_text(const json& j) { return j.dump(2) + "\n"; }

void require_single_channel(const ExperimentConfig& config, const char* command) {
  if (config.true_params.size() != 1) {
    throw Error(ErrorKind::config, std::string("config field 'true_params': ") + command +
                                       " expects exactly one channel");
  }
}

ObservationSchedule channel_schedule(const ExperimentConfig& config, std::size_t channel) {
  ObservationSchedule s = config.schedule;
  s.seed = derive_seed(splitmix64(config.schedule.seed) ^ config.master_seed, channel, 1);
  return s;
}

std::string trajectory_csv(const ExperimentConfig& config, const EmTrajectory& t) {
  std::string s = csv_preamble(config) + "p,alpha,beta,loglik\n";
  for (const auto& step : t.steps) {
    s += std::to_string(step.p) + "," + format_double(step.alpha) + "," +
         format_double(step.beta) + "," + format_double(step.loglik) + "\n";
  }
  return s;
}

}  // namespace

ChannelData simulate_channel(const ExperimentConfig& config, std::size_t channel) {
  const ObservationSchedule schedule = channel_schedule(config, channel);
  const auto times = schedule_times(schedule, static_cast<std::size_t>(config.observed_slots));
  ChannelData data;
  data.sequence = simulate_chain(config.true_params.at(channel), times.back(),
                                 derive_seed(config.master_seed, channel, 0));
  data.dataset = observe(data.sequence, schedule);
  return data;
}

std::vector<ChannelParams> channel_starts(const ExperimentConfig& config,
                                          std::size_t channel,
                                          const ObservedDataset& dataset) {
  if (config.starts.heuristic()) {
    return heuristic_starts(dataset, config.starts.heuristic_count, config.em.clamp_epsilon);
  }
  if (config.true_params.size() > 1) return {config.starts.points.at(channel)};
  return config.starts.points;
}

std::vector<SeGridPoint> compute_se_grid(const ObservedDataset& dataset,
                                         const ChannelParams& truth,
                                         const GridSpec& grid, double epsilon) {
  validate(grid);
  const GapSummary summary(dataset);
  const double reference = mean_transition_likelihood(summary, clamp(truth, epsilon));
  const auto n = static_cast<int>(std::llround((grid.hi - grid.lo) / grid.step));
  std::vector<SeGridPoint> out;
  out.reserve(static_cast<std::size_t>((n + 1) * (n + 1)));
  for (int i = 0; i <= n; ++i) {
    const double a = grid.lo + (grid.hi - grid.lo) * i / n;
    for (int k = 0; k <= n; ++k) {
      const double b = grid.lo + (grid.hi - grid.lo) * k / n;
      const ChannelParams point = clamp({a, b}, epsilon);
      out.push_back({a, b,
                     squared_error_db(mean_transition_likelihood(summary, point), reference)});
    }
  }
  return out;
}

std::vector<ChannelEstimate> run_multichannel(const ExperimentConfig& config) {
  EmConfig em = config.em;
  em.record_trajectory = true;
  std::vector<ChannelEstimate> out;
  for (std::size_t ch = 0; ch < config.true_params.size(); ++ch) {
    const ChannelData data = simulate_channel(config, ch);
    const auto starts = channel_starts(config, ch, data.dataset);
    const ChannelParams truth = config.true_params[ch];
    ChannelEstimate est{truth, multi_start(data.dataset, starts, em, truth), {}};
    for (const auto& step : est.result.best().trajectory->steps) {
      est.gamma_curve.push_back(relative_error({step.alpha, step.beta}, truth));
    }
    out.push_back(std::move(est));
  }
  return out;
}

double utilization_uncertainty(const ChannelParams& estimate, double gamma_percent) {
  // Each per-parameter relative error is at most twice the average.
  const double r = 2.0 * gamma_percent / 100.0;
  auto bounds = [r](double x) {
    const double lo = x / (1.0 + r);
    const double hi = r < 1.0 ? std::min(1.0, x / (1.0 - r)) : 1.0;
    return std::pair{lo, hi};
  };
  const auto [a_lo, a_hi] = bounds(estimate.alpha);
  const auto [b_lo, b_hi] = bounds(estimate.beta);
  const double u_lo = b_lo / (a_hi + b_lo);
  const double u_hi = b_hi / (a_lo + b_hi);
  return 0.5 * (u_hi - u_lo);
}

RankResult rank_estimates(const std::vector<ChannelParams>& truths,
                          const std::vector<ChannelParams>& estimates,
                          const std::vector<double>& gamma_percent) {
  RankResult out;
  out.truth_order = rank_channels(truths);
  for (auto ch : rank_channels(estimates)) {
    out.order.push_back({ch, utilization(estimates[ch]), utilization(truths[ch]),
                         utilization_uncertainty(estimates[ch], gamma_percent[ch])});
  }
  for (std::size_t i = 0; i + 1 < out.order.size(); ++i) {
    const auto& a = out.order[i];
    const auto& b = out.order[i + 1];
    if (b.u_hat - a.u_hat < 2.0 * std::max(a.uncertainty, b.uncertainty)) {
      out.ambiguous_pairs.emplace_back(a.channel, b.channel);
    }
  }
  return out;
}

CommandOutput cmd_simulate(const ExperimentConfig& config, bool write_sequence) {
  validate(config);
  const fs::path dir = prepare_output_dir(config);
  CommandOutput out;
  std::ostringstream summary;
  for (std::size_t ch = 0; ch < config.true_params.size(); ++ch) {
    const ChannelData data = simulate_channel(config, ch);
    std::ostringstream csv;
    write_dataset_csv(csv, data.dataset, metadata_lines(config));
    write_file(dir / ("observed_ch" + std::to_string(ch) + ".csv"), csv.str(), out.files);
    if (write_sequence) {
      std::string seq = csv_preamble(config) + "slot,state\n";
      for (std::size_t t = 0; t < data.sequence.size(); ++t) {
        seq += std::to_string(t + 1) + "," + std::to_string(index(data.sequence[t])) + "\n";
      }
      write_file(dir / ("sequence_ch" + std::to_string(ch) + ".csv"), seq, out.files);
    }
    std::map<std::int64_t, std::size_t> histogram;
    for (const auto& g : gaps(data.dataset)) ++histogram[g.hidden_len];
    summary << "channel " << ch << ": T=" << data.sequence.size()
            << " K=" << data.dataset.size() << " gaps:";
    for (const auto& [len, count] : histogram) summary << " L" << len << "=" << count;
    summary << "\n";
  }
  out.summary = summary.str();
  return out;
}

CommandOutput cmd_trajectories(const ExperimentConfig& config) {
  validate(config);
  require_single_channel(config, "trajectories");
  const fs::path dir = prepare_output_dir(config);
  const ChannelData data = simulate_channel(config, 0);
  const auto starts = channel_starts(config, 0, data.dataset);
  EmConfig em = config.em;
  em.record_trajectory = true;
  const MultiStartResult result = multi_start(data.dataset, starts, em, config.true_params[0]);

  CommandOutput out;
  json runs = json::array();
  for (std::size_t i = 0; i < starts.size(); ++i) {
    if (!result.errors[i].empty()) {
      runs.push_back({{"error", result.errors[i]}});
      continue;
    }
    write_file(dir / ("trajectory_start" + std::to_string(i) + ".csv"),
               trajectory_csv(config, *result.runs[i].trajectory), out.files);
    runs.push_back(to_json(result.runs[i], false));
  }
  json summary = {{"meta", metadata_json(config)}, {"winner", result.winner}, {"runs", runs}};
  write_file(dir / "trajectories.json", json_text(summary), out.files);

  std::ostringstream s;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    s << "start " << i << " (" << starts[i].alpha << ", " << starts[i].beta << ")";
    if (result.errors[i].empty()) {
      s << " -> (" << result.runs[i].estimate.alpha << ", " << result.runs[i].estimate.beta << ")";
    } else {
      s << " failed: " << result.errors[i];
    }
    s << (i == result.winner ? "  [winner]\n" : "\n");
  }
  out.summary = s.str();
  return out;
}

CommandOutput cmd_table1(const ExperimentConfig& config) {
  validate(config);
  require_single_channel(config, "table1");
  const fs::path dir = prepare_output_dir(config);
  const ChannelData data = simulate_channel(config, 0);
  const auto starts = channel_starts(config, 0, data.dataset);
  const MultiStartResult result =
      multi_start(data.dataset, starts, config.em, config.true_params[0]);

  const std::string p = std::to_string(config.em.max_iterations);
  std::string csv = csv_preamble(config) + "start_alpha,start_beta,alpha_" + p + ",beta_" + p +
                    ",se_db,winner\n";
  std::ostringstream s;
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const bool ok = result.errors[i].empty();
    const auto& r = result.runs[i];
    csv += format_double(starts[i].alpha) + "," + format_double(starts[i].beta) + "," +
           (ok ? format_double(r.estimate.alpha) : "nan") + "," +
           (ok ? format_double(r.estimate.beta) : "nan") + "," +
           (ok ? format_double(r.se_db) : "nan") + "," + (i == result.winner ? "1" : "0") +
           "\n";
    s << "(" << starts[i].alpha << "," << starts[i].beta << ") -> ";
    if (ok) {
      s << "(" << r.estimate.alpha << ", " << r.estimate.beta << ") SE " << r.se_db << " dB";
    } else {
      s << result.errors[i];
    }
    s << (i == result.winner ? "  [winner]\n" : "\n");
  }
  CommandOutput out;
  write_file(dir / "table1.csv", csv, out.files);
  out.summary = s.str();
  return out;
}

CommandOutput cmd_se_grid(const ExperimentConfig& config, const GridSpec& grid) {
  validate(config);
  validate(grid);
  require_single_channel(config, "se-grid");
  const fs::path dir = prepare_output_dir(config);
  const ChannelData data = simulate_channel(config, 0);
  const auto points =
      compute_se_grid(data.dataset, config.true_params[0], grid, config.em.clamp_epsilon);
  std::string csv = csv_preamble(config) + "alpha,beta,se_db\n";
  const SeGridPoint* best = &points.front();
  for (const auto& pt : points) {
    csv += format_double(pt.alpha) + "," + format_double(pt.beta) + "," + format_double(pt.se_db) + "\n";
    if (pt.se_db < best->se_db) best = &pt;
  }
  CommandOutput out;
  write_file(dir / "se_grid.csv", csv, out.files);
  std::ostringstream s;
  s << points.size() << " grid points; minimum SE " << best->se_db << " dB at ("
    << best->alpha << ", " << best->beta << ")\n";
  out.summary = s.str();
  return out;
}

CommandOutput cmd_multichannel(const ExperimentConfig& config) {
  validate(config);
  const fs::path dir = prepare_output_dir(config);
  const auto estimates = run_multichannel(config);
  CommandOutput out;
  json channels = json::array();
  std::ostringstream s;
  for (std::size_t ch = 0; ch < estimates.size(); ++ch) {
    const auto& e = estimates[ch];
    std::string csv = csv_preamble(config) + "p,gamma_percent\n";
    for (std::size_t p = 0; p < e.gamma_curve.size(); ++p) {
      csv += std::to_string(p) + "," + format_double(e.gamma_curve[p]) + "\n";
    }
    write_file(dir / ("gamma_ch" + std::to_string(ch) + ".csv"), csv, out.files);
    channels.push_back({{"channel", ch},
                        {"true_alpha", e.truth.alpha},
                        {"true_beta", e.truth.beta},
                        {"report", to_json(e.result.best(), false)}});
    s << "channel " << ch << ": (" << e.result.best().estimate.alpha << ", "
      << e.result.best().estimate.beta << ") gamma " << e.gamma_curve.back() << "%\n";
  }
  write_file(dir / "estimates.json",
             json_text({{"meta", metadata_json(config)}, {"channels", channels}}), out.files);
  out.summary = s.str();
  return out;
}

CommandOutput cmd_rank(const ExperimentConfig& config) {
  validate(config);
  const fs::path dir = prepare_output_dir(config);
  const auto estimates = run_multichannel(config);
  std::vector<ChannelParams> est, truth;
  std::vector<double> gamma;
  for (const auto& e : estimates) {
    est.push_back(e.result.best().estimate);
    truth.push_back(e.truth);
    gamma.push_back(*e.result.best().gamma_percent);
  }
  const RankResult rank = rank_estimates(truth, est, gamma);

  json order = json::array();
  json channels = json::array();
  std::ostringstream s;
  for (const auto& entry : rank.order) {
    order.push_back(entry.channel);
    channels.push_back({{"channel", entry.channel},
                        {"alpha_hat", est[entry.channel].alpha},
                        {"beta_hat", est[entry.channel].beta},
                        {"u_hat", entry.u_hat},
                        {"u_true", entry.u_true},
                        {"gamma_percent", gamma[entry.channel]},
                        {"u_uncertainty", entry.uncertainty}});
    s << "channel " << entry.channel << ": u_hat " << entry.u_hat << "\n";
  }
  json ambiguous = json::array();
  for (const auto& [a, b] : rank.ambiguous_pairs) ambiguous.push_back({a, b});
  CommandOutput out;
  write_file(dir / "rank.json",
             json_text({{"meta", metadata_json(config)},
                        {"order", order},
                        {"truth_order", rank.truth_order},
                        {"channels", channels},
                        {"ambiguous_pairs", ambiguous}}),
             out.files);
  out.summary = s.str();
  return out;
}

}  // namespace chanem
