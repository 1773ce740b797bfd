#include <cmath>
#include <cstdio>
#include <fstream>
#include <initializer_list>

#include "chanem/error.hpp"
#include "chanem/harness.hpp"

namespace chanem {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& field, const std::string& msg) {
  throw Error(ErrorKind::config, "config field '" + field + "': " + msg);
}

void check_keys(const json& obj, const std::string& where,
                std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) config_error(where, "expected an object");
  for (const auto& [key, value] : obj.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) config_error(where.empty() ? key : where + "." + key, "unknown field");
  }
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.contains(key)) config_error(where.empty() ? key : where + "." + key, "missing");
  return obj.at(key);
}

double get_number(const json& v, const std::string& field) {
  if (!v.is_number()) config_error(field, "expected a number");
  return v.get<double>();
}

std::int64_t get_integer(const json& v, const std::string& field) {
  if (!v.is_number_integer()) config_error(field, "expected an integer");
  return v.get<std::int64_t>();
}

ChannelParams parse_params(const json& v, const std::string& field) {
  check_keys(v, field, {"alpha", "beta"});
  ChannelParams p{get_number(require(v, "alpha", field), field + ".alpha"),
                  get_number(require(v, "beta", field), field + ".beta")};
  try {
    validate(p);
  } catch (const Error& e) {
    config_error(field, e.what());
  }
  return p;
}

std::vector<ChannelParams> parse_params_list(const json& v, const std::string& field) {
  std::vector<ChannelParams> out;
  if (v.is_object()) {
    out.push_back(parse_params(v, field));
  } else if (v.is_array()) {
    for (std::size_t i = 0; i < v.size(); ++i)
      out.push_back(parse_params(v[i], field + "[" + std::to_string(i) + "]"));
  } else {
    config_error(field, "expected an object or an array of objects");
  }
  return out;
}

json params_json(const ChannelParams& p) { return {{"alpha", p.alpha}, {"beta", p.beta}}; }

const std::vector<ChannelParams> kTable1Starts = {
    {0.1, 0.6}, {0.2, 0.7}, {0.3, 0.1}, {0.4, 0.5},
    {0.6, 0.5}, {0.7, 0.7}, {0.8, 0.5}, {0.9, 0.8},
};

}  // namespace

void validate(const GridSpec& grid) {
  if (!(grid.step > 0.0 && grid.step <= 0.5)) config_error("grid.step", "must lie in (0, 0.5]");
  if (!(grid.lo >= 0.0 && grid.hi <= 1.0 && grid.lo < grid.hi)) {
    config_error("grid", "bounds must satisfy 0 <= lo < hi <= 1");
  }
  const double n = (grid.hi - grid.lo) / grid.step;
  if (std::abs(n - std::round(n)) > 1e-9 * std::max(1.0, n)) {
    config_error("grid.step", "must divide hi - lo");
  }
}

void validate(const ExperimentConfig& config) {
  if (config.true_params.empty()) config_error("true_params", "at least one channel required");
  for (const auto& p : config.true_params) {
    try {
      validate(p);
    } catch (const Error& e) {
      config_error("true_params", e.what());
    }
  }
  try {
    validate(config.schedule);
  } catch (const Error& e) {
    config_error("schedule", e.what());
  }
  if (config.observed_slots < 2) config_error("observed_slots", "must be >= 2");
  if (!config.starts.heuristic()) {
    if (config.starts.points.empty()) config_error("starts", "at least one start required");
    if (config.true_params.size() > 1 &&
        config.starts.points.size() != config.true_params.size()) {
      config_error("starts", "with several channels, give one start per channel");
    }
  }
  try {
    validate(config.em);
  } catch (const Error& e) {
    config_error("em", e.what());
  }
  if (config.grid) validate(*config.grid);
}

ExperimentConfig parse_config(const json& j) {
  check_keys(j, "", {"true_params", "schedule", "observed_slots", "starts", "em",
                     "master_seed", "output_dir", "grid"});
  ExperimentConfig c;
  c.true_params = parse_params_list(require(j, "true_params", ""), "true_params");

  const json& s = require(j, "schedule", "");
  check_keys(s, "schedule", {"kind", "fixed_L", "L_support", "seed"});
  const json& kind = require(s, "kind", "schedule");
  if (kind == "fixed") {
    c.schedule.kind = ObservationSchedule::Kind::fixed;
    c.schedule.fixed_L = get_integer(require(s, "fixed_L", "schedule"), "schedule.fixed_L");
    if (s.contains("L_support")) config_error("schedule.L_support", "only valid for random-uniform");
  } else if (kind == "random-uniform") {
    c.schedule.kind = ObservationSchedule::Kind::random_uniform;
    const json& sup = require(s, "L_support", "schedule");
    if (!sup.is_array()) config_error("schedule.L_support", "expected an array");
    for (const auto& v : sup) c.schedule.L_support.push_back(get_integer(v, "schedule.L_support"));
    if (s.contains("fixed_L")) config_error("schedule.fixed_L", "only valid for fixed");
  } else {
    config_error("schedule.kind", "expected \"fixed\" or \"random-uniform\"");
  }
  if (s.contains("seed")) {
    const auto seed = get_integer(s["seed"], "schedule.seed");
    if (seed < 0) config_error("schedule.seed", "must be >= 0");
    c.schedule.seed = static_cast<std::uint64_t>(seed);
  }

  c.observed_slots = get_integer(require(j, "observed_slots", ""), "observed_slots");

  const json& st = require(j, "starts", "");
  if (st.is_object() && st.contains("heuristic")) {
    check_keys(st, "starts", {"heuristic"});
    const auto n = get_integer(st["heuristic"], "starts.heuristic");
    if (n < 1) config_error("starts.heuristic", "must be >= 1");
    c.starts.heuristic_count = static_cast<std::size_t>(n);
  } else {
    c.starts.points = parse_params_list(st, "starts");
  }

  if (j.contains("em")) {
    const json& em = j["em"];
    check_keys(em, "em", {"max_iterations", "param_tolerance", "clamp_epsilon",
                          "record_trajectory"});
    if (em.contains("max_iterations")) {
      c.em.max_iterations =
          static_cast<int>(get_integer(em["max_iterations"], "em.max_iterations"));
    }
    if (em.contains("param_tolerance")) {
      c.em.param_tolerance = get_number(em["param_tolerance"], "em.param_tolerance");
    }
    if (em.contains("clamp_epsilon")) {
      c.em.clamp_epsilon = get_number(em["clamp_epsilon"], "em.clamp_epsilon");
    }
    if (em.contains("record_trajectory")) {
      if (!em["record_trajectory"].is_boolean()) {
        config_error("em.record_trajectory", "expected a boolean");
      }
      c.em.record_trajectory = em["record_trajectory"].get<bool>();
    }
  }
  if (j.contains("master_seed")) {
    const auto seed = get_integer(j["master_seed"], "master_seed");
    if (seed < 0) config_error("master_seed", "must be >= 0");
    c.master_seed = static_cast<std::uint64_t>(seed);
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) config_error("output_dir", "expected a string");
    c.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("grid")) {
    const json& g = j["grid"];
    check_keys(g, "grid", {"step", "lo", "hi"});
    GridSpec grid;
    if (g.contains("step")) grid.step = get_number(g["step"], "grid.step");
    if (g.contains("lo")) grid.lo = get_number(g["lo"], "grid.lo");
    if (g.contains("hi")) grid.hi = get_number(g["hi"], "grid.hi");
    c.grid = grid;
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::config, "config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
  json j;
  auto truths = json::array();
  for (const auto& p : c.true_params) truths.push_back(params_json(p));
  j["true_params"] = std::move(truths);

  json s;
  if (c.schedule.kind == ObservationSchedule::Kind::fixed) {
    s["kind"] = "fixed";
    s["fixed_L"] = c.schedule.fixed_L;
  } else {
    s["kind"] = "random-uniform";
    s["L_support"] = c.schedule.L_support;
  }
  s["seed"] = c.schedule.seed;
  j["schedule"] = std::move(s);
  j["observed_slots"] = c.observed_slots;

  if (c.starts.heuristic()) {
    j["starts"] = {{"heuristic", c.starts.heuristic_count}};
  } else {
    auto starts = json::array();
    for (const auto& p : c.starts.points) starts.push_back(params_json(p));
    j["starts"] = std::move(starts);
  }
  j["em"] = {{"max_iterations", c.em.max_iterations},
             {"param_tolerance", c.em.param_tolerance},
             {"clamp_epsilon", c.em.clamp_epsilon},
             {"record_trajectory", c.em.record_trajectory}};
  j["master_seed"] = c.master_seed;
  j["output_dir"] = c.output_dir;
  if (c.grid) j["grid"] = {{"step", c.grid->step}, {"lo", c.grid->lo}, {"hi", c.grid->hi}};
  return j;
}

std::vector<std::string> preset_names() {
  return {"paper-fig3", "paper-table1", "paper-fig4", "paper-fig5"};
}

ExperimentConfig preset(std::string_view name) {
  ExperimentConfig c;
  c.master_seed = 1;
  c.observed_slots = 100000;
  c.em.max_iterations = 100;
  if (name == "paper-fig3" || name == "paper-table1" || name == "paper-fig4") {
    c.true_params = {{0.8, 0.3}};
    c.schedule = ObservationSchedule::fixed(4);
    c.starts.points = kTable1Starts;
    c.em.record_trajectory = name == "paper-fig3";
    if (name == "paper-fig4") c.grid = GridSpec{};
    c.output_dir = std::string("out/") + std::string(name);
    return c;
  }
  if (name == "paper-fig5") {
    c.true_params = {{0.8, 0.3}, {0.2, 0.9}, {0.4, 0.1}, {0.7, 0.5}, {0.9, 0.6}};
    c.starts.points = {{0.6, 0.5}, {0.4, 0.8}, {0.1, 0.3}, {0.8, 0.3}, {0.7, 0.4}};
    c.schedule = ObservationSchedule::random_uniform({1, 2, 3, 4, 5, 6}, 0);
    c.em.max_iterations = 1000;
    c.em.record_trajectory = true;
    c.output_dir = "out/paper-fig5";
    return c;
  }
  throw Error(ErrorKind::config, "unknown preset '" + std::string(name) + "'");
}

std::string config_hash(const ExperimentConfig& config) {
  // The output location does not affect results, so it is left out.
  nlohmann::json j = to_json(config);
  j.erase("output_dir");
  const std::string text = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace chanem
