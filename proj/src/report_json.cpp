#include "chanem/report_json.hpp"

#include "chanem/error.hpp"

namespace chanem {

nlohmann::json to_json(const EstimateReport& report, bool with_trajectory) {
  nlohmann::json j = {
      {"alpha_hat", report.estimate.alpha},
      {"beta_hat", report.estimate.beta},
      {"start_alpha", report.start.alpha},
      {"start_beta", report.start.beta},
      {"iterations", report.iterations_run},
      {"se_db", report.se_db},
  };
  if (report.gamma_percent) j["gamma_percent"] = *report.gamma_percent;
  if (with_trajectory && report.trajectory) {
    auto steps = nlohmann::json::array();
    for (const auto& s : report.trajectory->steps) {
      steps.push_back({{"p", s.p}, {"alpha", s.alpha}, {"beta", s.beta}, {"loglik", s.loglik}});
    }
    j["trajectory"] = std::move(steps);
  }
  return j;
}

EstimateReport report_from_json(const nlohmann::json& j) {
  try {
    EstimateReport r;
    r.estimate = {j.at("alpha_hat").get<double>(), j.at("beta_hat").get<double>()};
    r.start = {j.at("start_alpha").get<double>(), j.at("start_beta").get<double>()};
    r.iterations_run = j.at("iterations").get<int>();
    r.se_db = j.at("se_db").get<double>();
    if (j.contains("gamma_percent")) r.gamma_percent = j["gamma_percent"].get<double>();
    if (j.contains("trajectory")) {
      EmTrajectory t;
      for (const auto& s : j["trajectory"]) {
        t.steps.push_back({s.at("p").get<int>(), s.at("alpha").get<double>(),
                           s.at("beta").get<double>(), s.at("loglik").get<double>()});
      }
      if (!t.steps.empty()) r.log_likelihood = t.steps.back().loglik;
      r.trajectory = std::move(t);
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::io, std::string("malformed estimate report: ") + e.what());
  }
}

}  // namespace chanem
