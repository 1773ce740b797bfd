#pragma once

#include <nlohmann/json.hpp>

#include "chanem/em.hpp"

namespace chanem {

/// {alpha_hat, beta_hat, start_alpha, start_beta, iterations, se_db,
///  gamma_percent?, trajectory?}; trajectory entries are {p, alpha, beta, loglik}.
nlohmann::json to_json(const EstimateReport& report, bool with_trajectory = true);
EstimateReport report_from_json(const nlohmann::json& j);

}  // namespace chanem
