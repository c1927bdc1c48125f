#pragma once

#include "larscp/dataset.hpp"
#include "larscp/numerics.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace larscp {

struct LarsStep;
enum class LarsMode;

// Projection-side quantities of the full model (intercept plus all m predictors).
struct FullModelInfo {
    Vector response;
    Vector y_hat;          // P Y
    Vector hat_diagonals;  // h_i
    double sigma_hat_sq = 0.0;
    Index m = 0;
    Index n = 0;
    Index rank = 0;  // rank of (1, X); m + 1 unless built with allow_deficient
};

enum class RankPolicy { require_full, allow_deficient };

// sigma_hat_sq = ||Y - y_hat||^2 / (n - rank). With allow_deficient the
// projection is onto whatever column space (1, X) spans.
FullModelInfo full_model_info(const Dataset& dataset,
                              RankPolicy policy = RankPolicy::require_full);

// True when sigma_hat_sq is not positive or is below 1e-20 times the
// response variance (Y in the column space up to rounding).
bool sigma_is_zero(const FullModelInfo& info);

// ||Y - mu_hat||^2 / sigma^2 - n + 2 df
double cp_total(const Vector& mu_hat, double df_surrogate, const FullModelInfo& info);

struct CaseCpRecord {
    Index case_index = 0;
    double fit_term = 0.0;          // (y_hat_i - mu_hat_i)^2 / sigma^2
    double cov_term = 0.0;          // u_i
    double leverage_deficit = 0.0;  // h_i - u_i
    double c_pi = 0.0;              // fit_term + cov_term - leverage_deficit
};

std::vector<CaseCpRecord> case_cp(const LarsStep& step, const FullModelInfo& info);

enum class NoiseGenerator { fixed_beta, fitted_beta };

std::string_view to_string(NoiseGenerator generator) noexcept;

struct CovSimulationConfig {
    NoiseGenerator generator = NoiseGenerator::fitted_beta;
    Vector beta;             // slopes, fixed_beta only
    double intercept = 0.0;  // fixed_beta only
    double noise_sd = 1.0;
    Index step_count = 1;
    Index replicates = 1000;
    std::uint64_t seed = 20040201;
};

struct CovSimulation {
    Vector estimates;        // cov(mu_i*, y_i*) / sigma^2 per case
    Vector standard_errors;  // Monte Carlo standard errors of the estimates
    Vector mean_response;    // X beta + intercept used to draw Y*
    Index used = 0;
    Index excluded = 0;
    std::string rng_algorithm;
    std::uint64_t seed = 0;
};

// Holds X fixed and redraws Y* = mean + noise_sd * eps; replicate r uses the
// stream seeded with seed + r, so results do not depend on scheduling.
// Replicates whose path is shorter than step_count are excluded; more than
// 5% exclusions is an error.
CovSimulation simulate_cov(const Dataset& dataset, const CovSimulationConfig& config);

}  // namespace larscp
