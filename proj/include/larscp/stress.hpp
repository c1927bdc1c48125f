#pragma once

#include "larscp/dataset.hpp"
#include "larscp/lars.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace larscp {

struct TermComposition {
    Index main = 0;
    Index interaction = 0;
    Index quadratic = 0;
};

struct LabeledSelection {
    std::string label;
    SelectionResult selection;
    std::vector<std::string> entry_order;
    std::vector<std::string> warnings;
    std::optional<TermComposition> composition;
};

struct SelectionOverlap {
    std::string first;
    std::string second;
    Index intersection = 0;
    double jaccard = 1.0;
};

struct StressReport {
    LabeledSelection baseline;
    std::vector<LabeledSelection> perturbed;
    std::vector<SelectionOverlap> overlap;
    std::vector<std::string> flags;
    std::map<std::string, std::string> config_echo;
};

// |A & B| and |A & B| / |A | B| over selected names; two empty sets give 1.
SelectionOverlap compare_selections(const LabeledSelection& a, const LabeledSelection& b);

// Appends prefix + name = round(factor * value), half away from zero, for
// every predictor not in `exclude`. Original columns are copied untouched.
Dataset round_augment(const Dataset& dataset, double factor,
                      const std::vector<std::string>& exclude, const std::string& prefix = "r");

StressReport run_round_stress(const Dataset& dataset, double factor,
                              const std::vector<std::string>& exclude,
                              const std::string& prefix = "r",
                              LarsMode mode = LarsMode::plain);

// Pipelines to Cp selection over quadratics plus interactions:
//   A: standardize (unit-sd), expand
//   B: expand raw, standardize (unit-sd)
//   C: expand raw, orthogonalize non-main terms, standardize (unit-sd)
StressReport scale_order_audit(const Dataset& dataset,
                               const std::vector<std::string>& quadratic_exclusions,
                               LarsMode mode = LarsMode::plain);

struct StabilityReport {
    std::string first;
    std::string second;
    double target_corr = 0.0;
    double observed_corr = 0.0;
    double theta = 0.0;
    double tilted_corr = 0.0;  // weighted correlation at theta
    double effective_sample_size = 0.0;  // Kish, (sum w)^2 / sum w^2
    double reachable_low = 0.0;
    double reachable_high = 0.0;
    std::vector<double> achieved_correlations;  // per replicate resample
    std::map<std::string, double> selection_frequency;
    std::map<std::string, double> frequency_standard_error;
    std::vector<std::vector<std::string>> replicate_selections;
    SelectionResult baseline_selection;
    Index replicates = 0;
    std::uint64_t seed = 0;
    std::string rng_algorithm;
};

// Weights w_i proportional to exp(theta * z_j,i * z_k,i) on the standardized pair.
Vector tilt_weights(const Dataset& dataset, Index first, Index second, double theta);
double weighted_correlation(const Vector& a, const Vector& b, const Vector& weights);

// theta in [-20, 20] such that the tilted correlation equals target. The first
// crossing on the side that moves the correlation toward the target wins.
double solve_tilt(const Dataset& dataset, Index first, Index second, double target);

// Draws n row indices with replacement with probabilities proportional to weights.
std::vector<Index> weighted_bootstrap(const Vector& weights, std::uint64_t seed);

StabilityReport marginal_shift_stress(const Dataset& dataset, const std::string& first,
                                      const std::string& second, double target_corr,
                                      Index replicates, std::uint64_t seed,
                                      LarsMode mode = LarsMode::plain);

}  // namespace larscp
