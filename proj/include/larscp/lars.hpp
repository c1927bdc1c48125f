#pragma once

#include "larscp/dataset.hpp"
#include "larscp/diagnostics.hpp"
#include "larscp/numerics.hpp"

#include <optional>
#include <string>
#include <vector>

namespace larscp {

enum class LarsMode { plain, lasso };

std::string_view to_string(LarsMode mode) noexcept;
LarsMode parse_lars_mode(std::string_view text);

// One point on the path: the state after `step_index` moves.
struct LarsStep {
    Index step_index = 0;
    std::optional<std::string> entered;  // joined at the start of this move
    std::optional<std::string> dropped;  // left at the end of this move (lasso)
    std::vector<std::string> active_set; // entry order
    std::vector<Index> active_indices;   // column indices matching active_set
    Vector coefficients_std;             // per predictor, unit-norm scale
    Vector coefficients_orig;            // per predictor, original scale
    double intercept_orig = 0.0;
    Vector mu_hat;
    double max_abs_corr = 0.0;  // C after the move
    double step_length = 0.0;   // gamma
    Vector subset_leverage;     // u_i on (1, active columns)
    double cp = 0.0;
    double df_surrogate = 0.0;  // sum of u_i
};

struct LarsPath {
    std::vector<LarsStep> steps;  // steps[0] is the intercept-only fit
    LarsMode mode = LarsMode::plain;
    std::vector<std::string> predictor_names;
    StandardizedView standardization;
    FullModelInfo full_model;
    std::vector<std::string> entry_order;  // names in order of admission
    std::vector<std::string> warnings;     // skipped collinear candidates etc.
};

// Default max_steps: min(m, n - 2) in plain mode, 8 * min(m, n - 2) in lasso mode.
LarsPath lars_path(const Dataset& dataset, LarsMode mode = LarsMode::plain,
                   std::optional<Index> max_steps = std::nullopt);

struct SelectionResult {
    std::vector<std::string> selected;  // entry order
    std::vector<Index> selected_indices;
    Vector coefficients;  // original scale, per selected predictor
    double intercept = 0.0;
    double criterion_value = 0.0;
    Index chosen_step = 0;
};

// argmin of per-step Cp; ties go to the step with fewer active predictors.
SelectionResult select_by_cp(const LarsPath& path);

struct OriginalScaleFit {
    Vector coefficients;
    double intercept = 0.0;
};

OriginalScaleFit unstandardize(const LarsStep& step, const StandardizedView& view);

}  // namespace larscp
