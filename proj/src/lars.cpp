#include "larscp/lars.hpp"

#include "larscp/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace larscp {

namespace {

constexpr double kTieTolerance = 1e-10;

double sign_of(double v) { return v < 0.0 ? -1.0 : 1.0; }

bool contains(const std::vector<Index>& v, Index j) {
    return std::find(v.begin(), v.end(), j) != v.end();
}

// Admitting j is refused when the Gram matrix of the enlarged active set is
// singular within the rank tolerance.
bool gram_nonsingular(const Matrix& xs, const std::vector<Index>& active, Index j) {
    Matrix cols(xs.rows(), static_cast<Index>(active.size()) + 1);
    for (std::size_t k = 0; k < active.size(); ++k) cols.col(static_cast<Index>(k)) = xs.col(active[k]);
    cols.col(cols.cols() - 1) = xs.col(j);
    const Matrix gram = cols.transpose() * cols;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(gram, Eigen::EigenvaluesOnly);
    const Vector& ev = eig.eigenvalues();
    return ev(0) > kRankTolerance * ev(ev.size() - 1);
}

Index most_collinear(const Matrix& xs, const std::vector<Index>& active, Index j) {
    Index best = active.empty() ? j : active.front();
    double best_corr = -1.0;
    for (Index k : active) {
        const double corr = std::abs(xs.col(k).dot(xs.col(j)));
        if (corr > best_corr) {
            best_corr = corr;
            best = k;
        }
    }
    return best;
}

struct Direction {
    Vector signs;
    Vector weights;  // w = A_A G^-1 1
    Vector u;        // equiangular unit vector
    double equiangular_norm = 0.0;  // A_A
};

Direction equiangular(const Matrix& xs, const std::vector<Index>& active, const Vector& corr) {
    const auto k = static_cast<Index>(active.size());
    Direction d;
    d.signs.resize(k);
    Matrix signed_cols(xs.rows(), k);
    for (Index i = 0; i < k; ++i) {
        d.signs(i) = sign_of(corr(active[i]));
        signed_cols.col(i) = d.signs(i) * xs.col(active[i]);
    }
    const Matrix gram = signed_cols.transpose() * signed_cols;
    const Vector g_inv_one = gram.ldlt().solve(Vector::Ones(k));
    d.equiangular_norm = 1.0 / std::sqrt(g_inv_one.sum());
    d.weights = d.equiangular_norm * g_inv_one;
    d.u = signed_cols * d.weights;
    return d;
}

}  // namespace

std::string_view to_string(LarsMode mode) noexcept {
    return mode == LarsMode::plain ? "plain" : "lasso";
}

LarsMode parse_lars_mode(std::string_view text) {
    if (text == "plain") return LarsMode::plain;
    if (text == "lasso") return LarsMode::lasso;
    throw Error(ErrorKind::invalid_argument, "unknown LARS mode '" + std::string(text) + "'");
}

LarsPath lars_path(const Dataset& dataset, LarsMode mode, std::optional<Index> max_steps) {
    dataset.validate();
    const Index n = dataset.rows();
    const Index m = dataset.cols();
    if (n < 3) throw Error(ErrorKind::invalid_argument, "lars_path: need at least 3 rows");
    if (m < 1) throw Error(ErrorKind::invalid_argument, "lars_path: no predictors");
    const double y_mean = dataset.y.mean();
    if ((dataset.y.array() - y_mean).abs().maxCoeff() <=
        1e-12 * std::max(1.0, dataset.y.cwiseAbs().maxCoeff())) {
        throw Error(ErrorKind::invalid_argument, "lars_path: response is constant");
    }

    LarsPath path;
    path.mode = mode;
    path.predictor_names = dataset.predictor_names;
    path.standardization = standardize(dataset, ScalingRule::unit_norm);
    path.full_model = full_model_info(dataset, RankPolicy::allow_deficient);
    const Matrix xs = path.standardization.apply(dataset.X);
    const bool cp_defined = !std::isnan(path.full_model.sigma_hat_sq) && !sigma_is_zero(path.full_model);

    const Index base_cap = std::min(m, n - 2);
    const Index cap = max_steps.value_or(mode == LarsMode::plain ? base_cap : 8 * base_cap);
    if (cap < 0) throw Error(ErrorKind::invalid_argument, "lars_path: negative max_steps");

    Vector beta = Vector::Zero(m);
    Vector mu = Vector::Constant(n, y_mean);
    std::vector<Index> active;
    std::vector<bool> ignored(static_cast<std::size_t>(m), false);
    Index just_dropped = -1;  // dropped on the previous move, or -1
    std::optional<Index> pending;

    auto record = [&](Index index, double gamma, std::optional<Index> entered,
                      std::optional<Index> dropped) {
        LarsStep step;
        step.step_index = index;
        if (entered) step.entered = dataset.predictor_names[*entered];
        if (dropped) step.dropped = dataset.predictor_names[*dropped];
        step.active_indices = active;
        for (Index j : active) step.active_set.push_back(dataset.predictor_names[j]);
        step.coefficients_std = beta;
        step.coefficients_orig = beta.cwiseQuotient(path.standardization.column_scales);
        step.intercept_orig = y_mean - step.coefficients_orig.dot(path.standardization.column_means);
        step.mu_hat = mu;
        const Vector corr = xs.transpose() * (dataset.y - mu);
        double c_max = 0.0;
        for (Index j = 0; j < m; ++j) {
            if (!ignored[static_cast<std::size_t>(j)]) c_max = std::max(c_max, std::abs(corr(j)));
        }
        step.max_abs_corr = c_max;
        step.step_length = gamma;
        Matrix active_cols(n, static_cast<Index>(active.size()));
        for (std::size_t k = 0; k < active.size(); ++k) {
            active_cols.col(static_cast<Index>(k)) = dataset.X.col(active[k]);
        }
        step.subset_leverage = project_column_space(with_intercept(active_cols)).diagonals;
        step.df_surrogate = step.subset_leverage.sum();
        step.cp = cp_defined ? cp_total(mu, step.df_surrogate, path.full_model)
                             : std::numeric_limits<double>::quiet_NaN();
        path.steps.push_back(std::move(step));
    };

    record(0, 0.0, std::nullopt, std::nullopt);

    {
        const Vector corr = xs.transpose() * dataset.y;
        Index first = 0;
        corr.cwiseAbs().maxCoeff(&first);
        pending = first;
    }

    for (Index step_index = 1; step_index <= cap; ++step_index) {
        const Vector corr = xs.transpose() * (dataset.y - mu);
        std::optional<Index> entered;
        if (pending) {
            active.push_back(*pending);
            path.entry_order.push_back(dataset.predictor_names[*pending]);
            entered = pending;
            pending.reset();
        }
        if (active.empty()) break;

        double c_big = 0.0;
        for (Index j : active) c_big = std::max(c_big, std::abs(corr(j)));
        const Direction dir = equiangular(xs, active, corr);
        const Vector a = xs.transpose() * dir.u;
        const double aa = dir.equiangular_norm;

        // Next joiner: smallest positive step at which an inactive predictor
        // ties the active correlation. Lowest column index wins exact ties.
        double gamma = c_big / aa;
        std::optional<Index> joiner;
        for (;;) {
            gamma = c_big / aa;
            joiner.reset();
            for (Index j = 0; j < m; ++j) {
                if (ignored[static_cast<std::size_t>(j)] || contains(active, j)) continue;
                // A predictor dropped on the previous move still ties C at
                // gamma = 0; only its opposite-sign root can readmit it.
                const bool dropped_last = just_dropped == j;
                const double floor = dropped_last ? kTieTolerance * c_big / aa : 0.0;
                double candidate = std::numeric_limits<double>::infinity();
                if (!dropped_last && std::abs(corr(j)) >= c_big - kTieTolerance * c_big) {
                    candidate = 0.0;
                } else {
                    for (double g : {(c_big - corr(j)) / (aa - a(j)),
                                     (c_big + corr(j)) / (aa + a(j))}) {
                        if (g > floor && std::isfinite(g)) candidate = std::min(candidate, g);
                    }
                }
                if (candidate < gamma) {
                    gamma = candidate;
                    joiner = j;
                }
            }
            if (!joiner || gram_nonsingular(xs, active, *joiner)) break;
            const Index partner = most_collinear(xs, active, *joiner);
            path.warnings.push_back("skipped '" + dataset.predictor_names[*joiner] +
                                    "': admitting it makes the active Gram matrix singular "
                                    "within 1e-10 (collinear with '" +
                                    dataset.predictor_names[partner] + "')");
            ignored[static_cast<std::size_t>(*joiner)] = true;
        }

        std::optional<Index> drop_pos;
        if (mode == LarsMode::lasso) {
            for (std::size_t k = 0; k < active.size(); ++k) {
                const double slope = dir.signs(static_cast<Index>(k)) * dir.weights(static_cast<Index>(k));
                if (slope == 0.0) continue;
                const double cross = -beta(active[k]) / slope;
                if (cross > 0.0 && cross < gamma) {
                    gamma = cross;
                    drop_pos = k;
                }
            }
        }

        for (std::size_t k = 0; k < active.size(); ++k) {
            beta(active[k]) += gamma * dir.signs(static_cast<Index>(k)) * dir.weights(static_cast<Index>(k));
        }

        std::optional<Index> dropped;
        just_dropped = -1;
        if (drop_pos) {
            dropped = active[*drop_pos];
            beta(*dropped) = 0.0;
            active.erase(active.begin() + static_cast<std::ptrdiff_t>(*drop_pos));
            just_dropped = *dropped;
        } else {
            pending = joiner;
        }
        mu = Vector::Constant(n, y_mean) + xs * beta;
        record(step_index, gamma, entered, dropped);

        if (!dropped && !joiner) break;
    }
    return path;
}

SelectionResult select_by_cp(const LarsPath& path) {
    if (path.steps.empty()) throw Error(ErrorKind::invalid_argument, "select_by_cp: empty path");
    std::size_t best = 0;
    for (std::size_t s = 0; s < path.steps.size(); ++s) {
        const LarsStep& step = path.steps[s];
        if (!std::isfinite(step.cp)) {
            throw Error(ErrorKind::invalid_argument,
                        "select_by_cp: Cp undefined (full model needs n - m - 1 >= 1 and "
                        "positive residual variance)");
        }
        const LarsStep& incumbent = path.steps[best];
        if (step.cp < incumbent.cp ||
            (step.cp == incumbent.cp && step.active_set.size() < incumbent.active_set.size())) {
            best = s;
        }
    }
    const LarsStep& chosen = path.steps[best];
    SelectionResult out;
    out.selected = chosen.active_set;
    out.selected_indices = chosen.active_indices;
    out.coefficients.resize(static_cast<Index>(chosen.active_indices.size()));
    for (std::size_t k = 0; k < chosen.active_indices.size(); ++k) {
        out.coefficients(static_cast<Index>(k)) = chosen.coefficients_orig(chosen.active_indices[k]);
    }
    out.intercept = chosen.intercept_orig;
    out.criterion_value = chosen.cp;
    out.chosen_step = chosen.step_index;
    return out;
}

OriginalScaleFit unstandardize(const LarsStep& step, const StandardizedView& view) {
    if (step.coefficients_std.size() != view.column_scales.size()) {
        throw Error(ErrorKind::dimension_mismatch, "unstandardize: step and view disagree on m");
    }
    OriginalScaleFit out;
    out.coefficients = step.coefficients_std.cwiseQuotient(view.column_scales);
    out.intercept = view.response_mean - out.coefficients.dot(view.column_means);
    return out;
}

}  // namespace larscp
