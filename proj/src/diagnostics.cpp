#include "larscp/diagnostics.hpp"

#include "larscp/error.hpp"
#include "larscp/lars.hpp"
#include "larscp/random.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace larscp {

std::string_view to_string(NoiseGenerator generator) noexcept {
    return generator == NoiseGenerator::fixed_beta ? "fixed-beta" : "fitted-beta";
}

FullModelInfo full_model_info(const Dataset& dataset, RankPolicy policy) {
    dataset.validate();
    const Index n = dataset.rows();
    const Index m = dataset.cols();
    if (policy == RankPolicy::require_full && n - m - 1 < 1) {
        throw Error(ErrorKind::invalid_argument,
                    "full_model_info: n - m - 1 = " + std::to_string(n - m - 1) +
                        "; need at least one residual degree of freedom");
    }
    const Matrix design = with_intercept(dataset.X);
    const ColumnSpaceProjection proj = project_column_space(design);
    if (policy == RankPolicy::require_full && proj.rank < m + 1) {
        throw Error(ErrorKind::rank_deficient,
                    "full_model_info: (1, X) has rank " + std::to_string(proj.rank) +
                        ", expected " + std::to_string(m + 1));
    }
    const LeastSquaresFit fit = least_squares(design, dataset.y);

    FullModelInfo info;
    info.response = dataset.y;
    info.y_hat = fit.fitted;
    info.hat_diagonals = proj.diagonals;
    info.m = m;
    info.n = n;
    info.rank = proj.rank;
    const Index dof = n - proj.rank;
    info.sigma_hat_sq = dof >= 1 ? fit.residuals.squaredNorm() / static_cast<double>(dof)
                                 : std::numeric_limits<double>::quiet_NaN();
    return info;
}

bool sigma_is_zero(const FullModelInfo& info) {
    if (!(info.sigma_hat_sq > 0.0)) return true;
    const double spread = (info.response.array() - info.response.mean()).square().mean();
    return info.sigma_hat_sq <= kRankTolerance * kRankTolerance * spread;
}

double cp_total(const Vector& mu_hat, double df_surrogate, const FullModelInfo& info) {
    if (mu_hat.size() != info.response.size()) {
        throw Error(ErrorKind::dimension_mismatch, "cp_total: mu_hat length differs from n");
    }
    if (sigma_is_zero(info)) {
        throw Error(ErrorKind::singular, "cp_total: sigma_hat_sq is zero");
    }
    const double rss = (info.response - mu_hat).squaredNorm();
    return rss / info.sigma_hat_sq - static_cast<double>(info.n) + 2.0 * df_surrogate;
}

std::vector<CaseCpRecord> case_cp(const LarsStep& step, const FullModelInfo& info) {
    const Index n = info.n;
    if (step.mu_hat.size() != n || step.subset_leverage.size() != n ||
        info.y_hat.size() != n || info.hat_diagonals.size() != n) {
        throw Error(ErrorKind::dimension_mismatch, "case_cp: step and full model lengths differ");
    }
    if (sigma_is_zero(info)) {
        throw Error(ErrorKind::singular, "case_cp: sigma_hat_sq is zero");
    }
    std::vector<CaseCpRecord> records(static_cast<std::size_t>(n));
    for (Index i = 0; i < n; ++i) {
        CaseCpRecord& r = records[static_cast<std::size_t>(i)];
        const double gap = info.y_hat(i) - step.mu_hat(i);
        r.case_index = i;
        r.fit_term = gap * gap / info.sigma_hat_sq;
        r.cov_term = step.subset_leverage(i);
        r.leverage_deficit = info.hat_diagonals(i) - step.subset_leverage(i);
        r.c_pi = r.fit_term + r.cov_term - r.leverage_deficit;
    }
    return records;
}

CovSimulation simulate_cov(const Dataset& dataset, const CovSimulationConfig& config) {
    dataset.validate();
    if (config.replicates < 100) {
        throw Error(ErrorKind::invalid_argument, "simulate_cov: replicates must be at least 100");
    }
    if (!(config.noise_sd > 0.0) || !std::isfinite(config.noise_sd)) {
        throw Error(ErrorKind::invalid_argument, "simulate_cov: noise_sd must be positive");
    }
    if (config.step_count < 0) {
        throw Error(ErrorKind::invalid_argument, "simulate_cov: negative step_count");
    }
    const Index n = dataset.rows();

    CovSimulation out;
    out.rng_algorithm = std::string(RandomStream::algorithm);
    out.seed = config.seed;
    if (config.generator == NoiseGenerator::fitted_beta) {
        out.mean_response = least_squares(with_intercept(dataset.X), dataset.y).fitted;
    } else {
        if (config.beta.size() != dataset.cols()) {
            throw Error(ErrorKind::dimension_mismatch,
                        "simulate_cov: fixed beta has " + std::to_string(config.beta.size()) +
                            " entries for " + std::to_string(dataset.cols()) + " predictors");
        }
        require_finite(config.beta, "simulate_cov beta");
        out.mean_response = (dataset.X * config.beta).array() + config.intercept;
    }

    Matrix fits(config.replicates, n);
    Matrix draws(config.replicates, n);
    Dataset replicate = dataset;
    Index used = 0;
    for (Index r = 0; r < config.replicates; ++r) {
        RandomStream stream(config.seed + static_cast<std::uint64_t>(r));
        for (Index i = 0; i < n; ++i) {
            replicate.y(i) = out.mean_response(i) + config.noise_sd * stream.normal();
        }
        const LarsPath path = lars_path(replicate, LarsMode::plain, config.step_count);
        if (static_cast<Index>(path.steps.size()) <= config.step_count) {
            ++out.excluded;
            continue;
        }
        fits.row(used) = path.steps[static_cast<std::size_t>(config.step_count)].mu_hat.transpose();
        draws.row(used) = replicate.y.transpose();
        ++used;
    }
    if (out.excluded * 20 > config.replicates) {
        throw Error(ErrorKind::no_solution,
                    "simulate_cov: " + std::to_string(out.excluded) + " of " +
                        std::to_string(config.replicates) + " replicates ended before step " +
                        std::to_string(config.step_count) + " (more than 5%)");
    }
    out.used = used;

    const auto uses = static_cast<double>(used);
    const double sigma_sq = config.noise_sd * config.noise_sd;
    out.estimates.resize(n);
    out.standard_errors.resize(n);
    for (Index i = 0; i < n; ++i) {
        const Vector f = fits.col(i).head(used);
        const Vector d = draws.col(i).head(used);
        const Vector products =
            (f.array() - f.mean()).cwiseProduct(d.array() - d.mean()).matrix();
        const double cov = products.sum() / (uses - 1.0);
        const double spread = std::sqrt((products.array() - products.mean()).square().sum() /
                                        (uses - 1.0));
        out.estimates(i) = cov / sigma_sq;
        out.standard_errors(i) = spread / std::sqrt(uses) / sigma_sq;
    }
    return out;
}

}  // namespace larscp
