#include "larscp/stress.hpp"

#include "larscp/error.hpp"
#include "larscp/random.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

namespace larscp {

namespace {

std::string format_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join(const std::vector<std::string>& items, const char* sep = ",") {
    std::string out;
    for (std::size_t k = 0; k < items.size(); ++k) {
        if (k) out += sep;
        out += items[k];
    }
    return out;
}

LabeledSelection fit_and_select(const std::string& label, const Dataset& data, LarsMode mode,
                                const TermExpansion* expansion = nullptr) {
    const LarsPath path = lars_path(data, mode);
    LabeledSelection out;
    out.label = label;
    out.selection = select_by_cp(path);
    out.entry_order = path.entry_order;
    out.warnings = path.warnings;
    if (expansion != nullptr) {
        TermComposition c;
        for (Index j : out.selection.selected_indices) {
            switch (expansion->term_kinds[static_cast<std::size_t>(j)]) {
                case TermKind::main: ++c.main; break;
                case TermKind::interaction: ++c.interaction; break;
                case TermKind::quadratic: ++c.quadratic; break;
            }
        }
        out.composition = c;
    }
    return out;
}

void check_exclusions(const Dataset& dataset, const std::vector<std::string>& names,
                      const char* who) {
    for (const auto& name : names) {
        if (!dataset.has_column(name)) {
            throw Error(ErrorKind::invalid_argument,
                        std::string(who) + ": unknown excluded predictor '" + name + "'");
        }
    }
}

double pearson(const Vector& a, const Vector& b) {
    return weighted_correlation(a, b, Vector::Ones(a.size()));
}

}  // namespace

SelectionOverlap compare_selections(const LabeledSelection& a, const LabeledSelection& b) {
    const std::set<std::string> sa(a.selection.selected.begin(), a.selection.selected.end());
    const std::set<std::string> sb(b.selection.selected.begin(), b.selection.selected.end());
    std::vector<std::string> both;
    std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(both));
    const auto inter = static_cast<Index>(both.size());
    const auto uni = static_cast<Index>(sa.size() + sb.size()) - inter;
    SelectionOverlap out;
    out.first = a.label;
    out.second = b.label;
    out.intersection = inter;
    out.jaccard = uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
    return out;
}

Dataset round_augment(const Dataset& dataset, double factor,
                      const std::vector<std::string>& exclude, const std::string& prefix) {
    dataset.validate();
    if (!(factor > 0.0) || !std::isfinite(factor)) {
        throw Error(ErrorKind::invalid_argument, "round_augment: factor must be finite and > 0");
    }
    check_exclusions(dataset, exclude, "round_augment");

    std::vector<Index> sources;
    for (Index j = 0; j < dataset.cols(); ++j) {
        const auto& name = dataset.predictor_names[static_cast<std::size_t>(j)];
        if (std::find(exclude.begin(), exclude.end(), name) != exclude.end()) continue;
        if (dataset.has_column(prefix + name)) {
            throw Error(ErrorKind::invalid_argument,
                        "round_augment: name '" + prefix + name + "' already exists");
        }
        sources.push_back(j);
    }

    Dataset out = dataset;
    const Index m = dataset.cols();
    out.X.conservativeResize(Eigen::NoChange, m + static_cast<Index>(sources.size()));
    for (std::size_t k = 0; k < sources.size(); ++k) {
        const Index j = sources[k];
        out.X.col(m + static_cast<Index>(k)) =
            dataset.X.col(j).unaryExpr([factor](double v) { return std::round(factor * v); });
        out.predictor_names.push_back(prefix + dataset.predictor_names[static_cast<std::size_t>(j)]);
    }
    out.validate();
    return out;
}

StressReport run_round_stress(const Dataset& dataset, double factor,
                              const std::vector<std::string>& exclude, const std::string& prefix,
                              LarsMode mode) {
    const Dataset augmented = round_augment(dataset, factor, exclude, prefix);

    StressReport report;
    report.config_echo = {{"experiment", "round"},
                          {"factor", format_real(factor)},
                          {"exclude", join(exclude)},
                          {"prefix", prefix},
                          {"mode", std::string(to_string(mode))},
                          {"rounding", "half-away-from-zero, applied to raw predictor values"},
                          {"augmented_predictors", std::to_string(augmented.cols())}};
    report.baseline = fit_and_select("baseline", dataset, mode);
    report.perturbed.push_back(fit_and_select("augmented", augmented, mode));
    const LabeledSelection& aug = report.perturbed.front();
    report.overlap.push_back(compare_selections(report.baseline, aug));

    const std::set<std::string> chosen(aug.selection.selected.begin(), aug.selection.selected.end());
    for (const auto& name : aug.selection.selected) {
        const Index j = augmented.column_index(name);
        if (j < dataset.cols()) continue;
        report.flags.push_back("rounded variable selected: " + name);
        const std::string original = name.substr(prefix.size());
        if (chosen.count(original) != 0) {
            report.flags.push_back("original and rounded version co-selected: " + original + "," +
                                   name);
        }
    }
    for (const auto& w : aug.warnings) report.flags.push_back("collinearity: " + w);
    return report;
}

StressReport scale_order_audit(const Dataset& dataset,
                               const std::vector<std::string>& quadratic_exclusions,
                               LarsMode mode) {
    dataset.validate();
    check_exclusions(dataset, quadratic_exclusions, "scale_order_audit");

    const Dataset scaled = standardize(dataset, ScalingRule::unit_sd).transform(dataset);
    const ExpandedDataset scale_first = expand_terms(scaled, true, true, quadratic_exclusions);

    const ExpandedDataset raw = expand_terms(dataset, true, true, quadratic_exclusions);
    if (dataset.rows() <= raw.data.cols() + 1) {
        throw Error(ErrorKind::invalid_argument,
                    "scale_order_audit: need n > expanded m + 1 (n = " +
                        std::to_string(dataset.rows()) + ", expanded m = " +
                        std::to_string(raw.data.cols()) + ")");
    }
    const Dataset expand_first = standardize(raw.data, ScalingRule::unit_sd).transform(raw.data);
    const Dataset orthogonal = orthogonalize_expansion(raw.data, raw.expansion);
    const Dataset orthogonal_scaled =
        standardize(orthogonal, ScalingRule::unit_sd).transform(orthogonal);

    StressReport report;
    report.config_echo = {{"experiment", "scale-order"},
                          {"quadratic_exclusions", join(quadratic_exclusions)},
                          {"mode", std::string(to_string(mode))},
                          {"scaling", "unit-sd"},
                          {"expanded_columns", std::to_string(raw.data.cols())},
                          {"pipeline_A", "standardize, expand"},
                          {"pipeline_B", "expand, standardize"},
                          {"pipeline_C", "expand, orthogonalize, standardize"}};
    report.baseline = fit_and_select("A", scale_first.data, mode, &scale_first.expansion);
    report.perturbed.push_back(fit_and_select("B", expand_first, mode, &raw.expansion));
    report.perturbed.push_back(fit_and_select("C", orthogonal_scaled, mode, &raw.expansion));

    const LabeledSelection& a = report.baseline;
    const LabeledSelection& b = report.perturbed[0];
    const LabeledSelection& c = report.perturbed[1];
    const std::pair<const LabeledSelection*, const LabeledSelection*> pairs[] = {
        {&a, &b}, {&a, &c}, {&b, &c}};
    for (const auto& [first, second] : pairs) {
        const SelectionOverlap o = compare_selections(*first, *second);
        if (o.jaccard < 1.0) {
            report.flags.push_back("pipelines " + first->label + " and " + second->label +
                                   " select different sets");
        }
        report.overlap.push_back(o);
    }
    for (const LabeledSelection* s : {&a, &b, &c}) {
        for (const auto& w : s->warnings) report.flags.push_back("collinearity (" + s->label + "): " + w);
    }
    return report;
}

double weighted_correlation(const Vector& a, const Vector& b, const Vector& weights) {
    const double total = weights.sum();
    const double ma = a.dot(weights) / total;
    const double mb = b.dot(weights) / total;
    const Vector da = a.array() - ma;
    const Vector db = b.array() - mb;
    const double cov = (da.array() * db.array() * weights.array()).sum();
    const double va = (da.array().square() * weights.array()).sum();
    const double vb = (db.array().square() * weights.array()).sum();
    return cov / std::sqrt(va * vb);
}

Vector tilt_weights(const Dataset& dataset, Index first, Index second, double theta) {
    const StandardizedView view = standardize(dataset, ScalingRule::unit_sd);
    const Vector zj = (dataset.X.col(first).array() - view.column_means(first)) / view.column_scales(first);
    const Vector zk = (dataset.X.col(second).array() - view.column_means(second)) / view.column_scales(second);
    const Vector exponent = theta * zj.cwiseProduct(zk);
    return (exponent.array() - exponent.maxCoeff()).exp();
}

double solve_tilt(const Dataset& dataset, Index first, Index second, double target) {
    const Vector a = dataset.X.col(first);
    const Vector b = dataset.X.col(second);
    auto gap = [&](double theta) {
        return weighted_correlation(a, b, tilt_weights(dataset, first, second, theta)) - target;
    };
    if (std::abs(gap(0.0)) <= 1e-12) return 0.0;

    // Scan outward from zero, first along the direction in which the tilt
    // moves the correlation toward the target. Crossings on the far side tend
    // to sit where a handful of rows carry all the weight.
    constexpr double kLimit = 20.0;
    constexpr int kGrid = 80;
    const double origin = gap(0.0);
    const double probe = 1e-3;
    const double toward = std::abs(gap(probe)) <= std::abs(gap(-probe)) ? 1.0 : -1.0;
    std::optional<std::pair<double, double>> bracket;
    for (double dirn : {toward, -toward}) {
        double inner = 0.0;
        double g_inner = origin;
        for (int k = 1; k <= kGrid / 2 && !bracket; ++k) {
            const double outer = dirn * kLimit * k / (kGrid / 2);
            const double g_outer = gap(outer);
            if ((g_inner <= 0.0) != (g_outer <= 0.0)) {
                bracket = std::pair{std::min(inner, outer), std::max(inner, outer)};
            }
            inner = outer;
            g_inner = g_outer;
        }
        if (bracket) break;
    }
    if (!bracket) {
        double low = origin + target;
        double high = low;
        for (int k = -kGrid / 2; k <= kGrid / 2; ++k) {
            const double r = gap(kLimit * k / (kGrid / 2)) + target;
            low = std::min(low, r);
            high = std::max(high, r);
        }
        throw Error(ErrorKind::no_solution,
                    "marginal shift: target correlation " + format_real(target) +
                        " is unreachable by tilting with theta in [-20, 20]; reachable range [" +
                        format_real(low) + ", " + format_real(high) + "]");
    }
    std::uintmax_t iterations = 200;
    const auto root = boost::math::tools::toms748_solve(
        gap, bracket->first, bracket->second, boost::math::tools::eps_tolerance<double>(52),
        iterations);
    return 0.5 * (root.first + root.second);
}

std::vector<Index> weighted_bootstrap(const Vector& weights, std::uint64_t seed) {
    const Index n = weights.size();
    std::vector<double> cumulative(static_cast<std::size_t>(n));
    double running = 0.0;
    for (Index i = 0; i < n; ++i) {
        running += weights(i);
        cumulative[static_cast<std::size_t>(i)] = running;
    }
    RandomStream stream(seed);
    std::vector<Index> rows(static_cast<std::size_t>(n));
    for (auto& row : rows) {
        const double u = stream.uniform() * running;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        row = std::min<Index>(static_cast<Index>(it - cumulative.begin()), n - 1);
    }
    return rows;
}

StabilityReport marginal_shift_stress(const Dataset& dataset, const std::string& first,
                                      const std::string& second, double target_corr,
                                      Index replicates, std::uint64_t seed, LarsMode mode) {
    dataset.validate();
    const Index j = dataset.column_index(first);
    const Index k = dataset.column_index(second);
    if (j == k) throw Error(ErrorKind::invalid_argument, "marginal shift: pair must be distinct");
    if (replicates < 1) throw Error(ErrorKind::invalid_argument, "marginal shift: replicates < 1");
    if (!(target_corr > -1.0 && target_corr < 1.0)) {
        throw Error(ErrorKind::invalid_argument, "marginal shift: target_corr must lie in (-1, 1)");
    }

    StabilityReport report;
    report.first = first;
    report.second = second;
    report.target_corr = target_corr;
    report.replicates = replicates;
    report.seed = seed;
    report.rng_algorithm = std::string(RandomStream::algorithm);
    report.observed_corr = pearson(dataset.X.col(j), dataset.X.col(k));
    report.reachable_low = weighted_correlation(dataset.X.col(j), dataset.X.col(k),
                                                tilt_weights(dataset, j, k, -20.0));
    report.reachable_high = weighted_correlation(dataset.X.col(j), dataset.X.col(k),
                                                 tilt_weights(dataset, j, k, 20.0));
    report.theta = solve_tilt(dataset, j, k, target_corr);
    const Vector weights = tilt_weights(dataset, j, k, report.theta);
    report.tilted_corr = weighted_correlation(dataset.X.col(j), dataset.X.col(k), weights);
    report.effective_sample_size = weights.sum() * weights.sum() / weights.squaredNorm();
    report.baseline_selection = select_by_cp(lars_path(dataset, mode));

    std::map<std::string, Index> counts;
    for (const auto& name : dataset.predictor_names) counts[name] = 0;
    Dataset resample = dataset;
    for (Index r = 0; r < replicates; ++r) {
        const std::vector<Index> rows = weighted_bootstrap(weights, seed + static_cast<std::uint64_t>(r));
        for (std::size_t i = 0; i < rows.size(); ++i) {
            resample.X.row(static_cast<Index>(i)) = dataset.X.row(rows[i]);
            resample.y(static_cast<Index>(i)) = dataset.y(rows[i]);
        }
        report.achieved_correlations.push_back(pearson(resample.X.col(j), resample.X.col(k)));
        const LarsPath path = lars_path(resample, mode);
        if (std::isnan(path.steps.front().cp)) {
            throw Error(ErrorKind::no_solution,
                        "marginal shift: replicate " + std::to_string(r) +
                            " has no residual variance for Cp; the tilt at theta " +
                            format_real(report.theta) + " leaves an effective sample of " +
                            format_real(report.effective_sample_size) + " rows");
        }
        const SelectionResult sel = select_by_cp(path);
        for (const auto& name : sel.selected) ++counts[name];
        report.replicate_selections.push_back(sel.selected);
    }
    const auto reps = static_cast<double>(replicates);
    for (const auto& [name, count] : counts) {
        const double f = static_cast<double>(count) / reps;
        report.selection_frequency[name] = f;
        report.frequency_standard_error[name] = std::sqrt(f * (1.0 - f) / reps);
    }
    return report;
}

}  // namespace larscp
