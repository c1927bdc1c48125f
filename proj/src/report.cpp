#include "larscp/report.hpp"

#include "larscp/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace larscp {

namespace {

void dump_into(const json& value, std::string& out, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (value.type()) {
        case json::value_t::object: {
            if (value.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (const auto& [key, item] : value.items()) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                out += json(key).dump();
                out += ": ";
                dump_into(item, out, depth + 1);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case json::value_t::array: {
            if (value.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t k = 0; k < value.size(); ++k) {
                if (k) out += ",\n";
                out += pad;
                dump_into(value[k], out, depth + 1);
            }
            out += "\n" + close_pad + "]";
            return;
        }
        case json::value_t::number_float: {
            const double v = value.get<double>();
            out += std::isfinite(v) ? format_real(v) : "null";
            return;
        }
        default:
            out += value.dump();
            return;
    }
}

json names_json(const std::vector<std::string>& names) { return json(names); }

json optional_name(const std::optional<std::string>& name) {
    return name ? json(*name) : json(nullptr);
}

json labeled_json(const LabeledSelection& s) {
    json out;
    out["label"] = s.label;
    out["selection"] = to_json(s.selection);
    out["entry_order"] = names_json(s.entry_order);
    out["warnings"] = names_json(s.warnings);
    if (s.composition) {
        out["composition"] = {{"main", s.composition->main},
                              {"interaction", s.composition->interaction},
                              {"quadratic", s.composition->quadratic}};
    } else {
        out["composition"] = nullptr;
    }
    return out;
}

}  // namespace

std::string format_real(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

std::string canonical_dump(const json& value) {
    std::string out;
    dump_into(value, out, 0);
    out += "\n";
    return out;
}

json to_json(const Vector& v) {
    json out = json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json to_json(const SelectionResult& selection) {
    json coefficients = json::object();
    for (std::size_t k = 0; k < selection.selected.size(); ++k) {
        coefficients[selection.selected[k]] = selection.coefficients(static_cast<Index>(k));
    }
    return {{"selected", selection.selected},
            {"size", selection.selected.size()},
            {"coefficients", coefficients},
            {"intercept", selection.intercept},
            {"criterion_value", selection.criterion_value},
            {"chosen_step", selection.chosen_step}};
}

json to_json(const LarsPath& path) {
    json steps = json::array();
    for (const LarsStep& step : path.steps) {
        json coefficients_std = json::object();
        json coefficients_orig = json::object();
        for (std::size_t j = 0; j < path.predictor_names.size(); ++j) {
            coefficients_std[path.predictor_names[j]] = step.coefficients_std(static_cast<Index>(j));
            coefficients_orig[path.predictor_names[j]] = step.coefficients_orig(static_cast<Index>(j));
        }
        steps.push_back({{"step_index", step.step_index},
                         {"entered", optional_name(step.entered)},
                         {"dropped", optional_name(step.dropped)},
                         {"active_set", step.active_set},
                         {"coefficients_std", coefficients_std},
                         {"coefficients_orig", coefficients_orig},
                         {"intercept_orig", step.intercept_orig},
                         {"max_abs_corr", step.max_abs_corr},
                         {"step_length", step.step_length},
                         {"df_surrogate", step.df_surrogate},
                         {"cp", step.cp}});
    }
    return {{"mode", std::string(to_string(path.mode))},
            {"predictor_names", path.predictor_names},
            {"entry_order", path.entry_order},
            {"warnings", path.warnings},
            {"full_model",
             {{"sigma_hat_sq", path.full_model.sigma_hat_sq},
              {"m", path.full_model.m},
              {"n", path.full_model.n},
              {"rank", path.full_model.rank}}},
            {"steps", steps}};
}

json to_json(const std::vector<CaseCpRecord>& records, const FullModelInfo& info) {
    json rows = json::array();
    double total = 0.0;
    for (const CaseCpRecord& r : records) {
        rows.push_back({{"case", r.case_index},
                        {"fit_term", r.fit_term},
                        {"cov_term", r.cov_term},
                        {"leverage_deficit", r.leverage_deficit},
                        {"hat_diagonal", info.hat_diagonals(r.case_index)},
                        {"c_pi", r.c_pi}});
        total += r.c_pi;
    }
    return {{"records", rows}, {"sum_c_pi", total}, {"sigma_hat_sq", info.sigma_hat_sq}};
}

json to_json(const SirResult& result, const std::vector<std::string>& predictor_names) {
    json directions = json::array();
    for (Index c = 0; c < result.directions.cols(); ++c) {
        json column = json::object();
        for (Index r = 0; r < result.directions.rows(); ++r) {
            column[predictor_names[static_cast<std::size_t>(r)]] = result.directions(r, c);
        }
        directions.push_back(column);
    }
    json tests = json::array();
    for (const DimensionTest& t : result.dim_tests) {
        tests.push_back({{"d", t.dimension},
                         {"statistic", t.statistic},
                         {"degrees_of_freedom", t.degrees_of_freedom},
                         {"p_value", t.p_value}});
    }
    return {{"eigenvalues", to_json(result.eigenvalues)},
            {"directions", directions},
            {"slice_count", result.slice_count},
            {"slice_sizes", result.slice_sizes},
            {"dim_tests", tests},
            {"level", result.level},
            {"estimated_d", result.estimated_d}};
}

json to_json(const StressReport& report) {
    json perturbed = json::array();
    for (const auto& s : report.perturbed) perturbed.push_back(labeled_json(s));
    json overlap = json::array();
    for (const auto& o : report.overlap) {
        overlap.push_back({{"first", o.first},
                           {"second", o.second},
                           {"intersection", o.intersection},
                           {"jaccard", o.jaccard}});
    }
    return {{"baseline", labeled_json(report.baseline)},
            {"perturbed", perturbed},
            {"overlap", overlap},
            {"flags", report.flags},
            {"config_echo", report.config_echo}};
}

json to_json(const StabilityReport& report) {
    return {{"pair", {report.first, report.second}},
            {"target_corr", report.target_corr},
            {"observed_corr", report.observed_corr},
            {"theta", report.theta},
            {"tilted_corr", report.tilted_corr},
            {"effective_sample_size", report.effective_sample_size},
            {"reachable_range", {report.reachable_low, report.reachable_high}},
            {"achieved_correlations", report.achieved_correlations},
            {"selection_frequency", report.selection_frequency},
            {"frequency_standard_error", report.frequency_standard_error},
            {"replicate_selections", report.replicate_selections},
            {"baseline_selection", to_json(report.baseline_selection)},
            {"replicates", report.replicates},
            {"seed", report.seed},
            {"rng_algorithm", report.rng_algorithm}};
}

std::string plot_data_csv(const LarsPath& path) {
    std::ostringstream out;
    out << "step,predictor,coefficient,cp\n";
    for (const LarsStep& step : path.steps) {
        for (std::size_t j = 0; j < path.predictor_names.size(); ++j) {
            out << step.step_index << ',' << path.predictor_names[j] << ','
                << format_real(step.coefficients_orig(static_cast<Index>(j))) << ','
                << format_real(step.cp) << '\n';
        }
    }
    return out.str();
}

void emit_plot_data(const LarsPath& path, const std::filesystem::path& out) {
    std::ofstream file(out, std::ios::binary);
    if (!file) throw Error(ErrorKind::io, "cannot write plot data to '" + out.string() + "'");
    file << plot_data_csv(path);
    if (!file) throw Error(ErrorKind::io, "failed writing plot data to '" + out.string() + "'");
}

}  // namespace larscp
