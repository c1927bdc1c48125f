#include "larscp/cli.hpp"

#include "larscp/dataset.hpp"
#include "larscp/diagnostics.hpp"
#include "larscp/dimension.hpp"
#include "larscp/error.hpp"
#include "larscp/lars.hpp"
#include "larscp/report.hpp"
#include "larscp/stress.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace larscp::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

const std::set<std::string> kCommands = {"fit",          "diagnose",        "dim",
                                         "stress-round", "stress-scale",    "stress-marginal",
                                         "simulate-cov"};

json config_echo(const RunConfig& c) {
    auto opt = [](const auto& v) { return v ? json(*v) : json(nullptr); };
    return {{"command", c.command},
            {"input", c.input_path},
            {"response", c.response},
            {"mode", c.mode},
            {"seed", c.seed},
            {"format", c.output_format},
            {"out", opt(c.out_path)},
            {"plot_csv", opt(c.plot_csv)},
            {"max_steps", opt(c.max_steps)},
            {"step", opt(c.step)},
            {"factor", c.factor},
            {"exclude", c.exclude},
            {"slices", c.slices},
            {"level", c.level},
            {"pair", c.pair},
            {"target_corr", opt(c.target_corr)},
            {"replicates", opt(c.replicates)},
            {"generator", c.generator},
            {"beta", c.beta},
            {"intercept", c.intercept},
            {"noise_sd", c.noise_sd},
            {"step_count", c.step_count}};
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (std::size_t k = 0; k < items.size(); ++k) out += (k ? ", " : "") + items[k];
    return out;
}

std::string selection_line(const SelectionResult& s) {
    return std::to_string(s.selected.size()) + " predictors at step " +
           std::to_string(s.chosen_step) + " (Cp " + format_real(s.criterion_value) + "): " +
           join(s.selected);
}

void validate(const RunConfig& c) {
    if (!kCommands.count(c.command)) throw UsageError("unknown command '" + c.command + "'");
    if (c.input_path.empty()) throw UsageError("--input is required");
    if (c.response.empty()) throw UsageError("--response is required");
    if (c.mode != "plain" && c.mode != "lasso") throw UsageError("--mode must be plain or lasso");
    if (c.output_format != "json" && c.output_format != "text") {
        throw UsageError("--format must be json or text");
    }
    if (c.command == "stress-marginal") {
        if (c.pair.size() != 2) throw UsageError("--pair needs exactly two names");
        if (!c.target_corr) throw UsageError("--target-corr is required for stress-marginal");
    }
    if (c.command == "simulate-cov" && c.generator != "fitted-beta" && c.generator != "fixed-beta") {
        throw UsageError("--generator must be fitted-beta or fixed-beta");
    }
}

struct Outcome {
    json payload;
    std::string text;
};

Outcome run_fit(const RunConfig& c, const Dataset& data) {
    const LarsPath path = lars_path(data, parse_lars_mode(c.mode), c.max_steps);
    const SelectionResult sel = select_by_cp(path);
    if (c.plot_csv) emit_plot_data(path, *c.plot_csv);
    Outcome o;
    o.payload = {{"path", to_json(path)}, {"selection", to_json(sel)}};
    std::ostringstream t;
    t << "LARS (" << c.mode << ") on " << data.provenance << ": n = " << data.rows()
      << ", m = " << data.cols() << "\n";
    t << "entry order: " << join(path.entry_order) << "\n";
    for (const LarsStep& s : path.steps) {
        t << "  step " << s.step_index << "  |A| = " << s.active_set.size()
          << "  Cp = " << format_real(s.cp) << "\n";
    }
    t << "Cp selection: " << selection_line(sel) << "\n";
    for (const auto& w : path.warnings) t << "warning: " << w << "\n";
    o.text = t.str();
    return o;
}

Outcome run_diagnose(const RunConfig& c, const Dataset& data) {
    const LarsPath path = lars_path(data, parse_lars_mode(c.mode), c.max_steps);
    const FullModelInfo info = full_model_info(data);
    const long step = c.step ? *c.step : static_cast<long>(select_by_cp(path).chosen_step);
    if (step < 0 || step >= static_cast<long>(path.steps.size())) {
        throw Error(ErrorKind::invalid_argument,
                    "diagnose: step " + std::to_string(step) + " outside path of " +
                        std::to_string(path.steps.size()) + " steps");
    }
    const LarsStep& chosen = path.steps[static_cast<std::size_t>(step)];
    const auto records = case_cp(chosen, info);
    Outcome o;
    o.payload = to_json(records, info);
    o.payload["step"] = chosen.step_index;
    o.payload["active_set"] = chosen.active_set;
    o.payload["cp"] = chosen.cp;
    std::ostringstream t;
    t << "per-case Cp at step " << chosen.step_index << " (" << join(chosen.active_set) << ")\n";
    t << "Cp = " << format_real(chosen.cp) << ", sigma^2 = " << format_real(info.sigma_hat_sq)
      << "\n";
    t << "case  fit_term  u_i  h_i-u_i  C_pi\n";
    for (const auto& r : records) {
        t << r.case_index << "  " << format_real(r.fit_term) << "  " << format_real(r.cov_term)
          << "  " << format_real(r.leverage_deficit) << "  " << format_real(r.c_pi) << "\n";
    }
    o.text = t.str();
    return o;
}

Outcome run_dim(const RunConfig& c, const Dataset& data) {
    const SirResult r = sir(data, c.slices, c.level);
    Outcome o;
    o.payload = to_json(r, data.predictor_names);
    std::ostringstream t;
    t << "SIR with " << r.slice_count << " slices, level " << format_real(c.level) << "\n";
    for (const auto& test : r.dim_tests) {
        t << "  d = " << test.dimension << ": statistic " << format_real(test.statistic)
          << " on " << test.degrees_of_freedom << " df, p = " << format_real(test.p_value) << "\n";
    }
    t << "estimated structural dimension: " << r.estimated_d << "\n";
    o.text = t.str();
    return o;
}

std::string stress_text(const StressReport& r) {
    std::ostringstream t;
    auto line = [&](const LabeledSelection& s) {
        t << s.label << ": " << selection_line(s.selection);
        if (s.composition) {
            t << " [main " << s.composition->main << ", interaction " << s.composition->interaction
              << ", quadratic " << s.composition->quadratic << "]";
        }
        t << "\n";
    };
    line(r.baseline);
    for (const auto& s : r.perturbed) line(s);
    for (const auto& o : r.overlap) {
        t << "overlap " << o.first << "/" << o.second << ": " << o.intersection << " shared, jaccard "
          << format_real(o.jaccard) << "\n";
    }
    for (const auto& f : r.flags) t << "flag: " << f << "\n";
    return t.str();
}

Outcome run_stress_round(const RunConfig& c, const Dataset& data) {
    const StressReport r = run_round_stress(data, c.factor, c.exclude, "r", parse_lars_mode(c.mode));
    return {to_json(r), stress_text(r)};
}

Outcome run_stress_scale(const RunConfig& c, const Dataset& data) {
    const StressReport r = scale_order_audit(data, c.exclude, parse_lars_mode(c.mode));
    return {to_json(r), stress_text(r)};
}

Outcome run_stress_marginal(const RunConfig& c, const Dataset& data) {
    const long reps = c.replicates.value_or(200);
    const StabilityReport r = marginal_shift_stress(data, c.pair[0], c.pair[1], *c.target_corr,
                                                    reps, c.seed, parse_lars_mode(c.mode));
    std::ostringstream t;
    t << "pair " << r.first << "/" << r.second << ": observed correlation "
      << format_real(r.observed_corr) << ", target " << format_real(r.target_corr) << ", theta "
      << format_real(r.theta) << "\n";
    for (const auto& [name, f] : r.selection_frequency) {
        t << "  " << name << ": " << format_real(f) << " (se "
          << format_real(r.frequency_standard_error.at(name)) << ")\n";
    }
    return {to_json(r), t.str()};
}

Outcome run_simulate_cov(const RunConfig& c, const Dataset& data) {
    CovSimulationConfig cfg;
    cfg.generator = c.generator == "fixed-beta" ? NoiseGenerator::fixed_beta
                                                : NoiseGenerator::fitted_beta;
    cfg.beta = Eigen::Map<const Vector>(c.beta.data(), static_cast<Index>(c.beta.size()));
    cfg.intercept = c.intercept;
    cfg.noise_sd = c.noise_sd;
    cfg.step_count = c.step_count;
    cfg.replicates = c.replicates.value_or(1000);
    cfg.seed = c.seed;
    const CovSimulation sim = simulate_cov(data, cfg);

    const LarsPath path = lars_path(data, LarsMode::plain, c.step_count);
    if (static_cast<long>(path.steps.size()) <= c.step_count) {
        throw Error(ErrorKind::invalid_argument,
                    "simulate-cov: the observed path ends before step " + std::to_string(c.step_count));
    }
    const LarsStep& step = path.steps[static_cast<std::size_t>(c.step_count)];
    Index within = 0;
    for (Index i = 0; i < data.rows(); ++i) {
        if (std::abs(sim.estimates(i) - step.subset_leverage(i)) <= 3.0 * sim.standard_errors(i)) {
            ++within;
        }
    }
    const double fraction = static_cast<double>(within) / static_cast<double>(data.rows());
    Outcome o;
    o.payload = {{"estimates", to_json(sim.estimates)},
                 {"standard_errors", to_json(sim.standard_errors)},
                 {"subset_leverage", to_json(step.subset_leverage)},
                 {"active_set", step.active_set},
                 {"used", sim.used},
                 {"excluded", sim.excluded},
                 {"rng_algorithm", sim.rng_algorithm},
                 {"seed", sim.seed},
                 {"fraction_within_3se", fraction}};
    std::ostringstream t;
    t << "cov(mu_i, y_i)/sigma^2 at step " << c.step_count << " over " << sim.used
      << " replicates (" << sim.excluded << " excluded), " << sim.rng_algorithm << " seed "
      << sim.seed << "\n";
    t << "cases within 3 MC standard errors of u_i: " << within << "/" << data.rows() << "\n";
    o.text = t.str();
    return o;
}

void emit(const RunConfig& c, const std::string& body, std::ostream& out) {
    if (c.out_path) {
        std::ofstream file(*c.out_path, std::ios::binary);
        if (!file) throw Error(ErrorKind::io, "cannot write '" + *c.out_path + "'");
        file << body;
        return;
    }
    out << body;
}

}  // namespace

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
    try {
        validate(config);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kExitUsage;
    }

    try {
        const Dataset data = load_csv(config.input_path, config.response);
        Outcome outcome;
        if (config.command == "fit") outcome = run_fit(config, data);
        else if (config.command == "diagnose") outcome = run_diagnose(config, data);
        else if (config.command == "dim") outcome = run_dim(config, data);
        else if (config.command == "stress-round") outcome = run_stress_round(config, data);
        else if (config.command == "stress-scale") outcome = run_stress_scale(config, data);
        else if (config.command == "stress-marginal") outcome = run_stress_marginal(config, data);
        else outcome = run_simulate_cov(config, data);

        if (config.output_format == "json") {
            const json report = {{"tool", kToolName},
                                 {"version", kToolVersion},
                                 {"command", config.command},
                                 {"config", config_echo(config)},
                                 {"payload", outcome.payload}};
            emit(config, canonical_dump(report), out);
        } else {
            emit(config, outcome.text, out);
        }
        return kExitOk;
    } catch (const Error& e) {
        const json report = {{"tool", kToolName},
                             {"version", kToolVersion},
                             {"command", config.command},
                             {"error", {{"kind", std::string(to_string(e.kind()))},
                                        {"message", e.what()}}}};
        out << canonical_dump(report);
        return kExitDomainError;
    }
}

}  // namespace larscp::cli
