#include "larscp/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    larscp::cli::RunConfig config;
    CLI::App app{"LARS paths, Cp diagnostics, SIR dimension checks and selection stress tests"};
    app.set_version_flag("--version", "larscp 1.0.0");

    app.add_option("command", config.command, "Command to run")
        ->required()
        ->check(CLI::IsMember({"fit", "diagnose", "dim", "stress-round", "stress-scale",
                               "stress-marginal", "simulate-cov"}));
    app.add_option("--input", config.input_path, "CSV file with a header row")->required();
    app.add_option("--response", config.response, "Response column name")->required();
    app.add_option("--mode", config.mode, "LARS variant")
        ->check(CLI::IsMember({"plain", "lasso"}));
    app.add_option("--seed", config.seed, "Master random seed");
    app.add_option("--format", config.output_format, "Report format")
        ->check(CLI::IsMember({"json", "text"}));
    app.add_option("--out", config.out_path, "Write the report here instead of stdout");
    app.add_option("--plot-csv", config.plot_csv, "fit: write long-format coefficient path CSV");
    app.add_option("--max-steps", config.max_steps, "Cap on LARS moves");
    app.add_option("--step", config.step, "diagnose: path step (default: Cp-selected step)");
    app.add_option("--factor", config.factor, "stress-round: multiplier before rounding");
    app.add_option("--exclude", config.exclude,
                   "stress-round: predictors not copied; stress-scale: quadratic exclusions")
        ->delimiter(',');
    app.add_option("--slices", config.slices, "dim: number of response slices");
    app.add_option("--level", config.level, "dim: test level");
    app.add_option("--pair", config.pair, "stress-marginal: NAME,NAME")->delimiter(',');
    app.add_option("--target-corr", config.target_corr, "stress-marginal: target correlation");
    app.add_option("--replicates", config.replicates, "Monte Carlo replicates");
    app.add_option("--generator", config.generator, "simulate-cov: fitted-beta or fixed-beta")
        ->check(CLI::IsMember({"fitted-beta", "fixed-beta"}));
    app.add_option("--beta", config.beta, "simulate-cov: fixed slopes")->delimiter(',');
    app.add_option("--intercept", config.intercept, "simulate-cov: fixed intercept");
    app.add_option("--noise-sd", config.noise_sd, "simulate-cov: noise standard deviation");
    app.add_option("--step-count", config.step_count, "simulate-cov: path step to examine");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return larscp::cli::kExitUsage;
    }
    return larscp::cli::run(config, std::cout, std::cerr);
}
