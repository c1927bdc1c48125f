#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace larscp::cli {

inline constexpr std::uint64_t kDefaultSeed = 20040201;

struct RunConfig {
    std::string command;  // fit | diagnose | dim | stress-round | stress-scale | stress-marginal | simulate-cov
    std::string input_path;
    std::string response;
    std::string mode = "plain";
    std::uint64_t seed = kDefaultSeed;
    std::string output_format = "json";
    std::optional<std::string> out_path;
    std::optional<std::string> plot_csv;
    std::optional<long> max_steps;
    std::optional<long> step;  // diagnose: defaults to the Cp-selected step
    double factor = 2.2;
    std::vector<std::string> exclude;
    long slices = 10;
    double level = 0.05;
    std::vector<std::string> pair;
    std::optional<double> target_corr;
    std::optional<long> replicates;
    std::string generator = "fitted-beta";
    std::vector<double> beta;
    double intercept = 0.0;
    double noise_sd = 1.0;
    long step_count = 1;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomainError = 1;
inline constexpr int kExitUsage = 2;

// Runs one command. The complete report (or error object) is written to `out`
// (or to config.out_path) only after the computation succeeds.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace larscp::cli
