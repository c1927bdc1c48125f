#pragma once

#include "larscp/diagnostics.hpp"
#include "larscp/dimension.hpp"
#include "larscp/lars.hpp"
#include "larscp/stress.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace larscp {

using json = nlohmann::json;

inline constexpr const char* kToolName = "larscp";
inline constexpr const char* kToolVersion = "1.0.0";

// Object keys in lexicographic order, two-space indentation, floating-point
// numbers with 17 significant digits ("%.17g"), non-finite numbers as null.
std::string canonical_dump(const json& value);

std::string format_real(double value);

json to_json(const Vector& v);
json to_json(const SelectionResult& selection);
json to_json(const LarsPath& path);
json to_json(const std::vector<CaseCpRecord>& records, const FullModelInfo& info);
json to_json(const SirResult& result, const std::vector<std::string>& predictor_names);
json to_json(const StressReport& report);
json to_json(const StabilityReport& report);

// Long-format rows (step, predictor, coefficient, cp); coefficients on the
// original predictor scale.
std::string plot_data_csv(const LarsPath& path);
void emit_plot_data(const LarsPath& path, const std::filesystem::path& out);

}  // namespace larscp
