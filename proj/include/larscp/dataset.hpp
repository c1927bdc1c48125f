#pragma once

#include "larscp/numerics.hpp"

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace larscp {

// Named predictor columns plus a response. Immutable once validated.
struct Dataset {
    std::vector<std::string> predictor_names;
    Matrix X;  // n x m, caller's units
    Vector y;  // n
    std::string response_name = "y";
    std::string provenance;

    Index rows() const { return X.rows(); }
    Index cols() const { return X.cols(); }

    // Throws invalid_argument naming the column when absent.
    Index column_index(std::string_view name) const;
    bool has_column(std::string_view name) const;

    // Checks name uniqueness, shapes and finiteness.
    void validate() const;
};

Dataset make_dataset(std::vector<std::string> names, Matrix X, Vector y,
                     std::string response_name = "y", std::string provenance = "in-memory");

// Parses a header row plus numeric rows. Every column other than `response`
// becomes a predictor, in file order.
Dataset parse_csv(std::istream& in, std::string_view response, std::string provenance);
Dataset load_csv(const std::filesystem::path& path, std::string_view response);

enum class ScalingRule { unit_norm, unit_sd };

std::string_view to_string(ScalingRule rule) noexcept;

struct StandardizedView {
    Vector column_means;
    Vector column_scales;
    ScalingRule rule = ScalingRule::unit_norm;
    double response_mean = 0.0;

    Matrix apply(const Matrix& X) const;
    Matrix restore(const Matrix& standardized) const;
    // Dataset with standardized predictors; the response is left as is.
    Dataset transform(const Dataset& dataset) const;
};

// unit_norm divides each centered column by its Euclidean length; unit_sd by
// its sample standard deviation (n - 1 denominator).
StandardizedView standardize(const Dataset& dataset, ScalingRule rule);

enum class TermKind { main, interaction, quadratic };

std::string_view to_string(TermKind kind) noexcept;

struct TermExpansion {
    std::vector<std::string> source_names;
    std::vector<TermKind> term_kinds;                // per output column
    std::vector<std::vector<Index>> term_parents;    // source indices per output column
    std::vector<std::string> exclusions;
};

struct ExpandedDataset {
    Dataset data;
    TermExpansion expansion;
};

// Output order: mains, then interactions "A:B" in parent-index order, then
// quadratics "A^2" in source order minus exclusions.
ExpandedDataset expand_terms(const Dataset& dataset, bool quadratics, bool interactions,
                             const std::vector<std::string>& quadratic_exclusions);

// Replaces every non-main column by its residual on (1, main effects).
Dataset orthogonalize_expansion(const Dataset& expanded, const TermExpansion& expansion);

}  // namespace larscp
