#include "larscp/dataset.hpp"

#include "larscp/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace larscp {

namespace {

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

bool parse_number(const std::string& text, double& value) {
    if (text.empty()) return false;
    const char* begin = text.data();
    const char* end = begin + text.size();
    if (*begin == '+') ++begin;
    auto [ptr, ec] = std::from_chars(begin, end, value);
    return ec == std::errc() && ptr == end && std::isfinite(value);
}

}  // namespace

Index Dataset::column_index(std::string_view name) const {
    const auto it = std::find(predictor_names.begin(), predictor_names.end(), name);
    if (it == predictor_names.end()) {
        throw Error(ErrorKind::invalid_argument,
                    "unknown predictor column '" + std::string(name) + "'");
    }
    return static_cast<Index>(it - predictor_names.begin());
}

bool Dataset::has_column(std::string_view name) const {
    return std::find(predictor_names.begin(), predictor_names.end(), name) !=
           predictor_names.end();
}

void Dataset::validate() const {
    if (static_cast<Index>(predictor_names.size()) != X.cols()) {
        throw Error(ErrorKind::dimension_mismatch,
                    "dataset has " + std::to_string(predictor_names.size()) + " names for " +
                        std::to_string(X.cols()) + " columns");
    }
    if (X.rows() != y.size()) {
        throw Error(ErrorKind::dimension_mismatch,
                    "dataset has " + std::to_string(X.rows()) + " predictor rows but " +
                        std::to_string(y.size()) + " responses");
    }
    if (X.rows() < 1) throw Error(ErrorKind::invalid_argument, "dataset has no rows");
    std::set<std::string> seen;
    for (const auto& name : predictor_names) {
        if (!seen.insert(name).second) {
            throw Error(ErrorKind::invalid_argument, "duplicate predictor name '" + name + "'");
        }
    }
    require_finite(X, "predictors");
    require_finite(y, "response");
}

Dataset make_dataset(std::vector<std::string> names, Matrix X, Vector y,
                     std::string response_name, std::string provenance) {
    Dataset d{std::move(names), std::move(X), std::move(y), std::move(response_name),
              std::move(provenance)};
    d.validate();
    return d;
}

Dataset parse_csv(std::istream& in, std::string_view response, std::string provenance) {
    std::string line;
    if (!std::getline(in, line) || trim(line).empty()) {
        throw Error(ErrorKind::parse, provenance + ": empty file (no header row)");
    }
    std::vector<std::string> header = split_fields(line);
    for (auto& h : header) h = trim(h);
    if (!header.empty() && header[0].rfind("\xEF\xBB\xBF", 0) == 0) header[0].erase(0, 3);

    const auto response_it = std::find(header.begin(), header.end(), response);
    if (response_it == header.end()) {
        throw Error(ErrorKind::invalid_argument,
                    provenance + ": response column '" + std::string(response) + "' not found");
    }
    const auto response_col = static_cast<std::size_t>(response_it - header.begin());

    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        std::vector<std::string> fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw Error(ErrorKind::parse, provenance + ": line " + std::to_string(line_no) +
                                              " has " + std::to_string(fields.size()) +
                                              " fields, header has " +
                                              std::to_string(header.size()));
        }
        std::vector<double> values(fields.size());
        for (std::size_t c = 0; c < fields.size(); ++c) {
            const std::string cell = trim(fields[c]);
            if (!parse_number(cell, values[c])) {
                throw Error(ErrorKind::parse,
                            provenance + ": non-numeric cell '" + cell + "' at row " +
                                std::to_string(rows.size() + 1) + " (line " +
                                std::to_string(line_no) + "), column '" + header[c] + "'");
            }
        }
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw Error(ErrorKind::parse, provenance + ": no data rows");

    const auto n = static_cast<Index>(rows.size());
    const auto m = static_cast<Index>(header.size() - 1);
    Dataset d;
    d.response_name = std::string(response);
    d.provenance = std::move(provenance);
    d.X.resize(n, m);
    d.y.resize(n);
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != response_col) d.predictor_names.push_back(header[c]);
    }
    for (Index i = 0; i < n; ++i) {
        Index j = 0;
        for (std::size_t c = 0; c < header.size(); ++c) {
            if (c == response_col) {
                d.y(i) = rows[i][c];
            } else {
                d.X(i, j++) = rows[i][c];
            }
        }
    }
    d.validate();
    return d;
}

Dataset load_csv(const std::filesystem::path& path, std::string_view response) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::io, "cannot open '" + path.string() + "'");
    return parse_csv(in, response, path.string());
}

std::string_view to_string(ScalingRule rule) noexcept {
    return rule == ScalingRule::unit_norm ? "unit-norm" : "unit-sd";
}

std::string_view to_string(TermKind kind) noexcept {
    switch (kind) {
        case TermKind::main: return "main";
        case TermKind::interaction: return "interaction";
        case TermKind::quadratic: return "quadratic";
    }
    return "main";
}

Matrix StandardizedView::apply(const Matrix& X) const {
    return (X.rowwise() - column_means.transpose()).array().rowwise() /
           column_scales.transpose().array();
}

Matrix StandardizedView::restore(const Matrix& standardized) const {
    return (standardized.array().rowwise() * column_scales.transpose().array()).matrix()
               .rowwise() +
           column_means.transpose();
}

Dataset StandardizedView::transform(const Dataset& dataset) const {
    Dataset out = dataset;
    out.X = apply(dataset.X);
    return out;
}

StandardizedView standardize(const Dataset& dataset, ScalingRule rule) {
    const Index n = dataset.rows();
    if (rule == ScalingRule::unit_sd && n < 2) {
        throw Error(ErrorKind::invalid_argument, "standardize: unit-sd needs at least two rows");
    }
    StandardizedView view;
    view.rule = rule;
    view.column_means = dataset.X.colwise().mean();
    view.column_scales.resize(dataset.cols());
    view.response_mean = dataset.y.mean();
    for (Index j = 0; j < dataset.cols(); ++j) {
        const Vector centered = dataset.X.col(j).array() - view.column_means(j);
        const double norm = centered.norm();
        const double size = std::max(1.0, dataset.X.col(j).cwiseAbs().maxCoeff());
        if (centered.cwiseAbs().maxCoeff() <= 1e-12 * size || norm == 0.0) {
            throw Error(ErrorKind::invalid_argument,
                        "predictor '" + dataset.predictor_names[j] + "' is constant");
        }
        view.column_scales(j) =
            rule == ScalingRule::unit_norm ? norm : norm / std::sqrt(static_cast<double>(n - 1));
    }
    return view;
}

ExpandedDataset expand_terms(const Dataset& dataset, bool quadratics, bool interactions,
                             const std::vector<std::string>& quadratic_exclusions) {
    for (const auto& name : quadratic_exclusions) {
        if (!dataset.has_column(name)) {
            throw Error(ErrorKind::invalid_argument,
                        "expand_terms: unknown exclusion '" + name + "'");
        }
    }
    const Index m = dataset.cols();
    const Index n = dataset.rows();

    ExpandedDataset out;
    out.expansion.source_names = dataset.predictor_names;
    out.expansion.exclusions = quadratic_exclusions;
    std::vector<Vector> columns;
    std::vector<std::string> names;

    auto push = [&](Vector column, std::string name, TermKind kind, std::vector<Index> parents) {
        columns.push_back(std::move(column));
        names.push_back(std::move(name));
        out.expansion.term_kinds.push_back(kind);
        out.expansion.term_parents.push_back(std::move(parents));
    };

    for (Index j = 0; j < m; ++j) {
        push(dataset.X.col(j), dataset.predictor_names[j], TermKind::main, {j});
    }
    if (interactions) {
        for (Index a = 0; a < m; ++a) {
            for (Index b = a + 1; b < m; ++b) {
                push(dataset.X.col(a).cwiseProduct(dataset.X.col(b)),
                     dataset.predictor_names[a] + ":" + dataset.predictor_names[b],
                     TermKind::interaction, {a, b});
            }
        }
    }
    if (quadratics) {
        for (Index j = 0; j < m; ++j) {
            const auto& name = dataset.predictor_names[j];
            if (std::find(quadratic_exclusions.begin(), quadratic_exclusions.end(), name) !=
                quadratic_exclusions.end()) {
                continue;
            }
            push(dataset.X.col(j).cwiseProduct(dataset.X.col(j)), name + "^2",
                 TermKind::quadratic, {j});
        }
    }

    Matrix X(n, static_cast<Index>(columns.size()));
    for (std::size_t c = 0; c < columns.size(); ++c) X.col(static_cast<Index>(c)) = columns[c];
    out.data = make_dataset(std::move(names), std::move(X), dataset.y, dataset.response_name,
                            dataset.provenance);
    return out;
}

Dataset orthogonalize_expansion(const Dataset& expanded, const TermExpansion& expansion) {
    if (static_cast<Index>(expansion.term_kinds.size()) != expanded.cols()) {
        throw Error(ErrorKind::dimension_mismatch,
                    "orthogonalize_expansion: expansion metadata does not match dataset");
    }
    std::vector<Index> mains;
    for (Index j = 0; j < expanded.cols(); ++j) {
        if (expansion.term_kinds[j] == TermKind::main) mains.push_back(j);
    }
    Matrix main_block(expanded.rows(), static_cast<Index>(mains.size()));
    for (std::size_t k = 0; k < mains.size(); ++k) {
        main_block.col(static_cast<Index>(k)) = expanded.X.col(mains[k]);
    }
    const Matrix design = with_intercept(main_block);
    if (project_column_space(design).rank < design.cols()) {
        throw Error(ErrorKind::rank_deficient,
                    "orthogonalize_expansion: intercept plus main effects is rank deficient");
    }

    Dataset out = expanded;
    for (Index j = 0; j < expanded.cols(); ++j) {
        if (expansion.term_kinds[j] == TermKind::main) continue;
        out.X.col(j) = least_squares(design, expanded.X.col(j)).residuals;
    }
    return out;
}

}  // namespace larscp
