#pragma once

#include "larscp/dataset.hpp"
#include "larscp/numerics.hpp"

#include <vector>

namespace larscp {

struct DimensionTest {
    Index dimension = 0;  // hypothesized d
    double statistic = 0.0;
    Index degrees_of_freedom = 0;
    double p_value = 1.0;
};

struct SirResult {
    Vector eigenvalues;  // descending, in [0, 1]
    Matrix directions;   // m x m, unit columns on the original predictor scale
    Index slice_count = 0;
    std::vector<Index> slice_sizes;
    std::vector<Index> slice_of_case;
    std::vector<DimensionTest> dim_tests;
    Index estimated_d = 0;
    double level = 0.05;
};

struct Slicing {
    std::vector<Index> slice_of_case;
    std::vector<Index> sizes;
};

// Contiguous slices of the sorted response, never splitting tied values.
// Slices hold floor(n / slices) cases, one more for the first n mod slices of
// them, and each boundary is pushed forward past ties (the dr package rule).
// Heavy ties can change the number of slices.
Slicing slice_response(const Vector& y, Index slices);

// Sliced inverse regression with the marginal chi-squared dimension tests:
// statistic n * sum_{j > d} lambda_j on (m - d)(h - d - 1) degrees of freedom.
SirResult sir(const Dataset& dataset, Index slices = 10, double level = 0.05);

// Upper-tail probability of the chi-squared distribution.
double chi_sq_upper_tail(double statistic, Index df);

}  // namespace larscp
