#include "larscp/dimension.hpp"

#include "larscp/error.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace larscp {

double chi_sq_upper_tail(double statistic, Index df) {
    if (df < 1) throw Error(ErrorKind::invalid_argument, "chi_sq_upper_tail: df must be >= 1");
    if (!(statistic >= 0.0)) {
        throw Error(ErrorKind::invalid_argument, "chi_sq_upper_tail: negative statistic");
    }
    if (statistic == 0.0) return 1.0;
    if (std::isinf(statistic)) return 0.0;
    return boost::math::gamma_q(0.5 * static_cast<double>(df), 0.5 * statistic);
}

Slicing slice_response(const Vector& y, Index slices) {
    const Index n = y.size();
    if (slices < 2) throw Error(ErrorKind::invalid_argument, "sir: need at least 2 slices");

    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return y(a) < y(b); });

    // Cumulative counts at the end of each distinct value.
    std::vector<Index> cumulative;
    for (Index k = 0; k < n; ++k) {
        if (k + 1 == n || y(order[static_cast<std::size_t>(k + 1)]) != y(order[static_cast<std::size_t>(k)])) {
            cumulative.push_back(k + 1);
        }
    }
    if (static_cast<Index>(cumulative.size()) < slices) {
        throw Error(ErrorKind::invalid_argument,
                    "sir: " + std::to_string(slices) + " slices requested but the response has only " +
                        std::to_string(cumulative.size()) + " distinct values");
    }

    // Sorted position p (0-based) ends a tie run when p + 1 is in `cumulative`.
    auto ends_run = [&](Index count) {
        return std::binary_search(cumulative.begin(), cumulative.end(), count);
    };
    const Index nominal = n / slices;
    Index remainder = n - nominal * slices;
    std::vector<Index> ends;
    Index start = 0;
    while (start + nominal < n) {
        if (remainder > 0) {
            ++start;
            --remainder;
        }
        Index stop = std::min(start + nominal, n);
        while (stop < n && !ends_run(stop)) ++stop;
        ends.push_back(stop);
        start = stop;
    }
    if (ends.empty() || ends.back() != n) ends.push_back(n);

    Slicing out;
    out.slice_of_case.assign(static_cast<std::size_t>(n), 0);
    start = 0;
    for (std::size_t s = 0; s < ends.size(); ++s) {
        for (Index k = start; k < ends[s]; ++k) {
            out.slice_of_case[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] =
                static_cast<Index>(s);
        }
        out.sizes.push_back(ends[s] - start);
        start = ends[s];
    }
    return out;
}

SirResult sir(const Dataset& dataset, Index slices, double level) {
    dataset.validate();
    if (!(level > 0.0 && level < 1.0)) {
        throw Error(ErrorKind::invalid_argument, "sir: level must lie in (0, 1)");
    }
    const Index n = dataset.rows();
    const Index m = dataset.cols();
    if (slices < 2) throw Error(ErrorKind::invalid_argument, "sir: need at least 2 slices");
    if (n < 2 * slices) {
        throw Error(ErrorKind::invalid_argument,
                    "sir: need n >= 2 * slices (n = " + std::to_string(n) + ")");
    }

    const Whitening w = whiten(dataset.X);
    const Slicing slicing = slice_response(dataset.y, slices);
    const auto h = static_cast<Index>(slicing.sizes.size());

    Matrix slice_means = Matrix::Zero(h, m);
    for (Index i = 0; i < n; ++i) {
        slice_means.row(slicing.slice_of_case[static_cast<std::size_t>(i)]) += w.whitened.row(i);
    }
    Matrix kernel = Matrix::Zero(m, m);
    for (Index s = 0; s < h; ++s) {
        const auto size = static_cast<double>(slicing.sizes[static_cast<std::size_t>(s)]);
        const Vector mean = slice_means.row(s).transpose() / size;
        kernel += (size / static_cast<double>(n)) * mean * mean.transpose();
    }
    const SymmetricEigen eig = symmetric_eig(kernel);

    SirResult out;
    out.level = level;
    out.slice_count = h;
    out.slice_sizes = slicing.sizes;
    out.slice_of_case = slicing.slice_of_case;
    out.eigenvalues = eig.values;
    out.directions = w.transform * eig.vectors;
    for (Index j = 0; j < m; ++j) {
        out.directions.col(j).normalize();
        Index arg = 0;
        out.directions.col(j).cwiseAbs().maxCoeff(&arg);
        if (out.directions(arg, j) < 0.0) out.directions.col(j) *= -1.0;
    }

    const Index max_d = std::min(m, h - 1);
    out.estimated_d = max_d;
    bool found = false;
    for (Index d = 0; d < max_d; ++d) {
        DimensionTest test;
        test.dimension = d;
        test.statistic = static_cast<double>(n) * std::max(0.0, eig.values.tail(m - d).sum());
        test.degrees_of_freedom = (m - d) * (h - d - 1);
        test.p_value = chi_sq_upper_tail(test.statistic, test.degrees_of_freedom);
        if (!found && test.p_value >= level) {
            out.estimated_d = d;
            found = true;
        }
        out.dim_tests.push_back(test);
    }
    return out;
}

}  // namespace larscp
