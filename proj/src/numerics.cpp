#include "larscp/numerics.hpp"

#include "larscp/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace larscp {

namespace {

std::string shape(const Matrix& m) {
    return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

}  // namespace

void require_finite(const Matrix& values, std::string_view what) {
    if (!values.allFinite()) {
        throw Error(ErrorKind::non_finite, std::string(what) + " contains NaN or Inf");
    }
}

void require_finite(const Vector& values, std::string_view what) {
    if (!values.allFinite()) {
        throw Error(ErrorKind::non_finite, std::string(what) + " contains NaN or Inf");
    }
}

Matrix with_intercept(const Matrix& predictors) {
    Matrix out(predictors.rows(), predictors.cols() + 1);
    out.col(0).setOnes();
    out.rightCols(predictors.cols()) = predictors;
    return out;
}

LeastSquaresFit least_squares(const Matrix& design, const Vector& response) {
    if (design.rows() != response.size()) {
        throw Error(ErrorKind::dimension_mismatch,
                    "least_squares: design is " + shape(design) + " but response has " +
                        std::to_string(response.size()) + " entries");
    }
    if (design.rows() < 1) {
        throw Error(ErrorKind::dimension_mismatch, "least_squares: design has no rows");
    }
    require_finite(design, "least_squares design");
    require_finite(response, "least_squares response");

    LeastSquaresFit fit;
    if (design.cols() == 0) {
        fit.coefficients = Vector(0);
        fit.fitted = Vector::Zero(response.size());
        fit.residuals = response;
        return fit;
    }

    Eigen::CompleteOrthogonalDecomposition<Matrix> cod;
    cod.setThreshold(kRankTolerance);
    cod.compute(design);
    fit.coefficients = cod.solve(response);
    fit.fitted = design * fit.coefficients;
    fit.residuals = response - fit.fitted;
    fit.rank = cod.rank();
    return fit;
}

ColumnSpaceProjection project_column_space(const Matrix& design) {
    require_finite(design, "projection design");
    const Index n = design.rows();
    ColumnSpaceProjection out;
    if (design.cols() == 0) {
        out.diagonals = Vector::Zero(n);
        return out;
    }

    Eigen::ColPivHouseholderQR<Matrix> qr(design);
    const Index k = std::min(n, design.cols());
    // Singular values of R equal those of the design.
    Matrix r = qr.matrixR().topRows(k).triangularView<Eigen::Upper>();
    Eigen::JacobiSVD<Matrix> svd(r);
    const Vector& sv = svd.singularValues();
    const double cutoff = kRankTolerance * (sv.size() > 0 ? sv(0) : 0.0);
    out.rank = 0;
    for (Index i = 0; i < sv.size(); ++i) {
        if (sv(i) > cutoff) ++out.rank;
    }

    if (out.rank == 0) {
        out.diagonals = Vector::Zero(n);
        return out;
    }
    Matrix q = qr.householderQ() * Matrix::Identity(n, out.rank);
    out.diagonals = q.rowwise().squaredNorm();
    return out;
}

Vector projection_diagonals(const Matrix& design) {
    ColumnSpaceProjection p = project_column_space(design);
    if (p.rank < design.cols()) {
        throw Error(ErrorKind::rank_deficient,
                    "projection_diagonals: design " + shape(design) + " has numerical rank " +
                        std::to_string(p.rank) +
                        " (singular values below 1e-10 x largest treated as zero)");
    }
    return p.diagonals;
}

SymmetricEigen symmetric_eig(const Matrix& matrix) {
    if (matrix.rows() != matrix.cols()) {
        throw Error(ErrorKind::dimension_mismatch,
                    "symmetric_eig: matrix is " + shape(matrix) + ", not square");
    }
    require_finite(matrix, "symmetric_eig input");
    const double scale = std::max(1.0, matrix.cwiseAbs().maxCoeff());
    const double asym = (matrix - matrix.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTolerance * scale) {
        throw Error(ErrorKind::invalid_argument,
                    "symmetric_eig: matrix is not symmetric (max |a_ij - a_ji| = " +
                        std::to_string(asym) + ")");
    }

    const Matrix sym = 0.5 * (matrix + matrix.transpose());
    Eigen::SelfAdjointEigenSolver<Matrix> solver(sym);
    const Index p = sym.rows();

    SymmetricEigen out;
    out.values = solver.eigenvalues().reverse();
    out.vectors = solver.eigenvectors().rowwise().reverse();
    for (Index j = 0; j < p; ++j) {
        Index arg = 0;
        out.vectors.col(j).cwiseAbs().maxCoeff(&arg);
        if (out.vectors(arg, j) < 0) out.vectors.col(j) *= -1.0;
    }
    return out;
}

Matrix covariance(const Matrix& data) {
    const Vector means = data.colwise().mean();
    const Matrix centered = data.rowwise() - means.transpose();
    return centered.transpose() * centered / static_cast<double>(data.rows());
}

Whitening whiten(const Matrix& data) {
    require_finite(data, "whiten input");
    const Index n = data.rows();
    if (n < 2) {
        throw Error(ErrorKind::dimension_mismatch, "whiten: need at least two rows");
    }

    Whitening out;
    out.means = data.colwise().mean();
    const Matrix centered = data.rowwise() - out.means.transpose();
    for (Index j = 0; j < data.cols(); ++j) {
        const double spread = centered.col(j).cwiseAbs().maxCoeff();
        const double size = std::max(1.0, data.col(j).cwiseAbs().maxCoeff());
        if (spread <= 1e-12 * size) {
            throw Error(ErrorKind::singular,
                        "whiten: column " + std::to_string(j) + " is constant");
        }
    }

    const Matrix cov = centered.transpose() * centered / static_cast<double>(n);
    const SymmetricEigen eig = symmetric_eig(cov);
    const double top = eig.values(0);
    const double bottom = eig.values(eig.values.size() - 1);
    if (!(bottom > kRankTolerance * top)) {
        throw Error(ErrorKind::singular,
                    "whiten: covariance is singular within 1e-10 (eigenvalue ratio " +
                        std::to_string(bottom / top) + ")");
    }

    const Vector inv_sqrt = eig.values.array().rsqrt();
    out.transform = eig.vectors * inv_sqrt.asDiagonal() * eig.vectors.transpose();
    out.transform = 0.5 * (out.transform + out.transform.transpose());
    out.whitened = centered * out.transform;
    return out;
}

}  // namespace larscp
