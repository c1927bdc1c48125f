#pragma once

#include <Eigen/Dense>

#include <string_view>

namespace larscp {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Singular values below kRankTolerance * (largest singular value) count as zero.
inline constexpr double kRankTolerance = 1e-10;
// Allowed asymmetry |a_ij - a_ji| relative to max(1, max|a|).
inline constexpr double kSymmetryTolerance = 1e-10;

struct LeastSquaresFit {
    Vector coefficients;
    Vector fitted;
    Vector residuals;
    Index rank = 0;
};

// Minimizes ||response - design * b||. Rank-deficient designs get the
// minimum-norm solution from a complete orthogonal decomposition.
LeastSquaresFit least_squares(const Matrix& design, const Vector& response);

struct ColumnSpaceProjection {
    Vector diagonals;  // diag of the orthogonal projection onto col(design)
    Index rank = 0;
};

// Leverages of the projection onto the column space, whatever its rank.
ColumnSpaceProjection project_column_space(const Matrix& design);

// diag(design (design'design)^-1 design'); throws rank_deficient unless
// the design has full column rank.
Vector projection_diagonals(const Matrix& design);

struct SymmetricEigen {
    Vector values;   // descending
    Matrix vectors;  // orthonormal columns, matching values
};

// Eigenvectors are sign-normalized so their largest-magnitude entry is positive.
SymmetricEigen symmetric_eig(const Matrix& matrix);

struct Whitening {
    Matrix whitened;   // centered data times transform
    Matrix transform;  // symmetric inverse square root of the covariance
    Vector means;
};

// Covariance uses the 1/n normalization, so whitened' * whitened / n = I.
Whitening whiten(const Matrix& data);

// Column-wise covariance with 1/n normalization.
Matrix covariance(const Matrix& data);

// Prepends a column of ones.
Matrix with_intercept(const Matrix& predictors);

void require_finite(const Matrix& values, std::string_view what);
void require_finite(const Vector& values, std::string_view what);

}  // namespace larscp
