#pragma once

#include <Eigen/Dense>

namespace esgport::linalg {

/// Reciprocal condition estimates below this are treated as singular.
inline constexpr double kMinReciprocalCondition = 1e-12;
/// Relative residual bound every accepted solve must meet.
inline constexpr double kMaxRelativeResidual = 1e-8;

/**
 * @brief Solve A X = B with an LU factorization.
 *
 * Throws Error(SingularSystem) when the reciprocal condition estimate of A
 * is below kMinReciprocalCondition or the residual ||A X - B|| exceeds
 * kMaxRelativeResidual * ||B||.
 */
Eigen::MatrixXd solve_checked(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);
Eigen::VectorXd solve_checked(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

/// Inverse via solve_checked(A, I); used only where an inverse is itself the output.
Eigen::MatrixXd inverse_checked(const Eigen::MatrixXd& a);

/// Sample covariance (n-1 denominator) of the columns of `obs` (rows = observations).
Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& obs);

/// Symmetric square root factor L with L L^T = A for symmetric PSD A (eigen-based, tolerates singular A).
Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& a);

bool is_symmetric(const Eigen::MatrixXd& a, double tol = 1e-12);

}  // namespace esgport::linalg
