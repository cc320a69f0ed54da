#include "esgport/linalg.hpp"

#include "esgport/errors.hpp"

#include <string>

namespace esgport::linalg {

Eigen::MatrixXd solve_checked(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != a.cols() || a.rows() != b.rows()) {
        throw Error(ErrorCode::InvalidArgument, "solve: dimension mismatch");
    }
    if (!a.allFinite() || !b.allFinite()) {
        throw Error(ErrorCode::SingularSystem, "solve: non-finite input");
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    const double rcond = lu.rcond();
    if (!(rcond >= kMinReciprocalCondition)) {
        throw Error(ErrorCode::SingularSystem,
                    "solve: reciprocal condition " + std::to_string(rcond) + " below threshold");
    }
    Eigen::MatrixXd x = lu.solve(b);
    const double scale = b.norm();
    const double residual = (a * x - b).norm();
    if (!(residual <= kMaxRelativeResidual * scale) && scale > 0.0) {
        throw Error(ErrorCode::SingularSystem,
                    "solve: residual " + std::to_string(residual) + " exceeds tolerance");
    }
    return x;
}

Eigen::VectorXd solve_checked(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
    Eigen::MatrixXd rhs = b;
    return solve_checked(a, rhs).col(0);
}

Eigen::MatrixXd inverse_checked(const Eigen::MatrixXd& a) {
    return solve_checked(a, Eigen::MatrixXd::Identity(a.rows(), a.cols()).eval());
}

Eigen::MatrixXd sample_covariance(const Eigen::MatrixXd& obs) {
    if (obs.rows() < 2) {
        throw Error(ErrorCode::InsufficientData, "covariance needs at least two observations");
    }
    const Eigen::RowVectorXd mean = obs.colwise().mean();
    const Eigen::MatrixXd centered = obs.rowwise() - mean;
    return (centered.transpose() * centered) / static_cast<double>(obs.rows() - 1);
}

Eigen::MatrixXd psd_factor(const Eigen::MatrixXd& a) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    if (eig.info() != Eigen::Success) {
        throw Error(ErrorCode::DegenerateCovariance, "eigen-decomposition failed");
    }
    Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * roots.asDiagonal();
}

bool is_symmetric(const Eigen::MatrixXd& a, double tol) {
    if (a.rows() != a.cols()) return false;
    return (a - a.transpose()).cwiseAbs().maxCoeff() <= tol * std::max(1.0, a.cwiseAbs().maxCoeff());
}

}  // namespace esgport::linalg
