#pragma once

#include <functional>

#include <Eigen/Dense>

namespace noisecal {

/// Residual callback: fills r (size m) and J (m x n, dr/dx) at x.
using ResidualFunction = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& r, Eigen::MatrixXd& jac)>;

struct LeastSquaresOptions {
    double rel_tol = 1e-10;
    int max_iterations = 200;
    double initial_damping = 1e-3;
};

struct LeastSquaresSolution {
    Eigen::VectorXd x;
    Eigen::VectorXd residuals;
    Eigen::MatrixXd jacobian;
    int iterations = 0;
    bool converged = false;

    double residual_norm() const { return residuals.norm(); }
    /// s^2 (J^T J)^-1 with s^2 = |r|^2 / (m - n). NaN entries when m == n.
    Eigen::MatrixXd covariance() const;
    /// Numerical rank of the Jacobian at the solution.
    Eigen::Index jacobian_rank() const;
};

/// Gauss-Newton with Levenberg damping on the normal equations.
LeastSquaresSolution solve_least_squares(const ResidualFunction& f, Eigen::VectorXd x0, Eigen::Index n_residuals,
                                         const LeastSquaresOptions& options = {});

}  // namespace noisecal
