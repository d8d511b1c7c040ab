#include "noisecal/least_squares.hpp"

#include <cmath>
#include <limits>

namespace noisecal {

Eigen::MatrixXd LeastSquaresSolution::covariance() const {
    const auto m = residuals.size();
    const auto n = x.size();
    if (m <= n) {
        return Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
    }
    const double s2 = residuals.squaredNorm() / static_cast<double>(m - n);
    const Eigen::MatrixXd jtj = jacobian.transpose() * jacobian;
    return s2 * jtj.completeOrthogonalDecomposition().pseudoInverse();
}

Eigen::Index LeastSquaresSolution::jacobian_rank() const {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(jacobian);
    qr.setThreshold(1e-10);
    return qr.rank();
}

LeastSquaresSolution solve_least_squares(const ResidualFunction& f, Eigen::VectorXd x0, Eigen::Index n_residuals,
                                         const LeastSquaresOptions& options) {
    const auto n = x0.size();
    LeastSquaresSolution sol;
    sol.x = std::move(x0);
    sol.residuals.resize(n_residuals);
    sol.jacobian.resize(n_residuals, n);
    f(sol.x, sol.residuals, sol.jacobian);
    double cost = sol.residuals.squaredNorm();

    double lambda = options.initial_damping;
    Eigen::VectorXd r_trial(n_residuals);
    Eigen::MatrixXd j_trial(n_residuals, n);

    for (int it = 0; it < options.max_iterations; ++it) {
        sol.iterations = it + 1;
        const Eigen::MatrixXd jtj = sol.jacobian.transpose() * sol.jacobian;
        const Eigen::VectorXd grad = sol.jacobian.transpose() * sol.residuals;
        if (cost == 0.0 || grad.lpNorm<Eigen::Infinity>() == 0.0) {
            sol.converged = true;
            break;
        }

        bool accepted = false;
        for (int attempt = 0; attempt < 40; ++attempt) {
            Eigen::MatrixXd damped = jtj;
            damped.diagonal() += lambda * jtj.diagonal().cwiseMax(1e-300);
            const Eigen::VectorXd step = damped.ldlt().solve(-grad);
            if (!step.allFinite()) {
                lambda *= 10.0;
                continue;
            }
            const Eigen::VectorXd x_trial = sol.x + step;
            f(x_trial, r_trial, j_trial);
            const double trial_cost = r_trial.squaredNorm();
            if (std::isfinite(trial_cost) && trial_cost <= cost) {
                const double rel_step = step.norm() / (sol.x.norm() + options.rel_tol);
                const double rel_cost = (cost - trial_cost) / std::max(cost, 1e-300);
                sol.x = x_trial;
                sol.residuals = r_trial;
                sol.jacobian = j_trial;
                cost = trial_cost;
                lambda = std::max(lambda / 10.0, 1e-12);
                accepted = true;
                if (rel_step < options.rel_tol || rel_cost < options.rel_tol * options.rel_tol) {
                    sol.converged = true;
                }
                break;
            }
            lambda *= 10.0;
        }
        if (!accepted) {
            // No descent direction left at this damping: we are at a (numerical) minimum.
            sol.converged = true;
        }
        if (sol.converged) break;
    }
    return sol;
}

}  // namespace noisecal
