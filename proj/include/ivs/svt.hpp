#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <vector>

#include "ivs/models.hpp"
#include "ivs/operators.hpp"

namespace ivs::svt {

class DivergenceDetected : public std::runtime_error {
public:
    DivergenceDetected(int iteration, double residual, double min_residual)
        : std::runtime_error("svt: residual diverged (iteration " + std::to_string(iteration) +
                             ", residual " + std::to_string(residual) + " vs minimum " +
                             std::to_string(min_residual) + "); step too large"),
          iteration(iteration), residual(residual), min_residual(min_residual) {}
    int iteration;
    double residual;
    double min_residual;
};

struct SolverParams {
    // tau/step <= 0 select the size-dependent defaults 5*sqrt(n*N) and
    // 1.2*(n*N)/(total measurement count), the published SVT heuristics.
    double tau = 0.0;
    double step = 0.0;
    int max_iters = 500;
    double tol = 1e-4;
    std::uint64_t seed = 0;
};

struct RecoveryResult {
    Eigen::MatrixXd X_hat;
    int iterations = 0;
    double final_residual = 0.0; // max_i ||y_i - A_{g_i} x_i|| / max(1, ||y_i||) at the best iterate
    bool converged = false;
    std::vector<double> residual_history;
};

// Soft-thresholds the singular values of M by tau.
Eigen::MatrixXd singular_value_shrink(const Eigen::MatrixXd& M, double tau);

// Nuclear-norm completion under per-column linear constraints A_{g_i} x_i =
// y_i: singular-value-thresholding iteration with per-column dual ascent,
// returning the best iterate by residual. Deterministic for fixed inputs.
// Throws DivergenceDetected if the residual grows by more than 10x from its
// running minimum.
RecoveryResult complete(const operators::OperatorFamily& family, const models::SampleSet& samples,
                        const SolverParams& params = {});

// (success, relative squared error): success iff
// sum_i ||xhat_i - x_i||^2 / sum_i ||x_i||^2 < 1e-1.
std::pair<bool, double> recovery_success(const Eigen::MatrixXd& X_hat, const Eigen::MatrixXd& X_true);

} // namespace ivs::svt
