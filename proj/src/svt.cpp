#include "ivs/svt.hpp"

#include <cmath>

namespace ivs::svt {

using Eigen::MatrixXd;
using Eigen::VectorXd;

MatrixXd singular_value_shrink(const MatrixXd& M, double tau) {
    // strongly rectangular iterates: factor through the small-side Gram
    // matrix; only singular values above tau survive, so the squared
    // spectrum stays well conditioned where it matters
    if (M.rows() * 4 <= M.cols() || M.cols() * 4 <= M.rows()) {
        const bool wide = M.cols() > M.rows();
        const MatrixXd gram = wide ? MatrixXd(M * M.transpose()) : MatrixXd(M.transpose() * M);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(gram);
        const int d = static_cast<int>(gram.rows());
        std::vector<double> sv;
        for (int i = d - 1; i >= 0; --i) {
            const double lam = es.eigenvalues()(i);
            if (lam <= tau * tau) break;
            sv.push_back(std::sqrt(lam));
        }
        const int r = static_cast<int>(sv.size());
        if (r == 0) return MatrixXd::Zero(M.rows(), M.cols());
        MatrixXd U(d, r);
        VectorXd shrunk(r), inv(r);
        for (int i = 0; i < r; ++i) {
            U.col(i) = es.eigenvectors().col(d - 1 - i);
            shrunk(i) = sv[i] - tau;
            inv(i) = 1.0 / sv[i];
        }
        if (wide) {
            const MatrixXd Vr = M.transpose() * U * inv.asDiagonal();
            return U * shrunk.asDiagonal() * Vr.transpose();
        }
        const MatrixXd Ur = M * U * inv.asDiagonal();
        return Ur * shrunk.asDiagonal() * U.transpose();
    }
    Eigen::BDCSVD<MatrixXd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const VectorXd& sv = svd.singularValues();
    int r = 0;
    while (r < sv.size() && sv(r) > tau) ++r;
    if (r == 0) return MatrixXd::Zero(M.rows(), M.cols());
    const VectorXd kept = sv.head(r).array() - tau;
    return svd.matrixU().leftCols(r) * kept.asDiagonal() * svd.matrixV().leftCols(r).transpose();
}

RecoveryResult complete(const operators::OperatorFamily& family, const models::SampleSet& samples,
                        const SolverParams& params) {
    const int n = family.n();
    const int N = static_cast<int>(samples.assigned_ops.size());
    if (N == 0 || static_cast<int>(samples.Y.size()) != N)
        throw std::invalid_argument("svt::complete: empty or inconsistent sample set");
    for (int i = 0; i < N; ++i) {
        const int g = samples.assigned_ops[i];
        if (g < 0 || g >= static_cast<int>(family.size()))
            throw std::invalid_argument("svt::complete: operator index out of range");
        if (samples.Y[i].size() != family.ops[g].m)
            throw std::invalid_argument("svt::complete: measurement length mismatch");
    }

    int total_m = 0;
    for (int i = 0; i < N; ++i) total_m += family.ops[samples.assigned_ops[i]].m;
    const double tau = params.tau > 0.0 ? params.tau : 5.0 * std::sqrt(double(n) * double(N));
    const double step =
        params.step > 0.0 ? params.step : 1.2 * (double(n) * double(N)) / double(total_m);
    if (params.tol <= 0.0) throw std::invalid_argument("svt::complete: tol must be positive");

    // columns grouped by operator so the hot loop runs on gemms
    std::vector<std::vector<int>> cols_of(family.size());
    for (int i = 0; i < N; ++i) cols_of[samples.assigned_ops[i]].push_back(i);

    std::vector<VectorXd> z(N);
    for (int i = 0; i < N; ++i) z[i] = VectorXd::Zero(samples.Y[i].size());

    RecoveryResult out;
    out.X_hat = MatrixXd::Zero(n, N);
    MatrixXd X = MatrixXd::Zero(n, N);
    MatrixXd W = MatrixXd::Zero(n, N);
    double best_residual = std::numeric_limits<double>::infinity();
    out.residual_history.reserve(params.max_iters);

    for (int it = 1; it <= params.max_iters; ++it) {
        // primal: X = shrink_tau( [A_{g_i}^T z_i]_i )
        for (std::size_t g = 0; g < family.size(); ++g) {
            if (cols_of[g].empty()) continue;
            const auto& A = family.ops[g].entries;
            MatrixXd Z(A.rows(), cols_of[g].size());
            for (std::size_t t = 0; t < cols_of[g].size(); ++t) Z.col(t) = z[cols_of[g][t]];
            const MatrixXd Wg = A.transpose() * Z;
            for (std::size_t t = 0; t < cols_of[g].size(); ++t) W.col(cols_of[g][t]) = Wg.col(t);
        }
        X = singular_value_shrink(W, tau);

        // dual: z_i += step * (y_i - A_{g_i} x_i); residual in the same pass
        double residual = 0.0;
        for (std::size_t g = 0; g < family.size(); ++g) {
            if (cols_of[g].empty()) continue;
            const auto& A = family.ops[g].entries;
            MatrixXd Xg(n, cols_of[g].size());
            for (std::size_t t = 0; t < cols_of[g].size(); ++t) Xg.col(t) = X.col(cols_of[g][t]);
            const MatrixXd AX = A * Xg;
            for (std::size_t t = 0; t < cols_of[g].size(); ++t) {
                const int i = cols_of[g][t];
                const VectorXd r = samples.Y[i] - AX.col(t);
                residual = std::max(residual, r.norm() / std::max(1.0, samples.Y[i].norm()));
                z[i] += step * r;
            }
        }
        out.residual_history.push_back(residual);

        if (residual < best_residual) {
            best_residual = residual;
            out.X_hat = X;
            out.iterations = it;
        } else if (std::isfinite(best_residual) && residual > 10.0 * best_residual &&
                   best_residual > 0.0) {
            throw DivergenceDetected(it, residual, best_residual);
        }
        if (!std::isfinite(residual)) throw DivergenceDetected(it, residual, best_residual);

        if (residual < params.tol) {
            out.converged = true;
            break;
        }
    }
    out.final_residual = best_residual;
    return out;
}

std::pair<bool, double> recovery_success(const MatrixXd& X_hat, const MatrixXd& X_true) {
    if (X_hat.rows() != X_true.rows() || X_hat.cols() != X_true.cols())
        throw std::invalid_argument("recovery_success: shape mismatch");
    const double denom = X_true.squaredNorm();
    if (denom == 0.0) throw std::invalid_argument("recovery_success: zero-norm reference");
    const double rel = (X_hat - X_true).squaredNorm() / denom;
    return {rel < 1e-1, rel};
}

} // namespace ivs::svt
