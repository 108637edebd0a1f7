#include "ivs/covsketch.hpp"

#include <cmath>
#include <complex>

#include "ivs/rng.hpp"

namespace ivs::covsketch {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd group_average(const MatrixXd& M, const linrep::GroupAction& action) {
    if (!action.enumerated()) {
        // full permutation group: every entry position orbit is either the
        // diagonal or the off-diagonal, so the average is closed-form
        const int n = action.n;
        const double diag_mean = M.trace() / n;
        const double off_mean =
            n > 1 ? (M.sum() - M.trace()) / (static_cast<double>(n) * n - n) : 0.0;
        MatrixXd R = MatrixXd::Constant(n, n, off_mean);
        R.diagonal().setConstant(diag_mean);
        return R;
    }
    MatrixXd R = MatrixXd::Zero(action.n, action.n);
    for (std::size_t g = 0; g < action.size(); ++g) R += action.conjugate(g, M);
    return R / static_cast<double>(action.size());
}

// zero out everything outside the invariant support and average the s_j
// repeated copies inside each block (Lambda_j = B_j (x) I_{s_j})
MatrixXcd mask_to_support(const MatrixXcd& L, const linrep::IrrepDecomposition& decomp) {
    MatrixXcd out = MatrixXcd::Zero(L.rows(), L.cols());
    for (int j = 0; j < decomp.J; ++j) {
        const int off = decomp.block_offset(j);
        const int s = decomp.blocks[j].s;
        const int c = decomp.blocks[j].c;
        for (int a = 0; a < c; ++a)
            for (int b = 0; b < c; ++b) {
                std::complex<double> acc = 0.0;
                for (int t = 0; t < s; ++t) acc += L(off + a * s + t, off + b * s + t);
                acc /= static_cast<double>(s);
                for (int t = 0; t < s; ++t) out(off + a * s + t, off + b * s + t) = acc;
            }
    }
    return out;
}

} // namespace

double InvariantCovariance::max_commutator(const linrep::GroupAction& action) const {
    double worst = 0.0;
    if (!action.enumerated()) {
        for (const auto& gen : action.generators()) {
            MatrixXd C(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) C(i, j) = Sigma(gen[i], gen[j]);
            worst = std::max(worst, (C - Sigma).norm());
        }
        return worst;
    }
    for (std::size_t g = 0; g < action.size(); ++g)
        worst = std::max(worst, (action.conjugate(g, Sigma) - Sigma).norm());
    return worst;
}

double InvariantCovariance::off_support_mass() const {
    const MatrixXcd masked = mask_to_support(Lambda, decomp);
    return (Lambda - masked).norm();
}

void InvariantCovariance::validate(const linrep::GroupAction& action, double commute_tol,
                                   double support_tol) const {
    if (max_commutator(action) > commute_tol)
        throw std::logic_error("InvariantCovariance: not fixed by the action");
    if (off_support_mass() > support_tol)
        throw std::logic_error("InvariantCovariance: off-support mass above tolerance");
}

InvariantCovariance invariant_projection(const MatrixXd& M, const linrep::GroupAction& action,
                                         const linrep::IrrepDecomposition& decomp) {
    if (M.rows() != action.n || M.cols() != action.n)
        throw std::invalid_argument("invariant_projection: shape mismatch");
    InvariantCovariance out;
    out.n = action.n;
    out.Sigma = group_average(M, action);
    out.decomp = decomp;
    out.Lambda = decomp.F.adjoint() * out.Sigma * decomp.F;
    return out;
}

InvariantCovariance invariant_projection(const MatrixXd& M, const linrep::GroupAction& action) {
    return invariant_projection(M, action, linrep::decompose(action));
}

MatrixXd invariant_projection_basis(const MatrixXd& M, const linrep::IrrepDecomposition& decomp) {
    const MatrixXcd L = decomp.F.adjoint() * M.cast<std::complex<double>>() * decomp.F;
    const MatrixXcd masked = mask_to_support(L, decomp);
    return (decomp.F * masked * decomp.F.adjoint()).real();
}

InvariantDof invariant_dof(const linrep::IrrepDecomposition& decomp) {
    InvariantDof d;
    for (int j = 0; j < decomp.J; ++j) {
        const std::int64_t c = decomp.blocks[j].c;
        d.complex_count += c * c;
        // self-conjugate blocks carry c^2 real parameters; each conjugate
        // pair shares 2c^2 real parameters, counted once per member
        d.real_count += c * c;
    }
    return d;
}

MatrixXd sketch_covariance(const operators::LinearOperator& A, const MatrixXd& Sigma) {
    if (Sigma.rows() != A.n || Sigma.cols() != A.n)
        throw std::invalid_argument("sketch_covariance: shape mismatch");
    return A.entries * Sigma * A.entries.transpose();
}

MatrixXd sketch_vec_map(const operators::LinearOperator& A) {
    const int m = A.m, n = A.n;
    MatrixXd K(m * m, n * n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            // column (j*n + i) of A(x)A acting on vec: vec(a_i a_j^T) pattern
            const MatrixXd outer = A.entries.col(i) * A.entries.col(j).transpose();
            K.col(j * n + i) = Eigen::Map<const VectorXd>(outer.data(), m * m);
        }
    return K;
}

std::vector<MatrixXd> invariant_matrix_basis(const linrep::IrrepDecomposition& decomp) {
    std::vector<MatrixXd> basis;
    for (int j = 0; j < decomp.J; ++j) {
        const int partner = decomp.blocks[j].conjugate_of;
        if (partner >= 0 && partner < j) continue; // handled with its mate
        const int off = decomp.block_offset(j);
        const int s = decomp.blocks[j].s;
        const int c = decomp.blocks[j].c;
        const MatrixXcd Fj = decomp.F.middleCols(off, s * c);
        auto canonical = [&](int a, int b) {
            MatrixXcd C = MatrixXcd::Zero(s * c, s * c);
            for (int t = 0; t < s; ++t) C(a * s + t, b * s + t) = 1.0;
            return C;
        };
        for (int a = 0; a < c; ++a)
            for (int b = 0; b < c; ++b) {
                const MatrixXcd E = Fj * canonical(a, b) * Fj.adjoint();
                if (partner == j || partner < 0) {
                    basis.push_back(E.real()); // self-conjugate: Fj real, E real
                } else {
                    // pair contributes a real and an imaginary combination
                    basis.push_back(2.0 * E.real());
                    basis.push_back(-2.0 * E.imag());
                }
            }
    }
    return basis;
}

CovRecovery recover_invariant_covariance(const operators::LinearOperator& A, const MatrixXd& Y,
                                         const linrep::IrrepDecomposition& decomp) {
    if (A.n != decomp.n || Y.rows() != A.m || Y.cols() != A.m)
        throw std::invalid_argument("recover_invariant_covariance: shape mismatch");
    const auto basis = invariant_matrix_basis(decomp);
    const int dof = static_cast<int>(basis.size());
    MatrixXd L(A.m * A.m, dof);
    for (int t = 0; t < dof; ++t) {
        const MatrixXd col = A.entries * basis[t] * A.entries.transpose();
        L.col(t) = Eigen::Map<const VectorXd>(col.data(), A.m * A.m);
    }
    Eigen::JacobiSVD<MatrixXd> svd(L, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = (sv.size() > 0 && sv(0) > 0) ? 1e-8 * sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;

    const VectorXd y = Eigen::Map<const VectorXd>(Y.data(), A.m * A.m);
    VectorXd inv = VectorXd::Zero(sv.size());
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
    const VectorXd theta = svd.matrixV() * (inv.asDiagonal() * (svd.matrixU().transpose() * y));

    CovRecovery out;
    out.rank = rank;
    out.nullity = dof - rank;
    out.identifiable = (rank == dof);
    out.Sigma_hat = MatrixXd::Zero(A.n, A.n);
    for (int t = 0; t < dof; ++t) out.Sigma_hat += theta(t) * basis[t];
    out.residual = (L * theta - y).norm();
    return out;
}

RipEstimate estimate_rip(const operators::LinearOperator& A,
                         const linrep::IrrepDecomposition& decomp, int k, int trials,
                         std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("estimate_rip: trials must be positive");
    if (k < 1 || k > A.n) throw std::invalid_argument("estimate_rip: require 1 <= k <= n");
    const int n = A.n, m = A.m;
    // our operators carry variance 1/n; the centered ensemble is stated for
    // unit-variance entries
    const MatrixXd U = std::sqrt(static_cast<double>(n)) * A.entries;
    const double norm2 = static_cast<double>(m) * m + m; // E||vec(aa^T - I_m)||^2

    int max_c = 1;
    for (const auto& b : decomp.blocks) max_c = std::max(max_c, b.c);
    const int target_rank = std::min(n, k * max_c);

    RipEstimate est;
    est.ratio_min = std::numeric_limits<double>::infinity();
    est.ratio_max = 0.0;
    Rng rng(seed);
    for (int t = 0; t < trials; ++t) {
        MatrixXd Z(n, k);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < k; ++j) Z(i, j) = rng.next_gaussian();
        MatrixXd projected = invariant_projection_basis(Z * Z.transpose(), decomp);
        projected = 0.5 * (projected + projected.transpose().eval());

        // projection inflates the rank, so re-truncate to k * max_c; exact
        // rank control is not always possible (eigenvalue ties may straddle
        // the cut), so the achieved rank is recorded per draw
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(projected);
        const double emax = es.eigenvalues().cwiseAbs().maxCoeff();
        MatrixXd Sigma = MatrixXd::Zero(n, n);
        int rank = 0;
        for (int i = n - 1; i >= 0 && rank < target_rank; --i) {
            const double lam = es.eigenvalues()(i);
            if (lam <= 1e-12 * std::max(emax, 1e-300)) break;
            Sigma += lam * es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();
            ++rank;
        }
        est.draw_ranks.push_back(rank);
        if (rank == 0) continue;

        const MatrixXd Ymat = U * Sigma * U.transpose() - Sigma.trace() * MatrixXd::Identity(m, m);
        const double ratio = Ymat.squaredNorm() / norm2 / Sigma.squaredNorm();
        est.ratio_min = std::min(est.ratio_min, ratio);
        est.ratio_max = std::max(est.ratio_max, ratio);
    }
    est.delta_hat = std::max(1.0 - est.ratio_min, est.ratio_max - 1.0);
    return est;
}

} // namespace ivs::covsketch
