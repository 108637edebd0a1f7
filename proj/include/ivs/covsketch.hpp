#pragma once

#include <Eigen/Dense>
#include <vector>

#include "ivs/linrep.hpp"
#include "ivs/operators.hpp"

namespace ivs::covsketch {

// A covariance fixed by the group: T_g Sigma T_g^T = Sigma for all g, hence
// block-sparse in the canonical basis.
struct InvariantCovariance {
    int n = 0;
    Eigen::MatrixXd Sigma;
    Eigen::MatrixXcd Lambda; // F^H Sigma F
    linrep::IrrepDecomposition decomp;

    double max_commutator(const linrep::GroupAction& action) const; // max_g ||T Sigma T^T - Sigma||
    double off_support_mass() const;
    void validate(const linrep::GroupAction& action, double commute_tol = 1e-9,
                  double support_tol = 1e-8) const;
};

// Group average (1/|G|) sum_g T_g M T_g^T. Idempotent; preserves symmetry and
// positive semidefiniteness. The full permutation group uses its closed form
// (mean diagonal / mean off-diagonal).
InvariantCovariance invariant_projection(const Eigen::MatrixXd& M,
                                         const linrep::GroupAction& action,
                                         const linrep::IrrepDecomposition& decomp);
InvariantCovariance invariant_projection(const Eigen::MatrixXd& M,
                                         const linrep::GroupAction& action);

// Same projection computed in the canonical basis (block-support masking);
// agrees with the group average — kept as the independent second route.
Eigen::MatrixXd invariant_projection_basis(const Eigen::MatrixXd& M,
                                           const linrep::IrrepDecomposition& decomp);

// Degrees of freedom of the invariant block pattern: sum_j c_j^2 complex
// parameters; `real` gives the real-embedded count for real matrices
// (conjugate-pair blocks share their parameters).
struct InvariantDof {
    std::int64_t complex_count = 0;
    std::int64_t real_count = 0;
};
InvariantDof invariant_dof(const linrep::IrrepDecomposition& decomp);

// Y = A Sigma A^T
Eigen::MatrixXd sketch_covariance(const operators::LinearOperator& A, const Eigen::MatrixXd& Sigma);
// Kronecker form of the same map: vec(Y) = (A (x) A) vec(Sigma), column-major.
Eigen::MatrixXd sketch_vec_map(const operators::LinearOperator& A);

// Real orthogonal-ish basis of the invariant matrix subspace in ambient
// coordinates (one matrix per real degree of freedom).
std::vector<Eigen::MatrixXd> invariant_matrix_basis(const linrep::IrrepDecomposition& decomp);

struct CovRecovery {
    Eigen::MatrixXd Sigma_hat;
    bool identifiable = false;
    int nullity = 0;
    int rank = 0;
    double residual = 0.0;
};

// Least squares over the free block entries of Lambda: identifiable iff the
// restricted map vec(Y) = L theta has full column rank; exact on noiseless
// identifiable instances.
CovRecovery recover_invariant_covariance(const operators::LinearOperator& A,
                                         const Eigen::MatrixXd& Y,
                                         const linrep::IrrepDecomposition& decomp);

struct RipEstimate {
    double delta_hat = 0.0;
    double ratio_min = 0.0;
    double ratio_max = 0.0;
    std::vector<int> draw_ranks; // realized rank of each sampled covariance
};

// Empirical restricted-isometry probe of the centered self-Kronecker map on
// random rank-limited invariant covariances. A lower bound on the true RIP
// constant: estimated, never certified.
RipEstimate estimate_rip(const operators::LinearOperator& A,
                         const linrep::IrrepDecomposition& decomp, int k, int trials,
                         std::uint64_t seed);

} // namespace ivs::covsketch
