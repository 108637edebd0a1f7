#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "ivs/linrep.hpp"
#include "ivs/operators.hpp"
#include "ivs/rational.hpp"

namespace ivs::bounds {

enum class Verdict { pass, fail, undefined };

// Identifiability thresholds for a given (m, n, k) and group structure. All
// thresholds in exact rational arithmetic; necessary conditions use >=,
// sufficient conditions use strict >. The conjectured bound is surfaced with
// an explicit flag and never asserted by tests.
struct BoundReport {
    int m = 0, n = 0, k = 0;
    std::uint64_t num_ops = 0;
    std::string group;

    Rational necessary_multi;                    // m >= n/|G|
    Rational sufficient_multi;                   // m > k + n/|G|
    std::optional<Rational> necessary_group;     // m >= max_j c_j/s_j
    std::optional<std::int64_t> sufficient_cyclic;   // m > 2k + max_j c_j + 1 (cyclic only)
    std::optional<Rational> conjectured_general; // m > 2k + max_j c_j/s_j + 1
    std::int64_t signal_recovery = 0;            // m > 2k
    // covariance-sketch necessary bound, kept as integer m^2 thresholds:
    // m^2 >= min(2 * sum_{i<=k} c_(i)^2, sum_i c_i^2), c sorted descending
    std::optional<std::int64_t> cov_necessary_msq;

    Verdict v_necessary_multi = Verdict::undefined;
    Verdict v_sufficient_multi = Verdict::undefined;
    Verdict v_necessary_group = Verdict::undefined;
    Verdict v_sufficient_cyclic = Verdict::undefined;
    Verdict v_conjectured_general = Verdict::undefined;
    Verdict v_signal_recovery = Verdict::undefined;
    Verdict v_cov_necessary = Verdict::undefined;
    bool conjecture_flag = true; // conjectured_general is a conjecture, not a theorem

    // flat key=value block consumed by the CLI and the experiment harness
    std::string to_kv_text() const;
};

// Independent-operator bounds only (no group structure known).
BoundReport evaluate_bounds(int m, int n, int k, std::uint64_t num_ops);
// Full report from a canonical decomposition; num_ops is |G|.
BoundReport evaluate_bounds(int m, int n, int k, const linrep::IrrepDecomposition& decomp,
                            std::uint64_t num_ops);
// Different-measurement-count extension: thresholds compared against the mean
// of the per-operator m_g (stated in the source material without proof).
BoundReport evaluate_bounds_mean(const Rational& m_mean, int n, int k, std::uint64_t num_ops);

// True iff the row-space projectors of A*T_g coincide with that of A for all
// g (equivalently, A is an equivariant map). For the full permutation group
// the generators are checked; projector equality propagates to products.
bool is_equivariant(const operators::LinearOperator& A, const linrep::GroupAction& action,
                    double tol = 1e-6);

// True iff all operators in the family share one row-space projector (the
// non-identifiable worst case).
bool family_shares_range(const operators::OperatorFamily& family, double tol = 1e-6);

// Numerical rank of the vertically stacked operators; for g_related families
// cross-checked against rank(orbit_gram).
int stacked_rank(const operators::OperatorFamily& family, double tol = 1e-8);

// Adversarial d-sparse construction for the sign-flip reflection
// representation T_r = diag(I_{n/2}, -I_{n/2}): two disjointly supported
// sparse signals and a certificate that the two difference columns coincide
// and are supported on the first n/2 + 2d coordinates.
struct ReflectionCounterexample {
    linrep::GroupAction action;
    Eigen::VectorXd x1, x2, v, mu;
    int support_size = 0;  // n/2 + 2d
    bool exact_equal = false;
    bool valid = false;    // false when v makes x1 = x2 = 0
};

ReflectionCounterexample reflection_sparse_counterexample(int n, int d);
ReflectionCounterexample reflection_sparse_counterexample(int n, int d, const Eigen::VectorXd& v);

// Given a concrete operator, reports whether the construction defeats it:
// true iff A restricted to the first n/2+2d columns has a nontrivial
// nullspace, in which case the returned witness v satisfies A*mu(v) = 0.
struct CounterexampleVerdict {
    bool violated = false;
    Eigen::VectorXd witness_v;
    double residual = 0.0; // ||A * mu|| for the witness
};
CounterexampleVerdict counterexample_defeats(const Eigen::MatrixXd& A, int n, int d);

// Working-note inpainting ambiguity: two half-mask selectors and two distinct
// PSD covariances with identical observed blocks.
struct HalfMaskAmbiguity {
    operators::LinearOperator A1, A2;
    Eigen::MatrixXd Sigma_a, Sigma_b;
};
HalfMaskAmbiguity half_mask_covariance_ambiguity(int n);

} // namespace ivs::bounds
