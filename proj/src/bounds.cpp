#include "ivs/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ivs::bounds {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

const char* verdict_str(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        default: return "undefined";
    }
}

Verdict check_ge(const Rational& m, const Rational& thr) { return m >= thr ? Verdict::pass : Verdict::fail; }
Verdict check_gt(const Rational& m, const Rational& thr) { return m > thr ? Verdict::pass : Verdict::fail; }

void fill_common(BoundReport& r, const Rational& m_eff, int n, int k, std::uint64_t num_ops) {
    if (n < 1 || k < 1 || k > n || num_ops < 1)
        throw std::invalid_argument("evaluate_bounds: require n,k,|G| positive and k <= n");
    r.n = n;
    r.k = k;
    r.num_ops = num_ops;
    r.necessary_multi = Rational(n, static_cast<std::int64_t>(num_ops));
    r.sufficient_multi = Rational(k) + r.necessary_multi;
    r.signal_recovery = 2 * static_cast<std::int64_t>(k);
    r.v_necessary_multi = check_ge(m_eff, r.necessary_multi);
    r.v_sufficient_multi = check_gt(m_eff, r.sufficient_multi);
    r.v_signal_recovery = check_gt(m_eff, Rational(r.signal_recovery));
}

} // namespace

BoundReport evaluate_bounds(int m, int n, int k, std::uint64_t num_ops) {
    if (m < 1) throw std::invalid_argument("evaluate_bounds: m must be positive");
    BoundReport r;
    r.m = m;
    r.group = "independent";
    fill_common(r, Rational(m), n, k, num_ops);
    return r;
}

BoundReport evaluate_bounds_mean(const Rational& m_mean, int n, int k, std::uint64_t num_ops) {
    BoundReport r;
    r.m = 0;
    r.group = "independent(mean m)";
    fill_common(r, m_mean, n, k, num_ops);
    return r;
}

BoundReport evaluate_bounds(int m, int n, int k, const linrep::IrrepDecomposition& decomp,
                            std::uint64_t num_ops) {
    BoundReport r = evaluate_bounds(m, n, k, num_ops);
    r.group = decomp.group_label.empty() ? "group" : decomp.group_label;

    const Rational ratio = linrep::max_multiplicity_ratio(decomp);
    r.necessary_group = ratio;
    r.v_necessary_group = check_ge(Rational(m), ratio);

    // stated ordering n/|G| <= max_j c_j/s_j must hold for a valid action
    if (ratio < r.necessary_multi)
        throw std::logic_error("evaluate_bounds: max c_j/s_j below n/|G|");

    std::int64_t max_c = 0;
    for (const auto& b : decomp.blocks) max_c = std::max<std::int64_t>(max_c, b.c);
    if (decomp.cyclic) {
        r.sufficient_cyclic = 2 * static_cast<std::int64_t>(k) + max_c + 1;
        r.v_sufficient_cyclic = (m > *r.sufficient_cyclic) ? Verdict::pass : Verdict::fail;
    }
    r.conjectured_general = Rational(2 * static_cast<std::int64_t>(k) + 1) + ratio;
    r.v_conjectured_general = check_gt(Rational(m), *r.conjectured_general);

    // covariance-sketch necessary bound (descending multiplicities)
    std::vector<std::int64_t> cs;
    for (const auto& b : decomp.blocks) cs.push_back(b.c);
    std::sort(cs.rbegin(), cs.rend());
    std::int64_t sum_topk = 0, sum_all = 0;
    for (std::size_t i = 0; i < cs.size(); ++i) {
        sum_all += cs[i] * cs[i];
        if (static_cast<int>(i) < k) sum_topk += cs[i] * cs[i];
    }
    r.cov_necessary_msq = std::min(2 * sum_topk, sum_all);
    r.v_cov_necessary = (static_cast<std::int64_t>(m) * m >= *r.cov_necessary_msq)
                            ? Verdict::pass
                            : Verdict::fail;

    // sanity: necessary thresholds never exceed their sufficient counterparts
    if (r.sufficient_cyclic && Rational(*r.sufficient_cyclic) < *r.necessary_group)
        throw std::logic_error("evaluate_bounds: ordering violated");
    if (*r.conjectured_general < *r.necessary_group)
        throw std::logic_error("evaluate_bounds: ordering violated");
    return r;
}

std::string BoundReport::to_kv_text() const {
    std::ostringstream os;
    os << "m=" << m << '\n';
    os << "n=" << n << '\n';
    os << "k=" << k << '\n';
    os << "num_ops=" << num_ops << '\n';
    os << "group=" << group << '\n';
    os << "necessary_multi=" << necessary_multi.to_string() << '\n';
    os << "necessary_multi_verdict=" << verdict_str(v_necessary_multi) << '\n';
    os << "sufficient_multi=" << sufficient_multi.to_string() << '\n';
    os << "sufficient_multi_verdict=" << verdict_str(v_sufficient_multi) << '\n';
    if (necessary_group) {
        os << "necessary_group=" << necessary_group->to_string() << '\n';
        os << "necessary_group_verdict=" << verdict_str(v_necessary_group) << '\n';
    }
    if (sufficient_cyclic) {
        os << "sufficient_cyclic=" << *sufficient_cyclic << '\n';
        os << "sufficient_cyclic_verdict=" << verdict_str(v_sufficient_cyclic) << '\n';
    }
    if (conjectured_general) {
        os << "conjectured_general=" << conjectured_general->to_string() << '\n';
        os << "conjectured_general_verdict=" << verdict_str(v_conjectured_general) << '\n';
        os << "conjecture=true\n";
    }
    os << "signal_recovery=" << signal_recovery << '\n';
    os << "signal_recovery_verdict=" << verdict_str(v_signal_recovery) << '\n';
    if (cov_necessary_msq) {
        os << "cov_necessary_msq=" << *cov_necessary_msq << '\n';
        os << "cov_necessary_verdict=" << verdict_str(v_cov_necessary) << '\n';
    }
    return os.str();
}

namespace {

// orthogonal projector onto the row space of A
MatrixXd row_space_projector(const MatrixXd& A) {
    return operators::pseudo_inverse(A) * A;
}

} // namespace

bool is_equivariant(const operators::LinearOperator& A, const linrep::GroupAction& action,
                    double tol) {
    if (A.n != action.n) throw std::invalid_argument("is_equivariant: dimension mismatch");
    const MatrixXd P0 = row_space_projector(A.entries);
    if (!action.enumerated()) {
        for (const auto& gen : action.generators()) {
            MatrixXd AT(A.m, A.n);
            std::vector<int> inv(gen.size());
            for (std::size_t i = 0; i < gen.size(); ++i) inv[gen[i]] = static_cast<int>(i);
            for (int c = 0; c < A.n; ++c) AT.col(c) = A.entries.col(inv[c]);
            if ((row_space_projector(AT) - P0).norm() >= tol) return false;
        }
        return true;
    }
    for (std::size_t g = 1; g < action.size(); ++g) {
        const MatrixXd AT = operators::compose_with_element(A, action, g);
        if ((row_space_projector(AT) - P0).norm() >= tol) return false;
    }
    return true;
}

bool family_shares_range(const operators::OperatorFamily& family, double tol) {
    if (family.ops.empty()) throw std::invalid_argument("family_shares_range: empty family");
    const MatrixXd P0 = row_space_projector(family.ops[0].entries);
    for (std::size_t g = 1; g < family.size(); ++g)
        if ((row_space_projector(family.ops[g].entries) - P0).norm() >= tol) return false;
    return true;
}

int stacked_rank(const operators::OperatorFamily& family, double tol) {
    if (family.ops.empty()) throw std::invalid_argument("stacked_rank: empty family");
    const int n = family.n();
    MatrixXd S(family.total_measurements(), n);
    int r = 0;
    for (const auto& op : family.ops) {
        S.middleRows(r, op.m) = op.entries;
        r += op.m;
    }
    Eigen::JacobiSVD<MatrixXd> svd(S);
    const auto& sv = svd.singularValues();
    const double cutoff = (sv.size() > 0) ? tol * sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;

    if (family.provenance == operators::FamilyProvenance::g_related && family.action &&
        family.action->is_abelian()) {
        const MatrixXd R = linrep::orbit_gram(*family.action, family.base->entries);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(R);
        const double emax = es.eigenvalues().cwiseAbs().maxCoeff();
        int rank_gram = 0;
        for (int i = 0; i < es.eigenvalues().size(); ++i)
            if (es.eigenvalues()(i) > tol * std::max(emax, 1e-300)) ++rank_gram;
        if (rank_gram != rank)
            throw linrep::NumericalDegeneracy("stacked_rank: orbit_gram cross-check disagrees");
    }
    return rank;
}

namespace {

void check_counterexample_params(int n, int d) {
    if (n < 2 || n % 2 != 0 || d < 1 || n <= 2 * d || n / 2 + 2 * d > n)
        throw std::invalid_argument("reflection_sparse_counterexample: invalid (n, d)");
}

// deterministic generic filler for the free coordinates of v
VectorXd default_counterexample_v(int n, int d) {
    const int sup = n / 2 + 2 * d;
    VectorXd v = VectorXd::Zero(n);
    for (int j = 0; j < sup; ++j) v(j) = 1.0 + static_cast<double>(j + 1) / (n + 1);
    return v;
}

} // namespace

ReflectionCounterexample reflection_sparse_counterexample(int n, int d) {
    check_counterexample_params(n, d);
    return reflection_sparse_counterexample(n, d, default_counterexample_v(n, d));
}

ReflectionCounterexample reflection_sparse_counterexample(int n, int d, const VectorXd& v_in) {
    check_counterexample_params(n, d);
    if (v_in.size() != n)
        throw std::invalid_argument("reflection_sparse_counterexample: v has wrong length");

    const int half = n / 2;
    const int sup = half + 2 * d;

    ReflectionCounterexample out;
    MatrixXd Tr = MatrixXd::Identity(n, n);
    for (int j = half; j < n; ++j) Tr(j, j) = -1.0;
    out.action = linrep::GroupAction::from_matrices(n, {MatrixXd::Identity(n, n), Tr},
                                                    linrep::GroupFamily::custom);
    out.action.labels = {"e", "r"};

    out.v = v_in;
    for (int j = sup; j < n; ++j) out.v(j) = 0.0; // free coordinates vanish by construction

    out.x1 = VectorXd::Zero(n);
    out.x2 = VectorXd::Zero(n);
    for (int i = 0; i < d; ++i) {
        out.x1(half + i) = 2.0 * out.v(half + i);
        out.x2(half + d + i) = -2.0 * out.v(half + d + i);
    }

    // columns of [x1 - T_e v, x2 - T_r v]
    VectorXd col1 = out.x1 - out.v;
    VectorXd Trv = out.v;
    for (int j = half; j < n; ++j) Trv(j) = -Trv(j);
    VectorXd col2 = out.x2 - Trv;

    out.exact_equal = (col1.array() == col2.array()).all();
    out.mu = col1;
    out.support_size = sup;
    for (int j = sup; j < n; ++j)
        if (out.mu(j) != 0.0) out.exact_equal = false;
    out.valid = out.exact_equal && (out.x1.norm() > 0.0 || out.x2.norm() > 0.0);
    return out;
}

CounterexampleVerdict counterexample_defeats(const MatrixXd& A, int n, int d) {
    if (A.cols() != n) throw std::invalid_argument("counterexample_defeats: shape mismatch");
    const int sup = n / 2 + 2 * d;
    const MatrixXd restricted = A.leftCols(sup);
    Eigen::JacobiSVD<MatrixXd> svd(restricted, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double cutoff = (sv.size() > 0 && sv(0) > 0) ? 1e-10 * sv(0) : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) ++rank;

    CounterexampleVerdict verdict;
    if (rank >= sup) return verdict; // trivial nullspace: construction does not defeat A
    const VectorXd kernel = svd.matrixV().col(sup - 1);
    // invert the sign pattern of mu(v) so the certificate's mu equals the
    // kernel vector: mu = (-v, +v, -v) over the three support blocks
    const int half = n / 2;
    VectorXd v = VectorXd::Zero(n);
    for (int j = 0; j < half; ++j) v(j) = -kernel(j);
    for (int j = half; j < half + d; ++j) v(j) = kernel(j);
    for (int j = half + d; j < sup; ++j) v(j) = -kernel(j);
    const auto cert = reflection_sparse_counterexample(n, d, v);
    verdict.violated = true;
    verdict.witness_v = cert.v;
    verdict.residual = (A * cert.mu).norm();
    return verdict;
}

HalfMaskAmbiguity half_mask_covariance_ambiguity(int n) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("half_mask_covariance_ambiguity: n must be even");
    const int half = n / 2;
    std::vector<int> first(half), second(half);
    for (int i = 0; i < half; ++i) {
        first[i] = i;
        second[i] = half + i;
    }
    HalfMaskAmbiguity out;
    out.A1 = operators::inpainting_operator(n, first);
    out.A2 = operators::inpainting_operator(n, second);
    out.Sigma_a = MatrixXd::Identity(n, n);
    out.Sigma_b = MatrixXd::Identity(n, n);
    out.Sigma_b.topRightCorner(half, half) = 0.1 * MatrixXd::Identity(half, half);
    out.Sigma_b.bottomLeftCorner(half, half) = 0.1 * MatrixXd::Identity(half, half);
    return out;
}

} // namespace ivs::bounds
