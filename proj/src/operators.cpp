#include "ivs/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>

#include "ivs/rng.hpp"

namespace ivs::operators {

using Eigen::MatrixXd;

int OperatorFamily::total_measurements() const {
    int t = 0;
    for (const auto& op : ops) t += op.m;
    return t;
}

double OperatorFamily::mean_measurements() const {
    return ops.empty() ? 0.0 : static_cast<double>(total_measurements()) / static_cast<double>(ops.size());
}

LinearOperator gaussian_operator(int m, int n, std::uint64_t seed) {
    if (m < 1 || n < 1 || m > n)
        throw std::invalid_argument("gaussian_operator: require 1 <= m <= n");
    LinearOperator op;
    op.m = m;
    op.n = n;
    op.kind = OperatorKind::gaussian;
    op.seed = seed;
    op.entries.resize(m, n);
    Rng rng(seed);
    const double sigma = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < n; ++j) op.entries(i, j) = sigma * rng.next_gaussian();
    return op;
}

LinearOperator inpainting_operator(int n, const std::vector<int>& kept) {
    if (kept.empty()) throw std::invalid_argument("inpainting_operator: kept set is empty");
    std::set<int> sorted(kept.begin(), kept.end());
    if (sorted.size() != kept.size())
        throw std::invalid_argument("inpainting_operator: duplicate indices");
    if (*sorted.begin() < 0 || *sorted.rbegin() >= n)
        throw std::invalid_argument("inpainting_operator: index out of range");
    LinearOperator op;
    op.m = static_cast<int>(sorted.size());
    op.n = n;
    op.kind = OperatorKind::inpainting;
    op.entries = MatrixXd::Zero(op.m, n);
    int r = 0;
    for (int idx : sorted) op.entries(r++, idx) = 1.0;
    return op;
}

LinearOperator fourier_rows_operator(int n, const std::vector<int>& rows) {
    if (rows.empty()) throw std::invalid_argument("fourier_rows_operator: empty frequency set");
    std::set<int> freqs;
    for (int f : rows) {
        if (f < 0 || f >= n) throw std::invalid_argument("fourier_rows_operator: frequency out of range");
        freqs.insert(std::min(f, (n - f) % n)); // fold conjugate pair onto its low index
    }
    std::vector<Eigen::RowVectorXd> out;
    const double pi = 3.14159265358979323846;
    for (int f : freqs) {
        if (f == 0 || (n % 2 == 0 && f == n / 2)) {
            Eigen::RowVectorXd row(n);
            for (int t = 0; t < n; ++t)
                row(t) = std::cos(2.0 * pi * f * t / n) / std::sqrt(static_cast<double>(n));
            out.push_back(row);
        } else {
            Eigen::RowVectorXd rc(n), rs(n);
            const double scale = std::sqrt(2.0 / static_cast<double>(n));
            for (int t = 0; t < n; ++t) {
                rc(t) = scale * std::cos(2.0 * pi * f * t / n);
                rs(t) = scale * std::sin(2.0 * pi * f * t / n);
            }
            out.push_back(rc);
            out.push_back(rs);
        }
    }
    LinearOperator op;
    op.m = static_cast<int>(out.size());
    op.n = n;
    op.kind = OperatorKind::fourier_rows;
    op.entries.resize(op.m, n);
    for (int i = 0; i < op.m; ++i) op.entries.row(i) = out[i];
    return op;
}

Eigen::MatrixXd compose_with_element(const LinearOperator& base,
                                     const linrep::GroupAction& action, std::size_t g) {
    if (action.permutation_backed()) {
        // column c of base*T_g is column p^{-1}(c) of base; pure copies, exact
        const auto& p = action.perm(g);
        std::vector<int> inv(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) inv[p[i]] = static_cast<int>(i);
        MatrixXd R(base.m, base.n);
        for (int c = 0; c < base.n; ++c) R.col(c) = base.entries.col(inv[c]);
        return R;
    }
    return base.entries * action.matrix(g);
}

OperatorFamily g_related_family(const LinearOperator& base, const linrep::GroupAction& action) {
    if (base.n != action.n) throw std::invalid_argument("g_related_family: dimension mismatch");
    if (!action.enumerated())
        throw std::invalid_argument("g_related_family: group must be enumerated");
    OperatorFamily fam;
    fam.provenance = FamilyProvenance::g_related;
    fam.action = action;
    fam.base = base;
    fam.ops.reserve(action.size());
    for (std::size_t g = 0; g < action.size(); ++g) {
        LinearOperator op;
        op.m = base.m;
        op.n = base.n;
        op.kind = (g == 0) ? base.kind : OperatorKind::custom;
        op.seed = base.seed;
        op.entries = compose_with_element(base, action, g);
        fam.ops.push_back(std::move(op));
    }
    return fam;
}

OperatorFamily independent_family(int count, int m, int n, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("independent_family: count must be positive");
    OperatorFamily fam;
    fam.provenance = FamilyProvenance::independent;
    fam.ops.reserve(count);
    for (int g = 0; g < count; ++g)
        fam.ops.push_back(gaussian_operator(m, n, seed + static_cast<std::uint64_t>(g)));
    return fam;
}

Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& A) {
    Eigen::JacobiSVD<MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cutoff = (sv.size() > 0) ? 1e-10 * sv(0) : 0.0;
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > cutoff) inv(i) = 1.0 / sv(i);
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().transpose();
}

Eigen::MatrixXd pseudo_inverse(const LinearOperator& op) { return pseudo_inverse(op.entries); }

namespace {

constexpr char kMagic[6] = {'I', 'V', 'S', 'O', 'P', '1'};

template <typename T>
void write_le(std::ofstream& f, T v) {
    f.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_le(std::ifstream& f) {
    T v{};
    f.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

} // namespace

void save_operator(const LinearOperator& op, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("save_operator: cannot open " + path);
    f.write(kMagic, 6);
    write_le<std::uint32_t>(f, static_cast<std::uint32_t>(op.m));
    write_le<std::uint32_t>(f, static_cast<std::uint32_t>(op.n));
    write_le<std::uint32_t>(f, static_cast<std::uint32_t>(op.kind));
    write_le<std::uint64_t>(f, op.seed);
    for (int i = 0; i < op.m; ++i)
        for (int j = 0; j < op.n; ++j) write_le<double>(f, op.entries(i, j));
    if (!f) throw std::runtime_error("save_operator: write failed for " + path);
}

LinearOperator load_operator(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("load_operator: cannot open " + path);
    char magic[6];
    f.read(magic, 6);
    if (!f || std::memcmp(magic, kMagic, 6) != 0)
        throw std::runtime_error("load_operator: bad magic in " + path);
    LinearOperator op;
    op.m = static_cast<int>(read_le<std::uint32_t>(f));
    op.n = static_cast<int>(read_le<std::uint32_t>(f));
    op.kind = static_cast<OperatorKind>(read_le<std::uint32_t>(f));
    op.seed = read_le<std::uint64_t>(f);
    op.entries.resize(op.m, op.n);
    for (int i = 0; i < op.m; ++i)
        for (int j = 0; j < op.n; ++j) op.entries(i, j) = read_le<double>(f);
    if (!f) throw std::runtime_error("load_operator: truncated file " + path);
    return op;
}

} // namespace ivs::operators
