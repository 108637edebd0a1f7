#include "ivs/models.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "ivs/rng.hpp"

namespace ivs::models {

using Eigen::MatrixXd;
using Eigen::VectorXd;

SubspaceModel random_subspace(int n, int k, std::uint64_t seed) {
    if (k < 1 || k > n) throw std::invalid_argument("random_subspace: require 1 <= k <= n");
    MatrixXd G(n, k);
    Rng rng(seed);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < k; ++j) G(i, j) = rng.next_gaussian();
    Eigen::HouseholderQR<MatrixXd> qr(G);
    MatrixXd Q = qr.householderQ() * MatrixXd::Identity(n, k);
    const MatrixXd R = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    for (int j = 0; j < k; ++j)
        if (R(j, j) < 0.0) Q.col(j) = -Q.col(j); // positive-diagonal sign convention
    SubspaceModel m;
    m.n = n;
    m.k = k;
    m.basis = std::move(Q);
    m.seed = seed;
    return m;
}

SubspaceModel triangular_atom_model(int n) {
    if (n < 4) throw std::invalid_argument("triangular_atom_model: n must be at least 4");
    const int width = (n + 1) / 2;
    const int center = (n + 3) / 4; // ceil(n/4)
    const int start = std::max(0, center - width / 2);
    VectorXd phi = VectorXd::Zero(n);
    for (int i = 0; i < width && start + i < n; ++i)
        phi(start + i) = static_cast<double>(std::min(i + 1, width - i));
    phi.normalize();
    SubspaceModel m;
    m.n = n;
    m.k = 1;
    m.basis = phi;
    return m;
}

SampleSet sample_with_family(const SubspaceModel& model, const operators::OperatorFamily& family,
                             int N, std::uint64_t seed) {
    if (family.n() != model.n) throw std::invalid_argument("sample_with_family: dimension mismatch");
    if (N < 1) throw std::invalid_argument("sample_with_family: N must be positive");
    SampleSet set;
    set.X.resize(model.n, N);
    set.assigned_ops.resize(N);
    set.Y.reserve(N);
    Rng rng(seed);
    VectorXd c(model.k);
    for (int i = 0; i < N; ++i) {
        const int g = static_cast<int>(rng.next_below(family.size()));
        for (int j = 0; j < model.k; ++j) c(j) = rng.next_gaussian();
        set.X.col(i) = model.basis * c;
        set.assigned_ops[i] = g;
        set.Y.push_back(family.ops[g].entries * set.X.col(i));
    }
    return set;
}

SampleSet sample_invariant(const InvariantUnionModel& model,
                           const operators::LinearOperator& base_op, int N, std::uint64_t seed) {
    if (base_op.n != model.base.n || model.action.n != model.base.n)
        throw std::invalid_argument("sample_invariant: dimension mismatch");
    if (N < 1) throw std::invalid_argument("sample_invariant: N must be positive");
    const auto family = operators::g_related_family(base_op, model.action);
    SampleSet set;
    set.X.resize(model.base.n, N);
    set.assigned_ops.resize(N);
    set.Y.reserve(N);
    Rng rng(seed);
    VectorXd c(model.base.k);
    for (int i = 0; i < N; ++i) {
        const int g = static_cast<int>(rng.next_below(family.size()));
        for (int j = 0; j < model.base.k; ++j) c(j) = rng.next_gaussian();
        const VectorXd x_base = model.base.basis * c;
        set.X.col(i) = model.action.apply(static_cast<std::size_t>(g), x_base);
        set.assigned_ops[i] = g;
        set.Y.push_back(family.ops[g].entries * x_base);
    }
    return set;
}

void write_sample_csv(const SampleSet& set, const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("write_sample_csv: cannot open " + path);
    for (std::size_t i = 0; i < set.assigned_ops.size(); ++i) {
        if (i) f << ',';
        f << set.assigned_ops[i];
    }
    f << '\n';
    f.precision(17);
    for (int r = 0; r < set.X.rows(); ++r) {
        for (int c = 0; c < set.X.cols(); ++c) {
            if (c) f << ',';
            f << set.X(r, c);
        }
        f << '\n';
    }
    if (!f) throw std::runtime_error("write_sample_csv: write failed for " + path);
}

SampleSet read_sample_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("read_sample_csv: cannot open " + path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("read_sample_csv: empty file " + path);
    SampleSet set;
    {
        std::stringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) set.assigned_ops.push_back(std::stoi(tok));
    }
    std::vector<std::vector<double>> rows;
    while (std::getline(f, line)) {
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> row;
        while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
        rows.push_back(std::move(row));
    }
    const int n = static_cast<int>(rows.size());
    const int N = static_cast<int>(set.assigned_ops.size());
    set.X.resize(n, N);
    for (int r = 0; r < n; ++r) {
        if (static_cast<int>(rows[r].size()) != N)
            throw std::runtime_error("read_sample_csv: ragged row in " + path);
        for (int c = 0; c < N; ++c) set.X(r, c) = rows[r][c];
    }
    return set;
}

} // namespace ivs::models
