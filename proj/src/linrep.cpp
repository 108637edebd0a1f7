#include "ivs/linrep.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>

#include "ivs/rng.hpp"

namespace ivs::linrep {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

namespace {

std::vector<int> identity_perm(int n) {
    std::vector<int> p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

// (T_p T_q x)[i] = (T_q x)[p[i]] = x[q[p[i]]]
std::vector<int> compose_perm(const std::vector<int>& p, const std::vector<int>& q) {
    std::vector<int> r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[i] = q[p[i]];
    return r;
}

std::vector<int> invert_perm(const std::vector<int>& p) {
    std::vector<int> r(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) r[p[i]] = static_cast<int>(i);
    return r;
}

std::uint64_t factorial_u64(int n) {
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) f *= static_cast<std::uint64_t>(i);
    return f;
}

} // namespace

GroupAction GroupAction::from_permutations(int n, std::vector<std::vector<int>> perms,
                                           GroupFamily family) {
    if (n < 1 || n > kMaxDim) throw std::invalid_argument("GroupAction: dimension out of range");
    if (perms.empty()) throw std::invalid_argument("GroupAction: empty element list");
    GroupAction a;
    a.n = n;
    a.family = family;
    a.perms_ = std::move(perms);
    return a;
}

GroupAction GroupAction::from_matrices(int n, std::vector<Eigen::MatrixXd> elements,
                                       GroupFamily family) {
    if (n < 1 || n > kMaxDim) throw std::invalid_argument("GroupAction: dimension out of range");
    if (elements.empty()) throw std::invalid_argument("GroupAction: empty element list");
    for (const auto& T : elements)
        if (T.rows() != n || T.cols() != n)
            throw std::invalid_argument("GroupAction: element shape mismatch");
    GroupAction a;
    a.n = n;
    a.family = family;
    a.dense_ = std::move(elements);
    return a;
}

GroupAction GroupAction::full_symmetric(int n) {
    if (n < 1 || n > kMaxDim)
        throw std::invalid_argument("full_symmetric: dimension out of range");
    GroupAction a;
    a.n = n;
    a.family = GroupFamily::full_permutation;
    if (n >= 2) {
        auto t = identity_perm(n);
        std::swap(t[0], t[1]);
        std::vector<int> cyc(n);
        for (int i = 0; i < n; ++i) cyc[i] = (i + 1) % n;
        a.generators_ = {t, cyc};
    }
    return a;
}

std::size_t GroupAction::size() const {
    if (!enumerated())
        throw std::logic_error("GroupAction: full permutation group is not enumerated");
    return perms_.empty() ? dense_.size() : perms_.size();
}

std::uint64_t GroupAction::order() const {
    if (family == GroupFamily::full_permutation) {
        if (n > 20) throw std::overflow_error("GroupAction::order: n! exceeds 64 bits");
        return factorial_u64(n);
    }
    return static_cast<std::uint64_t>(size());
}

std::uint64_t GroupAction::order_or(std::uint64_t cap) const {
    if (family != GroupFamily::full_permutation) return std::min<std::uint64_t>(size(), cap);
    std::uint64_t f = 1;
    for (int i = 2; i <= n; ++i) {
        if (f > cap / static_cast<std::uint64_t>(i)) return cap;
        f *= static_cast<std::uint64_t>(i);
    }
    return std::min(f, cap);
}

MatrixXd GroupAction::matrix(std::size_t g) const {
    if (!perms_.empty()) {
        MatrixXd T = MatrixXd::Zero(n, n);
        const auto& p = perms_[g];
        for (int i = 0; i < n; ++i) T(i, p[i]) = 1.0;
        return T;
    }
    return dense_.at(g);
}

const std::vector<int>& GroupAction::perm(std::size_t g) const {
    if (perms_.empty()) throw std::logic_error("GroupAction: not permutation-backed");
    return perms_[g];
}

VectorXd GroupAction::apply(std::size_t g, const VectorXd& x) const {
    if (!perms_.empty()) {
        const auto& p = perms_[g];
        VectorXd y(n);
        for (int i = 0; i < n; ++i) y(i) = x(p[i]);
        return y;
    }
    return dense_[g] * x;
}

MatrixXd GroupAction::apply_left(std::size_t g, const MatrixXd& M) const {
    if (!perms_.empty()) {
        const auto& p = perms_[g];
        MatrixXd R(M.rows(), M.cols());
        for (int i = 0; i < n; ++i) R.row(i) = M.row(p[i]);
        return R;
    }
    return dense_[g] * M;
}

MatrixXd GroupAction::apply_right(const MatrixXd& M, std::size_t g) const {
    if (!perms_.empty()) {
        // column c of T_g is e_r with p[r] = c
        const auto inv = invert_perm(perms_[g]);
        MatrixXd R(M.rows(), M.cols());
        for (int c = 0; c < n; ++c) R.col(c) = M.col(inv[c]);
        return R;
    }
    return M * dense_[g];
}

MatrixXd GroupAction::conjugate(std::size_t g, const MatrixXd& M) const {
    if (!perms_.empty()) {
        const auto& p = perms_[g];
        MatrixXd R(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) R(i, j) = M(p[i], p[j]);
        return R;
    }
    return dense_[g] * M * dense_[g].transpose();
}

bool GroupAction::is_abelian() const {
    if (abelian_cache_ >= 0) return abelian_cache_ == 1;
    bool ab = true;
    if (!enumerated()) {
        ab = (n <= 2);
    } else if (!perms_.empty()) {
        for (std::size_t a = 0; a < perms_.size() && ab; ++a)
            for (std::size_t b = a + 1; b < perms_.size() && ab; ++b)
                ab = compose_perm(perms_[a], perms_[b]) == compose_perm(perms_[b], perms_[a]);
    } else {
        for (std::size_t a = 0; a < dense_.size() && ab; ++a)
            for (std::size_t b = a + 1; b < dense_.size() && ab; ++b)
                ab = ((dense_[a] * dense_[b] - dense_[b] * dense_[a]).cwiseAbs().maxCoeff() < 1e-10);
    }
    abelian_cache_ = ab ? 1 : 0;
    return ab;
}

void GroupAction::validate(double tol) const {
    if (!enumerated()) {
        for (const auto& g : generators_)
            if (invert_perm(invert_perm(g)) != g)
                throw std::logic_error("GroupAction: bad generator");
        return;
    }
    const std::size_t G = size();
    if (!perms_.empty()) {
        if (perms_[0] != identity_perm(n)) throw std::logic_error("GroupAction: element 0 is not the identity");
        auto find = [&](const std::vector<int>& p) {
            return std::find(perms_.begin(), perms_.end(), p) != perms_.end();
        };
        for (std::size_t a = 0; a < G; ++a) {
            if (!find(invert_perm(perms_[a]))) throw std::logic_error("GroupAction: missing inverse");
            for (std::size_t b = 0; b < G; ++b)
                if (!find(compose_perm(perms_[a], perms_[b])))
                    throw std::logic_error("GroupAction: not closed under composition");
        }
        return;
    }
    const MatrixXd I = MatrixXd::Identity(n, n);
    if ((dense_[0] - I).cwiseAbs().maxCoeff() > tol)
        throw std::logic_error("GroupAction: element 0 is not the identity");
    auto find = [&](const MatrixXd& T) {
        for (const auto& E : dense_)
            if ((E - T).cwiseAbs().maxCoeff() <= tol) return true;
        return false;
    };
    for (std::size_t a = 0; a < G; ++a) {
        if ((dense_[a].transpose() * dense_[a] - I).cwiseAbs().maxCoeff() > tol)
            throw std::logic_error("GroupAction: element is not orthogonal");
        if (!find(dense_[a].transpose())) throw std::logic_error("GroupAction: missing inverse");
        for (std::size_t b = 0; b < G; ++b)
            if (!find(dense_[a] * dense_[b]))
                throw std::logic_error("GroupAction: not closed under composition");
    }
}

GroupAction make_trivial_group(int n) {
    auto a = GroupAction::from_permutations(n, {identity_perm(n)}, GroupFamily::trivial);
    a.labels = {"e"};
    return a;
}

GroupAction make_shift_group(int n) {
    if (n < 1) throw std::invalid_argument("make_shift_group: n must be positive");
    std::vector<std::vector<int>> perms(n);
    for (int r = 0; r < n; ++r) {
        perms[r].resize(n);
        for (int i = 0; i < n; ++i) perms[r][i] = (i + r) % n;
    }
    auto a = GroupAction::from_permutations(n, std::move(perms), GroupFamily::shift);
    a.generator_index = (n > 1) ? 1 : 0;
    for (int r = 0; r < n; ++r) a.labels.push_back("s" + std::to_string(r));
    return a;
}

GroupAction make_reflection_group(int n) {
    if (n < 2 || n % 2 != 0)
        throw std::invalid_argument("make_reflection_group: n must be even and positive");
    std::vector<int> refl(n);
    for (int i = 0; i < n; ++i) refl[i] = n - 1 - i;
    auto a = GroupAction::from_permutations(n, {identity_perm(n), refl}, GroupFamily::reflection);
    a.generator_index = 1;
    a.labels = {"e", "r"};
    return a;
}

GroupAction make_rotation_group(int n1, int n2) {
    if (n1 < 1 || n2 < 1) throw std::invalid_argument("make_rotation_group: n1, n2 must be positive");
    const int n = n1 * n2;
    // index (radius, angle) -> r * n2 + angle; element s advances the angle by s
    std::vector<std::vector<int>> perms(n2);
    for (int s = 0; s < n2; ++s) {
        perms[s].resize(n);
        for (int r = 0; r < n1; ++r)
            for (int ang = 0; ang < n2; ++ang)
                perms[s][r * n2 + ang] = r * n2 + (ang + s) % n2;
    }
    auto a = GroupAction::from_permutations(n, std::move(perms), GroupFamily::rotation);
    a.generator_index = (n2 > 1) ? 1 : 0;
    for (int s = 0; s < n2; ++s) a.labels.push_back("rot" + std::to_string(s));
    return a;
}

GroupAction make_block_permutation_group(int n, const std::vector<int>& moving) {
    if (static_cast<int>(moving.size()) > 8)
        throw std::invalid_argument("make_block_permutation_group: |moving| > 8 (factorial guard)");
    for (int idx : moving)
        if (idx < 0 || idx >= n)
            throw std::invalid_argument("make_block_permutation_group: moving index out of range");
    std::vector<int> sorted = moving;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("make_block_permutation_group: duplicate moving index");

    std::vector<std::vector<int>> perms;
    std::vector<int> arrangement = sorted;
    do {
        auto p = identity_perm(n);
        for (std::size_t i = 0; i < sorted.size(); ++i) p[sorted[i]] = arrangement[i];
        perms.push_back(std::move(p));
    } while (std::next_permutation(arrangement.begin(), arrangement.end()));

    auto a = GroupAction::from_permutations(n, std::move(perms), GroupFamily::block_permutation);
    if (sorted.size() == 2) a.generator_index = 1;
    if (sorted.size() <= 1) { a.family = GroupFamily::trivial; a.generator_index = 0; }
    return a;
}

GroupAction make_product_shift2d_group(int h, int w) {
    if (h < 1 || w < 1) throw std::invalid_argument("make_product_shift2d_group: h, w must be positive");
    const int n = h * w;
    std::vector<std::vector<int>> perms(static_cast<std::size_t>(h) * w);
    for (int r = 0; r < h; ++r)
        for (int s = 0; s < w; ++s) {
            auto& p = perms[static_cast<std::size_t>(r) * w + s];
            p.resize(n);
            for (int i = 0; i < h; ++i)
                for (int j = 0; j < w; ++j)
                    p[i * w + j] = ((i + r) % h) * w + (j + s) % w;
        }
    auto a = GroupAction::from_permutations(n, std::move(perms), GroupFamily::product_shift2d);
    if (h == 1 || w == 1) a.generator_index = (n > 1) ? 1 : 0;
    return a;
}

GroupAction make_full_permutation_group(int n) { return GroupAction::full_symmetric(n); }

// ---------------------------------------------------------------------------
// decomposition
// ---------------------------------------------------------------------------

int IrrepDecomposition::block_offset(int j) const {
    int off = 0;
    for (int b = 0; b < j; ++b) off += block_size(b);
    return off;
}

double IrrepDecomposition::off_block_mass(const GroupAction& action) const {
    double worst = 0.0;
    const std::size_t G = action.enumerated() ? action.size() : 0;
    for (std::size_t g = 0; g < G; ++g) {
        MatrixXcd S = F.adjoint() * action.matrix(g) * F;
        for (int j = 0; j < J; ++j) {
            const int off = block_offset(j);
            const int sz = block_size(j);
            S.block(off, off, sz, sz).setZero();
        }
        worst = std::max(worst, S.norm());
    }
    return worst;
}

void IrrepDecomposition::validate(const GroupAction& action, double unitary_tol,
                                  double block_tol) const {
    int total = 0;
    for (const auto& b : blocks) total += b.s * b.c;
    if (total != n) throw std::logic_error("IrrepDecomposition: block sizes do not sum to n");
    const double uerr = (F * F.adjoint() - MatrixXcd::Identity(n, n)).norm();
    if (uerr > unitary_tol * n) throw std::logic_error("IrrepDecomposition: F not unitary");
    if (action.enumerated() && off_block_mass(action) > block_tol)
        throw std::logic_error("IrrepDecomposition: off-block mass above tolerance");
}

namespace {

// orthonormal basis with first column 1/sqrt(n) * ones, remaining columns an
// orthonormal complement (Householder reflection mapping e_1 to the constant)
MatrixXd constant_first_basis(int n) {
    VectorXd c = VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    VectorXd u = c - VectorXd::Unit(n, 0);
    const double nu = u.squaredNorm();
    MatrixXd H = MatrixXd::Identity(n, n);
    if (nu > 1e-24) H -= (2.0 / nu) * (u * u.transpose());
    return H; // column 0 equals c, H orthogonal
}

IrrepDecomposition decompose_full_permutation(const GroupAction& action) {
    IrrepDecomposition d;
    d.n = action.n;
    d.group_label = "full_permutation";
    d.cyclic = (action.n <= 2);
    const MatrixXd B = constant_first_basis(action.n);
    d.F = B.cast<std::complex<double>>();
    if (action.n == 1) {
        d.J = 1;
        d.blocks = {{1, 1, "trivial", 0}};
    } else {
        d.J = 2;
        d.blocks = {{1, 1, "trivial", 0}, {action.n - 1, 1, "standard", 1}};
    }
    return d;
}

IrrepDecomposition decompose_block_permutation(const GroupAction& action) {
    // moving coordinates = those displaced by some element
    const int n = action.n;
    std::vector<int> moving;
    for (int i = 0; i < n; ++i) {
        for (std::size_t g = 0; g < action.size(); ++g)
            if (action.perm(g)[i] != i) { moving.push_back(i); break; }
    }
    const int d_mov = static_cast<int>(moving.size());

    IrrepDecomposition d;
    d.n = n;
    d.group_label = "block_permutation";
    d.cyclic = false;

    MatrixXd F = MatrixXd::Zero(n, n);
    int col = 0;
    // trivial isotypic: fixed coordinates, then the symmetrized moving block
    for (int i = 0; i < n; ++i)
        if (std::find(moving.begin(), moving.end(), i) == moving.end()) F(i, col++) = 1.0;
    const MatrixXd Bm = constant_first_basis(d_mov);
    for (int i = 0; i < d_mov; ++i) F(moving[i], col) = Bm(i, 0);
    ++col;
    // standard irreducible: mean-zero vectors on the moving coordinates
    for (int k = 1; k < d_mov; ++k, ++col)
        for (int i = 0; i < d_mov; ++i) F(moving[i], col) = Bm(i, k);

    d.F = F.cast<std::complex<double>>();
    d.J = 2;
    d.blocks = {{1, n - d_mov + 1, "trivial", 0}, {d_mov - 1, 1, "standard", 1}};
    return d;
}

struct EigvecInfo {
    VectorXcd u;
    VectorXcd chars; // chars(g) = u^H T_g u
};

IrrepDecomposition decompose_abelian(const GroupAction& action) {
    const int n = action.n;
    const std::size_t G = action.size();
    const double cluster_tol = 1e-8;

    for (int attempt = 0; attempt < 4; ++attempt) {
        // Generic Hermitian combination: coefficients paired with inverses so
        // that H = H^H and SelfAdjointEigenSolver yields an orthonormal basis.
        Rng rng(0x1BE5A110ULL + 0x9E37ULL * static_cast<std::uint64_t>(attempt));
        std::vector<std::complex<double>> coeff(G);
        std::vector<char> done(G, 0);
        std::vector<MatrixXd> mats(G);
        for (std::size_t g = 0; g < G; ++g) mats[g] = action.matrix(g);
        auto inverse_of = [&](std::size_t g) -> std::size_t {
            const MatrixXd inv = mats[g].transpose();
            for (std::size_t h = 0; h < G; ++h)
                if ((mats[h] - inv).cwiseAbs().maxCoeff() < 1e-9) return h;
            throw NumericalDegeneracy("decompose: inverse element not found");
        };
        for (std::size_t g = 0; g < G; ++g) {
            if (done[g]) continue;
            const std::size_t gi = inverse_of(g);
            if (gi == g) {
                coeff[g] = {2.0 * rng.next_uniform() - 1.0, 0.0};
            } else {
                coeff[g] = {2.0 * rng.next_uniform() - 1.0, 2.0 * rng.next_uniform() - 1.0};
                coeff[gi] = std::conj(coeff[g]);
                done[gi] = 1;
            }
            done[g] = 1;
        }
        MatrixXcd H = MatrixXcd::Zero(n, n);
        for (std::size_t g = 0; g < G; ++g) H += coeff[g] * mats[g];

        Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H);
        if (es.info() != Eigen::Success)
            throw NumericalDegeneracy("decompose: eigensolver failed");

        // character tuple per eigenvector; verify each is a joint eigenvector
        std::vector<EigvecInfo> vecs(n);
        bool mixed = false;
        for (int i = 0; i < n && !mixed; ++i) {
            vecs[i].u = es.eigenvectors().col(i);
            vecs[i].chars.resize(G);
            for (std::size_t g = 0; g < G; ++g) {
                const VectorXcd Tu = mats[g] * vecs[i].u;
                const std::complex<double> theta = vecs[i].u.dot(Tu); // u^H T u
                vecs[i].chars(g) = theta;
                if ((Tu - theta * vecs[i].u).norm() > 1e-7) mixed = true;
            }
        }
        if (mixed) continue; // degenerate combination, retry with new weights

        // cluster by character tuple
        auto tuple_dist = [&](int a, int b) {
            return (vecs[a].chars - vecs[b].chars).cwiseAbs().maxCoeff();
        };
        std::vector<int> cluster_of(n, -1);
        std::vector<std::vector<int>> clusters;
        for (int i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < clusters.size(); ++c) {
                if (tuple_dist(i, clusters[c][0]) < cluster_tol) {
                    cluster_of[i] = static_cast<int>(c);
                    break;
                }
            }
            if (cluster_of[i] < 0) {
                cluster_of[i] = static_cast<int>(clusters.size());
                clusters.push_back({});
            }
            clusters[cluster_of[i]].push_back(i);
        }
        // ambiguity: near-threshold separation between distinct clusters
        bool ambiguous = false;
        for (std::size_t a = 0; a < clusters.size() && !ambiguous; ++a)
            for (std::size_t b = a + 1; b < clusters.size() && !ambiguous; ++b)
                if (tuple_dist(clusters[a][0], clusters[b][0]) < 10.0 * cluster_tol) ambiguous = true;
        if (ambiguous) {
            if (attempt + 1 < 4) continue;
            throw NumericalDegeneracy("decompose: eigenvalue clustering ambiguous at 1e-8");
        }

        struct Block {
            MatrixXcd basis;
            VectorXcd chars;
            bool real_char = false;
        };
        std::vector<Block> raw(clusters.size());
        for (std::size_t c = 0; c < clusters.size(); ++c) {
            MatrixXcd U(n, clusters[c].size());
            for (std::size_t t = 0; t < clusters[c].size(); ++t) U.col(t) = vecs[clusters[c][t]].u;
            // re-orthonormalize within the cluster
            Eigen::HouseholderQR<MatrixXcd> qr(U);
            raw[c].basis = qr.householderQ() * MatrixXcd::Identity(n, static_cast<int>(clusters[c].size()));
            raw[c].chars.resize(G);
            for (std::size_t g = 0; g < G; ++g)
                raw[c].chars(g) = (raw[c].basis.adjoint() * mats[g] * raw[c].basis).trace() /
                                  static_cast<double>(clusters[c].size());
            raw[c].real_char = raw[c].chars.imag().cwiseAbs().maxCoeff() < cluster_tol;
        }

        // conjugate pairing: realify self-conjugate blocks, mirror the others
        std::vector<int> partner(raw.size(), -1);
        for (std::size_t a = 0; a < raw.size(); ++a) {
            if (partner[a] >= 0) continue;
            if (raw[a].real_char) {
                partner[a] = static_cast<int>(a);
                // real orthonormal basis of the conjugation-invariant subspace
                const int c = static_cast<int>(raw[a].basis.cols());
                MatrixXd RI(n, 2 * c);
                RI << raw[a].basis.real(), raw[a].basis.imag();
                Eigen::JacobiSVD<MatrixXd> svd(RI, Eigen::ComputeThinU);
                raw[a].basis = svd.matrixU().leftCols(c).cast<std::complex<double>>();
                raw[a].chars = raw[a].chars.real().cast<std::complex<double>>();
                continue;
            }
            int mate = -1;
            for (std::size_t b = a + 1; b < raw.size(); ++b) {
                if (partner[b] >= 0) continue;
                if ((raw[b].chars - raw[a].chars.conjugate()).cwiseAbs().maxCoeff() < 1e-6) {
                    mate = static_cast<int>(b);
                    break;
                }
            }
            if (mate < 0) throw NumericalDegeneracy("decompose: missing conjugate block");
            partner[a] = mate;
            partner[mate] = static_cast<int>(a);
            raw[mate].basis = raw[a].basis.conjugate();
            raw[mate].chars = raw[a].chars.conjugate();
        }

        // canonical order: lexicographic on the character tuple
        std::vector<int> order(raw.size());
        std::iota(order.begin(), order.end(), 0);
        auto key_less = [&](int a, int b) {
            for (std::size_t g = 0; g < G; ++g) {
                const double ra = std::round(raw[a].chars(g).real() * 1e9);
                const double rb = std::round(raw[b].chars(g).real() * 1e9);
                if (ra != rb) return ra > rb;
                const double ia = std::round(raw[a].chars(g).imag() * 1e9);
                const double ib = std::round(raw[b].chars(g).imag() * 1e9);
                if (ia != ib) return ia > ib;
            }
            return false;
        };
        std::sort(order.begin(), order.end(), key_less);

        IrrepDecomposition d;
        d.n = n;
        d.J = static_cast<int>(raw.size());
        d.F.resize(n, n);
        d.characters.resize(d.J, static_cast<int>(G));
        d.cyclic = action.generator_index.has_value();
        std::vector<int> pos(raw.size());
        for (int r = 0; r < d.J; ++r) pos[order[r]] = r;
        int col = 0;
        for (int r = 0; r < d.J; ++r) {
            const auto& blk = raw[order[r]];
            const int c = static_cast<int>(blk.basis.cols());
            d.F.middleCols(col, c) = blk.basis;
            d.characters.row(r) = blk.chars.transpose();
            IrrepBlock ib;
            ib.s = 1;
            ib.c = c;
            ib.label = "irrep" + std::to_string(r + 1);
            ib.conjugate_of = pos[partner[order[r]]];
            d.blocks.push_back(ib);
            col += c;
        }

        // final residual check; a failure here means the clustering was wrong
        const double uerr = (d.F * d.F.adjoint() - MatrixXcd::Identity(n, n)).norm();
        if (uerr > 1e-10 * n || d.off_block_mass(action) > 1e-8) {
            if (attempt + 1 < 4) continue;
            throw NumericalDegeneracy("decompose: residual above tolerance after clustering");
        }
        return d;
    }
    throw NumericalDegeneracy("decompose: no generic combination separated the spectrum");
}

} // namespace

IrrepDecomposition decompose(const GroupAction& action) {
    if (action.family == GroupFamily::full_permutation) {
        auto d = decompose_full_permutation(action);
        return d;
    }
    if (action.is_abelian()) {
        auto d = decompose_abelian(action);
        switch (action.family) {
            case GroupFamily::trivial: d.group_label = "trivial"; break;
            case GroupFamily::shift: d.group_label = "shift"; break;
            case GroupFamily::reflection: d.group_label = "reflection"; break;
            case GroupFamily::rotation: d.group_label = "rotation"; break;
            case GroupFamily::product_shift2d: d.group_label = "product_shift2d"; break;
            case GroupFamily::block_permutation: d.group_label = "block_permutation"; break;
            default: d.group_label = "custom"; break;
        }
        return d;
    }
    if (action.family == GroupFamily::block_permutation)
        return decompose_block_permutation(action);
    throw NonAbelianUnsupported(
        "decompose: only abelian and full/block permutation groups are supported");
}

Rational max_multiplicity_ratio(const IrrepDecomposition& decomp) {
    Rational best(0);
    for (const auto& b : decomp.blocks) best = max(best, Rational(b.c, b.s));
    return best;
}

MatrixXd orbit_gram(const GroupAction& action, const MatrixXd& A) {
    if (A.cols() != action.n) throw std::invalid_argument("orbit_gram: column count mismatch");
    const MatrixXd gram = A.transpose() * A;
    MatrixXd R = MatrixXd::Zero(action.n, action.n);
    for (std::size_t g = 0; g < action.size(); ++g) R += action.conjugate(g, gram);
    return R / static_cast<double>(action.size());
}

MatrixXcd block_orbit_factor(const GroupAction& action, const VectorXd& v,
                             const IrrepDecomposition& decomp) {
    if (!action.is_abelian())
        throw NonAbelianUnsupported("block_orbit_factor: abelian actions only");
    if (v.size() != action.n) throw std::invalid_argument("block_orbit_factor: dimension mismatch");

    const VectorXcd w = decomp.F.adjoint() * v.cast<std::complex<double>>();
    MatrixXcd Mw = MatrixXcd::Zero(action.n, decomp.J);
    for (int j = 0; j < decomp.J; ++j) {
        const int off = decomp.block_offset(j);
        Mw.block(off, j, decomp.block_size(j), 1) = w.segment(off, decomp.block_size(j));
    }
    MatrixXcd Mv = decomp.F * Mw;

    // verify the factorization against the direct group average
    MatrixXd avg = MatrixXd::Zero(action.n, action.n);
    const MatrixXd vvT = v * v.transpose();
    for (std::size_t g = 0; g < action.size(); ++g) avg += action.conjugate(g, vvT);
    avg /= static_cast<double>(action.size());
    const MatrixXcd prod = Mv * Mv.adjoint();
    const double err = (prod.real() - avg).norm() + prod.imag().norm();
    if (err > 1e-9 * std::max(1.0, avg.norm()))
        throw NumericalDegeneracy("block_orbit_factor: factorization residual above 1e-9");
    return Mv;
}

} // namespace ivs::linrep
