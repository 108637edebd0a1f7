#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ivs/rational.hpp"

namespace ivs::linrep {

class NonAbelianUnsupported : public std::runtime_error {
public:
    explicit NonAbelianUnsupported(const std::string& what) : std::runtime_error(what) {}
};

class NumericalDegeneracy : public std::runtime_error {
public:
    explicit NumericalDegeneracy(const std::string& what) : std::runtime_error(what) {}
};

enum class GroupFamily {
    custom,
    trivial,
    shift,
    reflection,
    rotation,
    block_permutation,
    product_shift2d,
    full_permutation,
};

// A finite group's linear representation on R^n: an ordered list of
// orthogonal transformations closed under composition, element 0 the
// identity. Permutation groups are stored as index maps ((T_g x)[i] =
// x[perm[i]]) and materialized to dense on demand; other groups store dense
// n-by-n arrays. The full permutation group is never enumerated: it carries
// its generators only and order() reports n!.
//
// Immutable after construction; safe to share read-only across threads.
class GroupAction {
public:
    static constexpr int kMaxDim = 4096; // dense desk-scale guard

    int n = 0;
    GroupFamily family = GroupFamily::custom;
    std::optional<int> generator_index;
    std::vector<std::string> labels;

    static GroupAction from_permutations(int n, std::vector<std::vector<int>> perms,
                                         GroupFamily family);
    static GroupAction from_matrices(int n, std::vector<Eigen::MatrixXd> elements,
                                     GroupFamily family = GroupFamily::custom);
    // Generator-only representation of the symmetric group S_n (order n!).
    static GroupAction full_symmetric(int n);

    bool enumerated() const { return family != GroupFamily::full_permutation; }
    std::size_t size() const;       // number of enumerated elements
    std::uint64_t order() const;    // |G| (n! for the full permutation group; throws past n=20)
    std::uint64_t order_or(std::uint64_t cap) const; // min(|G|, cap), overflow-safe
    bool permutation_backed() const { return !perms_.empty(); }

    Eigen::MatrixXd matrix(std::size_t g) const;
    const std::vector<int>& perm(std::size_t g) const;
    Eigen::VectorXd apply(std::size_t g, const Eigen::VectorXd& x) const;
    Eigen::MatrixXd apply_left(std::size_t g, const Eigen::MatrixXd& M) const;   // T_g * M
    Eigen::MatrixXd apply_right(const Eigen::MatrixXd& M, std::size_t g) const;  // M * T_g
    // T_g * M * T_g^T
    Eigen::MatrixXd conjugate(std::size_t g, const Eigen::MatrixXd& M) const;

    // generators of the full permutation group (index maps)
    const std::vector<std::vector<int>>& generators() const { return generators_; }

    bool is_abelian() const;

    // Checks the representation axioms: identity first, orthogonality,
    // closure and inverses (tolerance 1e-10). Throws std::logic_error on
    // violation. O(|G|^2) — intended for test-scale groups.
    void validate(double tol = 1e-10) const;

private:
    std::vector<std::vector<int>> perms_;
    std::vector<Eigen::MatrixXd> dense_;
    std::vector<std::vector<int>> generators_; // full_permutation only
    mutable int abelian_cache_ = -1;
};

// catalog constructors
GroupAction make_trivial_group(int n);
GroupAction make_shift_group(int n);
GroupAction make_reflection_group(int n);
GroupAction make_rotation_group(int n1, int n2);
// moving: 0-based coordinate indices; |moving| <= 8
GroupAction make_block_permutation_group(int n, const std::vector<int>& moving);
GroupAction make_product_shift2d_group(int h, int w);
GroupAction make_full_permutation_group(int n);

struct IrrepBlock {
    int s = 1;          // irreducible dimension
    int c = 1;          // multiplicity
    std::string label;
    int conjugate_of = -1; // index of the conjugate-partner block (self if real)
};

// Canonical decomposition of the ambient space into isotypic components:
// unitary basis F whose column blocks span the invariant subspaces, plus the
// per-block (dimension, multiplicity) table. Self-conjugate blocks carry a
// real orthonormal basis; conjugate pairs satisfy F_partner = conj(F_block).
struct IrrepDecomposition {
    int n = 0;
    int J = 0;
    Eigen::MatrixXcd F;             // n x n unitary
    std::vector<IrrepBlock> blocks;
    // characters(j, g) = rho_j(g) for 1-dimensional irreducibles of
    // enumerated groups; empty otherwise.
    Eigen::MatrixXcd characters;
    bool cyclic = false;
    std::string group_label;

    int block_offset(int j) const;  // column offset of block j in F
    int block_size(int j) const { return blocks[j].s * blocks[j].c; }

    // residual of F^H T_g F outside the declared block pattern
    double off_block_mass(const GroupAction& action) const;
    void validate(const GroupAction& action, double unitary_tol = 1e-10,
                  double block_tol = 1e-8) const;
};

// Canonical decomposition. Supported inputs: abelian groups (simultaneous
// diagonalization via a generic Hermitian combination of the elements,
// then eigenvalue-tuple clustering at tolerance 1e-8) and full/block
// permutation groups (closed form). Throws NonAbelianUnsupported otherwise,
// NumericalDegeneracy if the clustering is ambiguous.
//
// Other non-abelian actions (e.g. the 8-element composition of quarter-turn
// rotations and reflection of a square grid, whose largest multiplicity
// ratio is about n/8) are not decomposed here; callers with a known block
// table can fill an IrrepDecomposition directly and feed it to the bound
// oracles.
IrrepDecomposition decompose(const GroupAction& action);

// max_j c_j / s_j
Rational max_multiplicity_ratio(const IrrepDecomposition& decomp);

// R = (1/|G|) sum_i sum_g T_g a_i a_i^T T_g^T over the rows a_i of A.
// rank(R) equals the rank of the stacked [A T_1; ...; A T_{|G|}].
Eigen::MatrixXd orbit_gram(const GroupAction& action, const Eigen::MatrixXd& A);

// Block-diagonal orbit factor M_v with
// (1/|G|) sum_g T_g v v^T T_g^T = M_v M_v^H (verified to 1e-9).
// The returned factor is expressed in ambient coordinates; decomp.F^H * M_v
// recovers the block-diagonal form. Abelian actions only.
Eigen::MatrixXcd block_orbit_factor(const GroupAction& action, const Eigen::VectorXd& v,
                                    const IrrepDecomposition& decomp);

} // namespace ivs::linrep
