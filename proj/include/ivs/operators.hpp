#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ivs/linrep.hpp"

namespace ivs::operators {

enum class OperatorKind : std::uint32_t { gaussian = 0, inpainting = 1, fourier_rows = 2, custom = 3 };

// An m-by-n real measurement operator. Immutable after construction.
struct LinearOperator {
    int m = 0;
    int n = 0;
    Eigen::MatrixXd entries;
    OperatorKind kind = OperatorKind::custom;
    std::uint64_t seed = 0;
};

enum class FamilyProvenance { independent, g_related };

// |G| operators sharing the ambient dimension; either independent draws or
// the virtual family ops[g] = base * T_g induced by a group action.
struct OperatorFamily {
    std::vector<LinearOperator> ops;
    FamilyProvenance provenance = FamilyProvenance::independent;
    std::optional<linrep::GroupAction> action; // g_related only
    std::optional<LinearOperator> base;        // g_related only

    int n() const { return ops.empty() ? 0 : ops.front().n; }
    std::size_t size() const { return ops.size(); }
    int total_measurements() const;
    double mean_measurements() const;
};

// iid N(0, 1/n) entries from the seeded counter-based generator, row-major
// draw order; identical seeds give bit-identical operators.
LinearOperator gaussian_operator(int m, int n, std::uint64_t seed);

// Selects the kept coordinates (0-based) in ascending index order.
LinearOperator inpainting_operator(int n, const std::vector<int>& kept);

// Real embedding of the selected DFT rows (0-based frequencies): frequency j
// and its conjugate n-j share a sqrt(2/n)*cos and sqrt(2/n)*sin row pair, DC
// and Nyquist embed as single rows. Row space is shift invariant.
LinearOperator fourier_rows_operator(int n, const std::vector<int>& rows);

OperatorFamily g_related_family(const LinearOperator& base, const linrep::GroupAction& action);

// `count` Gaussian operators with derived per-op seeds seed + g.
OperatorFamily independent_family(int count, int m, int n, std::uint64_t seed);

// Moore-Penrose pseudo-inverse by SVD; singular values below 1e-10 * sigma_max
// are treated as zero.
Eigen::MatrixXd pseudo_inverse(const LinearOperator& op);
Eigen::MatrixXd pseudo_inverse(const Eigen::MatrixXd& A);

// exact product used by g_related_family; exposed so tests share the path
Eigen::MatrixXd compose_with_element(const LinearOperator& base,
                                     const linrep::GroupAction& action, std::size_t g);

// Flat binary fixture format, little-endian:
//   bytes 0..5   magic "IVSOP1"
//   uint32       m
//   uint32       n
//   uint32       kind tag
//   uint64       seed
//   m*n float64  entries, row-major
void save_operator(const LinearOperator& op, const std::string& path);
LinearOperator load_operator(const std::string& path);

} // namespace ivs::operators
