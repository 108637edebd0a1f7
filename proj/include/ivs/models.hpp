#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "ivs/linrep.hpp"
#include "ivs/operators.hpp"

namespace ivs::models {

// k-dimensional linear signal model with an orthonormal basis.
struct SubspaceModel {
    int n = 0;
    int k = 0;
    Eigen::MatrixXd basis; // n x k, orthonormal columns
    std::uint64_t seed = 0;
};

// Union of subspaces: the orbit of a base subspace under a group action.
struct InvariantUnionModel {
    SubspaceModel base;
    linrep::GroupAction action;
};

// Ground-truth signals, the operator index each was measured through, and
// the noiseless measurements. y[i] is computed as ops[g_i] * basis-coeffs
// path, so recomputing along the same path reproduces it bit for bit.
struct SampleSet {
    Eigen::MatrixXd X;              // n x N ground-truth signals
    std::vector<int> assigned_ops;  // g_i per column
    std::vector<Eigen::VectorXd> Y; // y_i = A_{g_i} x_i
};

SubspaceModel random_subspace(int n, int k, std::uint64_t seed);

// k = 1 model spanned by a normalized symmetric triangular pulse of width
// ceil(n/2) centered near n/4.
SubspaceModel triangular_atom_model(int n);

SampleSet sample_with_family(const SubspaceModel& model, const operators::OperatorFamily& family,
                             int N, std::uint64_t seed);

// Draws g_i uniform and coefficients Gaussian; x_i = T_{g_i} * basis * c_i and
// y_i = (base_op * T_{g_i}) * (basis * c_i), i.e. the measurements satisfy the
// virtual-operator identity exactly when the family is rebuilt from base_op.
SampleSet sample_invariant(const InvariantUnionModel& model,
                           const operators::LinearOperator& base_op, int N, std::uint64_t seed);

// CSV fixture: header row of g_i, then n rows with the signal matrix X.
void write_sample_csv(const SampleSet& set, const std::string& path);
SampleSet read_sample_csv(const std::string& path);

} // namespace ivs::models
