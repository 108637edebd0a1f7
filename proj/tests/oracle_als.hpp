#pragma once

#include <Eigen/Dense>
#include <vector>

// Rank-one alternating-least-squares oracle for entry-masked completion.
// Independent of the solver under test: factorizes X = u v^T directly from
// the observed entries, alternating closed-form updates from a fixed start.
inline Eigen::MatrixXd als_rank1_complete(int n, int N,
                                          const std::vector<std::vector<int>>& masks,
                                          const std::vector<Eigen::VectorXd>& values,
                                          int iters = 400) {
    // initialize from the zero-filled data matrix's leading singular vector
    Eigen::MatrixXd Y0 = Eigen::MatrixXd::Zero(n, N);
    for (int i = 0; i < N; ++i)
        for (std::size_t t = 0; t < masks[i].size(); ++t)
            Y0(masks[i][t], i) = values[i](static_cast<int>(t));
    Eigen::JacobiSVD<Eigen::MatrixXd> svd0(Y0, Eigen::ComputeThinU);
    Eigen::VectorXd u = svd0.matrixU().col(0);
    Eigen::VectorXd v = Eigen::VectorXd::Ones(N);
    for (int it = 0; it < iters; ++it) {
        // v_i = <u_mask, y_i> / ||u_mask||^2
        for (int i = 0; i < N; ++i) {
            double num = 0.0, den = 0.0;
            for (std::size_t t = 0; t < masks[i].size(); ++t) {
                num += u(masks[i][t]) * values[i](static_cast<int>(t));
                den += u(masks[i][t]) * u(masks[i][t]);
            }
            v(i) = den > 0 ? num / den : 0.0;
        }
        // u_j = sum_i y_i(j) v_i / sum_i v_i^2 over columns observing j
        Eigen::VectorXd num = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd den = Eigen::VectorXd::Zero(n);
        for (int i = 0; i < N; ++i)
            for (std::size_t t = 0; t < masks[i].size(); ++t) {
                num(masks[i][t]) += values[i](static_cast<int>(t)) * v(i);
                den(masks[i][t]) += v(i) * v(i);
            }
        for (int j = 0; j < n; ++j) u(j) = den(j) > 0 ? num(j) / den(j) : u(j);
        // keep the scale ambiguity in v
        const double norm = u.norm();
        if (norm > 0) u /= norm;
    }
    return u * v.transpose();
}
