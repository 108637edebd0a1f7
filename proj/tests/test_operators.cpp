#include <doctest.h>

#include <cstdio>

#include "ivs/bounds.hpp"
#include "ivs/operators.hpp"
#include "test_util.hpp"

using namespace ivs;
using namespace ivs::operators;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST_CASE("gaussian operator determinism and variance") {
    const auto a = gaussian_operator(2, 4, 7);
    const auto b = gaussian_operator(2, 4, 7);
    CHECK(a.entries == b.entries);

    const auto big = gaussian_operator(50, 50, 1);
    const double mean = big.entries.mean();
    const double var = (big.entries.array() - mean).square().sum() / (2500.0 - 1.0);
    CHECK(var > 0.6 / 50.0);
    CHECK(var < 1.4 / 50.0);

    const auto tiny = gaussian_operator(1, 1, 0);
    CHECK(tiny.entries.size() == 1);

    CHECK_THROWS_AS(gaussian_operator(5, 4, 0), std::invalid_argument);
}

TEST_CASE("inpainting operator") {
    const auto op = inpainting_operator(4, {0, 2});
    CHECK(op.m == 2);
    CHECK(op.entries.row(0).isApprox(Eigen::RowVector4d(1, 0, 0, 0)));
    CHECK(op.entries.row(1).isApprox(Eigen::RowVector4d(0, 0, 1, 0)));

    CHECK(inpainting_operator(2, {0, 1}).entries.isApprox(MatrixXd::Identity(2, 2)));

    CHECK_THROWS_AS(inpainting_operator(4, {0, 0}), std::invalid_argument);
    CHECK_THROWS_AS(inpainting_operator(4, {4}), std::invalid_argument);
    CHECK_THROWS_AS(inpainting_operator(4, {}), std::invalid_argument);

    // half-mask pair used by the covariance counterexample
    const auto amb = bounds::half_mask_covariance_ambiguity(8);
    CHECK(amb.A1.m == 4);
    CHECK(amb.A2.m == 4);
    CHECK((amb.A1.entries * amb.A2.entries.transpose()).norm() == 0.0);
}

TEST_CASE("fourier rows operator") {
    const auto dc = fourier_rows_operator(8, {0});
    CHECK(dc.m == 1);
    CHECK(dc.entries.row(0).isApprox(Eigen::RowVectorXd::Constant(8, 1.0 / std::sqrt(8.0))));

    const auto two = fourier_rows_operator(8, {0, 1});
    CHECK(two.m == 3); // DC plus the cos/sin pair of frequency 1
    CHECK((two.entries * two.entries.transpose()).isApprox(MatrixXd::Identity(3, 3), 1e-12));

    CHECK_THROWS_AS(fourier_rows_operator(8, {8}), std::invalid_argument);

    const auto sh = linrep::make_shift_group(8);
    CHECK(bounds::is_equivariant(two, sh));
}

TEST_CASE("g related family") {
    const auto triv = linrep::make_trivial_group(4);
    const auto base = gaussian_operator(2, 4, 3);
    const auto f1 = g_related_family(base, triv);
    CHECK(f1.size() == 1);
    CHECK(f1.ops[0].entries == base.entries);

    const auto sh = linrep::make_shift_group(4);
    LinearOperator sel;
    sel.m = 1;
    sel.n = 4;
    sel.entries = MatrixXd::Zero(1, 4);
    sel.entries(0, 0) = 1.0;
    const auto fam = g_related_family(sel, sh);
    for (std::size_t g = 0; g < 4; ++g) {
        // e_1^T T_g selects a different coordinate per shift
        CHECK(fam.ops[g].entries.cwiseAbs().sum() == 1.0);
        CHECK(fam.ops[g].entries(0, g) == 1.0);
    }

    const auto re = linrep::make_reflection_group(4);
    const auto base2 = gaussian_operator(2, 4, 5);
    const auto fr = g_related_family(base2, re);
    for (int c = 0; c < 4; ++c)
        CHECK(fr.ops[1].entries.col(c) == fr.ops[0].entries.col(3 - c));

    // provenance invariant: entries equal base * T_g with zero error
    for (std::size_t g = 0; g < 2; ++g) {
        const MatrixXd direct = compose_with_element(base2, re, g);
        CHECK((fr.ops[g].entries - direct).cwiseAbs().maxCoeff() == 0.0);
    }
}

TEST_CASE("independent family") {
    const auto one = independent_family(1, 3, 6, 42);
    CHECK(one.ops[0].entries == gaussian_operator(3, 6, 42).entries);

    const auto a = independent_family(3, 2, 5, 9);
    const auto b = independent_family(3, 2, 5, 9);
    for (int g = 0; g < 3; ++g) CHECK(a.ops[g].entries == b.ops[g].entries);

    const auto two = independent_family(2, 2, 5, 1);
    CHECK((two.ops[0].entries - two.ops[1].entries).cwiseAbs().maxCoeff() > 1e-8);
}

TEST_CASE("pseudo inverse") {
    LinearOperator id;
    id.m = 3;
    id.n = 3;
    id.entries = MatrixXd::Identity(3, 3);
    CHECK(pseudo_inverse(id).isApprox(MatrixXd::Identity(3, 3), 1e-12));

    const auto sel = inpainting_operator(5, {1, 3});
    CHECK(pseudo_inverse(sel).isApprox(sel.entries.transpose(), 1e-12));

    const auto g = gaussian_operator(3, 5, 17);
    const MatrixXd pinv = pseudo_inverse(g);
    CHECK((g.entries * pinv * g.entries - g.entries).norm() < 1e-8);

    // projector factory: A^dagger A symmetric idempotent
    const MatrixXd P = pinv * g.entries;
    CHECK((P - P.transpose()).norm() < 1e-8);
    CHECK((P * P - P).norm() < 1e-8);
}

TEST_CASE("operator serialization round trip") {
    const auto op = gaussian_operator(4, 9, 123);
    const std::string path = "op_fixture_test.bin";
    save_operator(op, path);
    const auto back = load_operator(path);
    std::remove(path.c_str());
    CHECK(back.m == op.m);
    CHECK(back.n == op.n);
    CHECK(back.kind == op.kind);
    CHECK(back.seed == op.seed);
    CHECK(back.entries == op.entries); // bit-exact payload
}

TEST_CASE("g related family from non-equivariant base has distinct ranges") {
    const auto sh = linrep::make_shift_group(16);
    const auto base = gaussian_operator(4, 16, 77);
    const auto fam = g_related_family(base, sh);
    CHECK_FALSE(bounds::family_shares_range(fam, 0.1));
}
