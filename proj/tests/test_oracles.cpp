/*
 * This file is part of lazychol, a toolkit for lazy pivoted Cholesky
 * decomposition of kernel matrices.
 *
 * Copyright (c) 2026 lazychol contributors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */
#include "lazychol/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

#include "lazychol/decomposition.hpp"
#include "lazychol/kernels.hpp"
#include "lazychol/verification.hpp"
#include "test_support.hpp"

using namespace lazychol;
using oracles::GramMatrix;
using oracles::PivotSequence;
using testing::make_points;
using testing::random_points;

TEST_CASE("dense gram examples") {
  const PointSet one = make_points({{0.4, 0.4}});
  const GramMatrix single = oracles::dense_gram(KernelSpec::rbf(1.0), one);
  REQUIRE(single.n() == 1);
  CHECK(single.K(0, 0) == 1.0);

  const PointSet two = make_points({{0.1, 0.9}, {0.1, 0.9}});
  const GramMatrix dup = oracles::dense_gram(KernelSpec::rbf(0.5), two);
  CHECK(dup.K == Eigen::MatrixXd::Ones(2, 2));

  const PointSet X = random_points(201, 8, 3);
  const GramMatrix lin = oracles::dense_gram(KernelSpec::linear(1.7), X);
  const Eigen::MatrixXd expected =
      1.7 * X.matrix() * X.matrix().transpose();
  CHECK((lin.K - expected).lpNorm<Eigen::Infinity>() <= 1e-12);
}

TEST_CASE("dense gram refuses instances above the cap") {
  const PointSet X = random_points(203, 4, 2);
  CHECK_THROWS_AS(oracles::dense_gram(KernelSpec::rbf(1.0), X, 3),
                  OracleScaleError);
}

TEST_CASE("subspace farthest-point sampling on hand matrices") {
  // Orthonormal features: every candidate sits at squared distance 1 from
  // any proper subspace spanned by other coordinates; lowest position wins.
  const GramMatrix identity(Eigen::MatrixXd::Identity(3, 3));
  const PivotSequence eye = oracles::subspace_fps(identity, 2, 0.0);
  CHECK(eye.indices == IndexVector{0, 1});
  REQUIRE(eye.sq_distances.size() == 2);
  CHECK(eye.sq_distances[0] == 1.0);
  CHECK(eye.sq_distances[1] == 1.0);

  // Rank-one all-ones matrix: one step exhausts it.
  const GramMatrix ones(Eigen::MatrixXd::Ones(3, 3));
  const PivotSequence collapsed = oracles::subspace_fps(ones, 3, 1e-6);
  CHECK(collapsed.indices == IndexVector{0});
  REQUIRE(collapsed.sq_distances.size() == 1);
  CHECK(collapsed.sq_distances[0] == 1.0);
}

TEST_CASE("subspace distances via fresh solves match the lemma quantity") {
  const GramMatrix identity(Eigen::MatrixXd::Identity(4, 4));
  const IndexVector selected = {0, 2};
  CHECK(oracles::subspace_sq_distance(identity, selected, 1) == 1.0);
  CHECK(oracles::subspace_sq_distance(identity, selected, 3) == 1.0);
  const IndexVector none = {};
  CHECK(oracles::subspace_sq_distance(identity, none, 1) == 1.0);
}

TEST_CASE("subspace selection equals the lazy decomposition pivots") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const RandomInstance inst = make_random_instance(777 + seed, 30, 10);
    const DecompositionResult run = pivoted_cholesky(
        inst.kernel, inst.points, DecompositionConfig{inst.rank, 0.0});
    const GramMatrix gram = oracles::dense_gram(inst.kernel, inst.points);
    const PivotSequence fps =
        oracles::subspace_fps(gram, inst.rank, 0.0);
    REQUIRE(fps.indices.size() ==
            static_cast<std::size_t>(run.factor.rank()));
    CHECK(fps.indices == run.factor.pivots());
  }
}

TEST_CASE("pointwise farthest-point sampling on hand matrices") {
  const GramMatrix identity(Eigen::MatrixXd::Identity(3, 3));
  const PivotSequence eye = oracles::pointwise_fps(identity, 3, 0);
  REQUIRE(eye.indices.size() == 3);
  CHECK(eye.indices[0] == 0);
  CHECK(eye.indices[1] == 1);  // all candidates at distance 2, lowest wins
  CHECK(std::isinf(eye.sq_distances[0]));
  CHECK(eye.sq_distances[1] == 2.0);
  CHECK(eye.sq_distances[2] == 2.0);

  const GramMatrix dup(Eigen::MatrixXd::Ones(2, 2));
  const PivotSequence collapsed = oracles::pointwise_fps(dup, 2, 0);
  REQUIRE(collapsed.indices.size() == 2);
  CHECK(collapsed.sq_distances[1] == 0.0);
}

TEST_CASE("pointwise sampling validates its seed") {
  const GramMatrix identity(Eigen::MatrixXd::Identity(3, 3));
  CHECK_THROWS_AS(oracles::pointwise_fps(identity, 2, 5), ArgumentError);
  CHECK_THROWS_AS(oracles::pointwise_fps(identity, 2, -1), ArgumentError);
}

TEST_CASE("dense pivoted cholesky on hand matrices") {
  Eigen::MatrixXd four(1, 1);
  four << 4.0;
  const CholeskyFactor single =
      oracles::dense_pivoted_cholesky(GramMatrix(four), 1, 0.0);
  REQUIRE(single.rank() == 1);
  CHECK(single.L(0, 0) == 2.0);

  Eigen::MatrixXd diag = Eigen::Vector2d(1.0, 9.0).asDiagonal();
  const CholeskyFactor two =
      oracles::dense_pivoted_cholesky(GramMatrix(diag), 2, 0.0);
  REQUIRE(two.rank() == 2);
  CHECK(two.pivots() == IndexVector{1, 0});
  Eigen::MatrixXd expected(2, 2);
  expected << 3, 0, 0, 1;
  CHECK(two.L == expected);
}

TEST_CASE("dense pivoted cholesky matches the lazy factor") {
  for (std::uint64_t seed : {301u, 303u, 307u}) {
    const PointSet X = random_points(seed, 20, 3);
    const KernelSpec spec = KernelSpec::rbf(0.35);
    const DecompositionResult lazy =
        pivoted_cholesky(spec, X, DecompositionConfig{8, 0.0});
    const GramMatrix gram = oracles::dense_gram(spec, X);
    const CholeskyFactor dense =
        oracles::dense_pivoted_cholesky(gram, 8, 0.0);
    REQUIRE(dense.rank() == lazy.factor.rank());
    CHECK(dense.permutation == lazy.factor.permutation);
    CHECK((dense.L - lazy.factor.L).lpNorm<Eigen::Infinity>() <= 1e-10);
  }
}

TEST_CASE("dense pivoted cholesky rejects negative diagonals") {
  Eigen::MatrixXd bad(2, 2);
  bad << -1.0, 0.0, 0.0, -2.0;
  CHECK_THROWS_AS(oracles::dense_pivoted_cholesky(GramMatrix(bad), 2, 0.0),
                  InvalidKernelError);
}

TEST_CASE("dense pivoted cholesky truncates off-diagonal indefiniteness") {
  // Eigenvalues 3 and -1, but the diagonal is positive: the clamped trailing
  // update drives the second pivot to zero and the run truncates instead of
  // producing a sqrt of a negative number.
  Eigen::MatrixXd bad(2, 2);
  bad << 1.0, 2.0, 2.0, 1.0;
  const CholeskyFactor factor =
      oracles::dense_pivoted_cholesky(GramMatrix(bad), 2, 0.0);
  CHECK(factor.rank() == 1);
  CHECK(factor.stop_reason == StopReason::ToleranceMet);
  REQUIRE(factor.L.cols() == 1);
  CHECK(factor.L(0, 0) == 1.0);
  CHECK(factor.L(1, 0) == 2.0);
}

TEST_CASE("gram-schmidt factor oracle on hand matrices") {
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(2, 2);
  CHECK(oracles::qr_factor_oracle(eye, 2) == eye);

  Eigen::MatrixXd row(1, 1);
  row << 3.0;
  const Eigen::MatrixXd single = oracles::qr_factor_oracle(row, 1);
  REQUIRE(single.rows() == 1);
  CHECK(single(0, 0) == 3.0);
}

TEST_CASE("transposed gram-schmidt factor reproduces the cholesky factor") {
  const PointSet X = random_points(311, 8, 4);
  const KernelSpec spec = KernelSpec::linear();
  const DecompositionResult run =
      pivoted_cholesky(spec, X, DecompositionConfig{4, 0.0});
  REQUIRE(run.factor.rank() == 4);

  const Eigen::MatrixXd phi = explicit_features(spec, X);
  Eigen::MatrixXd phi_perm(phi.rows(), phi.cols());
  for (Eigen::Index m = 0; m < phi.rows(); ++m) {
    phi_perm.row(m) = phi.row(run.factor.permutation[m]);
  }
  const Eigen::MatrixXd R = oracles::qr_factor_oracle(phi_perm, 4);
  CHECK((R.transpose() - run.factor.L).lpNorm<Eigen::Infinity>() <= 1e-8);
}

TEST_CASE("gram-schmidt rejects dependent pivot features") {
  Eigen::MatrixXd dependent(2, 2);
  dependent << 1.0, 1.0, 2.0, 2.0;  // second row is a multiple of the first
  CHECK_THROWS_AS(oracles::qr_factor_oracle(dependent, 2),
                  DegenerateFeatureError);
}

TEST_CASE("gram-schmidt basis is orthonormal") {
  const PointSet X = random_points(313, 7, 3);
  const Eigen::MatrixXd phi = explicit_features(KernelSpec::linear(), X);
  const oracles::OrthonormalBasis basis = oracles::gram_schmidt_basis(phi, 3);
  const Eigen::MatrixXd gram =
      basis.vectors.transpose() * basis.vectors;
  CHECK((gram - Eigen::MatrixXd::Identity(3, 3)).lpNorm<Eigen::Infinity>() <=
        1e-10);
}

TEST_CASE("factor entries are projections onto the basis") {
  const PointSet X = random_points(317, 9, 3);
  const KernelSpec spec = KernelSpec::linear(1.2);
  const DecompositionResult run =
      pivoted_cholesky(spec, X, DecompositionConfig{3, 0.0});
  const Eigen::MatrixXd phi = explicit_features(spec, X);
  Eigen::MatrixXd phi_perm(phi.rows(), phi.cols());
  for (Eigen::Index m = 0; m < phi.rows(); ++m) {
    phi_perm.row(m) = phi.row(run.factor.permutation[m]);
  }
  const oracles::OrthonormalBasis basis =
      oracles::gram_schmidt_basis(phi_perm, run.factor.rank());
  CHECK(oracles::projection_coefficient_check(phi_perm, basis, run.factor) <=
        1e-8);
}

TEST_CASE("residual identity check") {
  // Rank 0: the residual is the raw diagonal on both sides, deviation 0.
  const PointSet X = random_points(331, 10, 2);
  const KernelSpec spec = KernelSpec::rbf(0.5);
  const DecompositionResult empty =
      pivoted_cholesky(spec, X, DecompositionConfig{0, 0.0});
  CHECK(oracles::residual_identity_check(spec, X, empty.factor) == 0.0);

  // Rank-one collapse: all residuals exactly zero.
  const PointSet same = make_points({{0.2, 0.2}, {0.2, 0.2}, {0.2, 0.2}});
  const DecompositionResult ones = pivoted_cholesky(
      KernelSpec::rbf(1.0), same, DecompositionConfig{3, 1e-6});
  CHECK(oracles::residual_identity_check(KernelSpec::rbf(1.0), same,
                                         ones.factor) <= 1e-15);

  // Random instance mid-decomposition.
  const PointSet big = random_points(337, 40, 3);
  const DecompositionResult mid =
      pivoted_cholesky(spec, big, DecompositionConfig{10, 0.0});
  CHECK(oracles::residual_identity_check(spec, big, mid.factor) <= 1e-8);
}

TEST_CASE("residual matrix metrics") {
  const PointSet X = random_points(347, 12, 2);
  const KernelSpec spec = KernelSpec::matern32(0.5, 1.5);
  const GramMatrix gram = oracles::dense_gram(spec, X);

  // Rank 0: the residual is the matrix itself.
  const DecompositionResult empty =
      pivoted_cholesky(spec, X, DecompositionConfig{0, 0.0});
  const oracles::ResidualMetrics whole =
      oracles::residual_matrix_metrics(gram, empty.factor);
  CHECK(whole.trace_error == doctest::Approx(gram.K.trace()).epsilon(1e-14));
  CHECK(whole.frobenius_error ==
        doctest::Approx(gram.K.norm()).epsilon(1e-14));

  // Full rank: every metric collapses.
  const DecompositionResult full =
      pivoted_cholesky(spec, X, DecompositionConfig{12, 0.0});
  const oracles::ResidualMetrics done =
      oracles::residual_matrix_metrics(gram, full.factor);
  CHECK(std::abs(done.trace_error) <= 1e-8 * gram.K.trace());
  CHECK(done.frobenius_error <= 1e-8 * gram.K.trace());
  CHECK(std::abs(done.min_eigenvalue) <= 1e-8 * gram.K.trace());

  // Mid-decomposition trace identity against the summed residual diagonal.
  const DecompositionResult mid =
      pivoted_cholesky(spec, X, DecompositionConfig{5, 0.0});
  const oracles::ResidualMetrics partial =
      oracles::residual_matrix_metrics(gram, mid.factor);
  const double sum = mid.factor.residual_diag.sum();
  CHECK(std::abs(partial.trace_error - sum) <=
        1e-8 * std::max(std::abs(sum), 1.0));
}

TEST_CASE("minimum eigenvalue oracle") {
  Eigen::MatrixXd m(2, 2);
  m << 1.0, 2.0, 2.0, 1.0;
  CHECK(oracles::min_eigenvalue(m) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("tied candidates resolve to the same pivot in both routes") {
  // Unit square corners: after the first two picks the remaining pair sit
  // at exactly equal distance, so selection order is decided purely by the
  // shared tie rule.
  const PointSet square =
      make_points({{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}});
  const KernelSpec spec = KernelSpec::rbf(0.8);
  const DecompositionResult run =
      pivoted_cholesky(spec, square, DecompositionConfig{3, 0.0});
  const GramMatrix gram = oracles::dense_gram(spec, square);
  const PivotSequence fps = oracles::subspace_fps(gram, 3, 0.0);
  CHECK(run.factor.pivots() == IndexVector{0, 3, 2});
  CHECK(fps.indices == IndexVector{0, 3, 2});
}

TEST_CASE("linear dependence fixture separates the two strategies") {
  const PointSet X = linear_dependence_fixture();
  const KernelSpec spec = KernelSpec::linear();
  const GramMatrix gram = oracles::dense_gram(spec, X);

  // The subspace route exhausts the dependent point inside two steps.
  const PivotSequence sub = oracles::subspace_fps(gram, 3, 1e-12);
  CHECK(sub.indices == IndexVector{0, 1});

  // The pointwise route still selects it at a distance bounded away from 0.
  const PivotSequence pw = oracles::pointwise_fps(gram, 3, 0);
  REQUIRE(pw.indices.size() == 3);
  CHECK(pw.sq_distances[2] > 0.1);
}
