/*
 * This file is part of lazychol, a toolkit for lazy pivoted Cholesky
 * decomposition of kernel matrices.
 *
 * Copyright (c) 2026 lazychol contributors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */
#pragma once

#include <span>

#include "lazychol/decomposition.hpp"
#include "lazychol/kernels.hpp"
#include "lazychol/types.hpp"

// Dense, brute-force reference implementations used on small instances to
// certify the lazy decomposition. Deliberately naive: the subspace-distance
// oracle re-solves a fresh dense system per candidate instead of sharing any
// incremental update with the implementation under test, so agreement is
// evidence rather than tautology. No solve is regularized; a numerically
// singular system is an error, never papered over.
namespace lazychol::oracles {

inline constexpr Eigen::Index kDefaultOracleCap = 2000;

struct GramMatrix {
  Eigen::MatrixXd K;

  explicit GramMatrix(Eigen::MatrixXd matrix);
  Eigen::Index n() const { return K.rows(); }
};

struct PivotSequence {
  IndexVector indices;               // original indices, selection order
  std::vector<double> sq_distances;  // squared distance at selection
};

// Explicit Gram-Schmidt basis for the span of selected feature vectors.
struct OrthonormalBasis {
  Eigen::MatrixXd vectors;  // F x m, column j is e_j
};

struct ResidualMetrics {
  double trace_error = 0.0;      // trace(K - L L^T)
  double frobenius_error = 0.0;  // ||K - L L^T||_F
  double min_eigenvalue = 0.0;   // lambda_min(K - L L^T)
};

// Full Gram matrix via eval_cross(X, X), symmetrized by averaging with its
// transpose. Refuses instances above the cap.
GramMatrix dense_gram(const KernelSpec& spec, const PointSet& X,
                      Eigen::Index cap = kDefaultOracleCap);

// Exact squared distance of candidate's feature vector to the span of the
// selected features: K_ii - k_iS (K_SS)^-1 k_Si, with a fresh dense
// factorization of K_SS per call.
double subspace_sq_distance(const GramMatrix& gram,
                            std::span<const Eigen::Index> selected,
                            Eigen::Index candidate);

// Greedy farthest-point sampling against the linear span of the selected
// feature vectors. Same tie-break (lowest position in swap order) and same
// strict-< tolerance stop as the lazy decomposition; distances come from
// fresh dense solves, nothing is shared incrementally.
PivotSequence subspace_fps(const GramMatrix& gram, Eigen::Index max_rank,
                           double tolerance);

// Classic farthest-point sampling in the kernel metric: from the seed,
// repeatedly add argmax_i min_{s in S} (K_ii + K_ss - 2 K_is). The seed's
// recorded distance is +infinity (distance to the empty set).
PivotSequence pointwise_fps(const GramMatrix& gram, Eigen::Index max_rank,
                            Eigen::Index seed_index);

// Textbook pivoted Cholesky on a materialized matrix, with the same pivot
// and tolerance rules as the lazy implementation.
CholeskyFactor dense_pivoted_cholesky(const GramMatrix& gram,
                                      Eigen::Index max_rank, double tolerance);

// Gram-Schmidt QR of Phi^T restricted to the first num_pivots feature
// vectors: returns R (num_pivots x N) with positive diagonal, where
// R[j, i] = <e_j, phi(x_i)>. Rows of `features_permuted` must already be in
// the factor's permuted order, pivots first. R^T reproduces the Cholesky
// factor entrywise.
Eigen::MatrixXd qr_factor_oracle(const Eigen::MatrixXd& features_permuted,
                                 Eigen::Index num_pivots);

// Max |d[i] - dist^2(i, span of selected)| over all points, with the dense
// distance recomputed per point from the Gram matrix.
double residual_identity_check(const KernelSpec& spec, const PointSet& X,
                               const CholeskyFactor& factor,
                               Eigen::Index cap = kDefaultOracleCap);

// Forms E = K - L L^T densely (permuted order) and reports its trace,
// Frobenius norm and smallest eigenvalue.
ResidualMetrics residual_matrix_metrics(const GramMatrix& gram,
                                        const CholeskyFactor& factor);

// Classical Gram-Schmidt on the first num_pivots rows of the feature matrix
// (residual then normalize, the projection route), as columns of the result.
OrthonormalBasis gram_schmidt_basis(const Eigen::MatrixXd& features_permuted,
                                    Eigen::Index num_pivots);

// Max |L[i][j] - <phi(x_i), e_j>| over all entries of the factor.
double projection_coefficient_check(const Eigen::MatrixXd& features_permuted,
                                    const OrthonormalBasis& basis,
                                    const CholeskyFactor& factor);

double min_eigenvalue(const Eigen::MatrixXd& symmetric);

}  // namespace lazychol::oracles
