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

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace lazychol::oracles {

GramMatrix::GramMatrix(Eigen::MatrixXd matrix) : K(std::move(matrix)) {
  if (K.rows() != K.cols() || K.rows() < 1) {
    throw ArgumentError("Gram matrix must be square and nonempty");
  }
  const double asym = (K - K.transpose()).cwiseAbs().maxCoeff();
  if (!(asym <= 1e-14 * std::max(1.0, K.cwiseAbs().maxCoeff()))) {
    throw ArgumentError("Gram matrix is not symmetric");
  }
}

GramMatrix dense_gram(const KernelSpec& spec, const PointSet& X,
                      Eigen::Index cap) {
  if (X.size() > cap) {
    throw OracleScaleError("instance exceeds the dense oracle cap");
  }
  Eigen::MatrixXd K = eval_cross(spec, X, X);
  K = 0.5 * (K + K.transpose()).eval();
  return GramMatrix(std::move(K));
}

namespace {

// Fresh dense SPD solve of K_SS w = k_Si. Degeneracy is surfaced via the
// factorization state and a backward-error check on the solution.
Eigen::VectorXd solve_selected(const Eigen::MatrixXd& K_SS,
                               const Eigen::VectorXd& rhs) {
  Eigen::LLT<Eigen::MatrixXd> llt(K_SS);
  if (llt.info() != Eigen::Success) {
    throw OracleDegeneracyError(
        "selected-block system is not numerically positive definite");
  }
  Eigen::VectorXd w = llt.solve(rhs);
  const double scale = K_SS.cwiseAbs().maxCoeff() * w.cwiseAbs().maxCoeff() +
                       rhs.cwiseAbs().maxCoeff();
  const double backward = (K_SS * w - rhs).cwiseAbs().maxCoeff();
  if (!(backward <= 1e-8 * std::max(scale, 1e-300))) {
    throw OracleDegeneracyError("selected-block solve is numerically singular");
  }
  return w;
}

}  // namespace

double subspace_sq_distance(const GramMatrix& gram,
                            std::span<const Eigen::Index> selected,
                            Eigen::Index candidate) {
  const Eigen::Index m = static_cast<Eigen::Index>(selected.size());
  if (m == 0) return gram.K(candidate, candidate);

  Eigen::MatrixXd K_SS(m, m);
  Eigen::VectorXd k_Si(m);
  for (Eigen::Index a = 0; a < m; ++a) {
    k_Si[a] = gram.K(selected[static_cast<std::size_t>(a)], candidate);
    for (Eigen::Index b = 0; b < m; ++b) {
      K_SS(a, b) = gram.K(selected[static_cast<std::size_t>(a)],
                          selected[static_cast<std::size_t>(b)]);
    }
  }
  const Eigen::VectorXd w = solve_selected(K_SS, k_Si);
  return gram.K(candidate, candidate) - k_Si.dot(w);
}

PivotSequence subspace_fps(const GramMatrix& gram, Eigen::Index max_rank,
                           double tolerance) {
  const Eigen::Index n = gram.n();
  const Eigen::Index rank_cap = std::min(max_rank, n);
  PivotSequence seq;

  // Candidates are scanned in swap order — selecting the entry at position p
  // exchanges positions `step` and p — so ties resolve to the lowest
  // position, the one argmax rule shared across implementations. The
  // distances themselves still come from fresh dense solves.
  IndexVector order(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    order[static_cast<std::size_t>(i)] = i;
  }
  for (Eigen::Index step = 0; step < rank_cap; ++step) {
    Eigen::Index best_pos = -1;
    double best_dist = -std::numeric_limits<double>::infinity();
    for (Eigen::Index pos = step; pos < n; ++pos) {
      const double dist = subspace_sq_distance(
          gram,
          std::span<const Eigen::Index>(seq.indices.data(), seq.indices.size()),
          order[static_cast<std::size_t>(pos)]);
      if (dist > best_dist) {  // strict >: lowest position wins ties
        best_dist = dist;
        best_pos = pos;
      }
    }
    // Same stop rules as the decomposition: strict < tolerance, and an
    // exactly exhausted residual ends the sequence.
    if (best_dist < tolerance || best_dist <= 0.0) break;
    std::swap(order[static_cast<std::size_t>(step)],
              order[static_cast<std::size_t>(best_pos)]);
    seq.indices.push_back(order[static_cast<std::size_t>(step)]);
    seq.sq_distances.push_back(best_dist);
  }
  return seq;
}

PivotSequence pointwise_fps(const GramMatrix& gram, Eigen::Index max_rank,
                            Eigen::Index seed_index) {
  const Eigen::Index n = gram.n();
  if (seed_index < 0 || seed_index >= n) {
    throw ArgumentError("pointwise_fps: seed index out of range");
  }
  const Eigen::Index rank_cap = std::min(max_rank, n);
  PivotSequence seq;
  if (rank_cap == 0) return seq;

  seq.indices.push_back(seed_index);
  seq.sq_distances.push_back(std::numeric_limits<double>::infinity());

  // min over the selected set of the squared kernel metric, per candidate
  Eigen::VectorXd nearest(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    nearest[i] = gram.K(i, i) + gram.K(seed_index, seed_index) -
                 2.0 * gram.K(i, seed_index);
  }

  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  taken[static_cast<std::size_t>(seed_index)] = true;

  for (Eigen::Index step = 1; step < rank_cap; ++step) {
    Eigen::Index best = -1;
    double best_dist = -std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
      if (taken[static_cast<std::size_t>(i)]) continue;
      if (nearest[i] > best_dist) {
        best_dist = nearest[i];
        best = i;
      }
    }
    taken[static_cast<std::size_t>(best)] = true;
    seq.indices.push_back(best);
    seq.sq_distances.push_back(best_dist);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double dist =
          gram.K(i, i) + gram.K(best, best) - 2.0 * gram.K(i, best);
      if (dist < nearest[i]) nearest[i] = dist;
    }
  }
  return seq;
}

CholeskyFactor dense_pivoted_cholesky(const GramMatrix& gram,
                                      Eigen::Index max_rank, double tolerance) {
  const Eigen::Index n = gram.n();
  const Eigen::Index rank_cap = std::min(max_rank, n);

  // Work on a permuted copy of the full matrix; each step applies the full
  // trailing Schur-complement update, the classic textbook formulation.
  Eigen::MatrixXd A = gram.K;
  const double trace = A.trace();

  CholeskyFactor factor;
  factor.L = Eigen::MatrixXd::Zero(n, rank_cap);
  factor.permutation.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    factor.permutation[static_cast<std::size_t>(i)] = i;
  }
  factor.stop_reason = StopReason::ReachedMaxRank;

  Eigen::Index rank = rank_cap;
  for (Eigen::Index m = 0; m < rank_cap; ++m) {
    Eigen::Index i_star = m;
    for (Eigen::Index j = m + 1; j < n; ++j) {
      if (A(j, j) > A(i_star, i_star)) i_star = j;
    }
    if (i_star != m) {
      std::swap(factor.permutation[static_cast<std::size_t>(m)],
                factor.permutation[static_cast<std::size_t>(i_star)]);
      A.row(m).swap(A.row(i_star));
      A.col(m).swap(A.col(i_star));
      factor.L.row(m).swap(factor.L.row(i_star));
    }

    const double pivot = A(m, m);
    if (pivot < -1e-9 * std::max(trace, 0.0)) {
      throw InvalidKernelError("matrix is not positive semidefinite");
    }
    if (pivot < tolerance || pivot <= 0.0) {
      rank = m;
      factor.stop_reason = StopReason::ToleranceMet;
      break;
    }

    const double alpha = std::sqrt(pivot);
    factor.L(m, m) = alpha;
    const Eigen::Index tail = n - m - 1;
    if (tail > 0) {
      factor.L.col(m).tail(tail) = A.col(m).tail(tail) / alpha;
      // Full trailing update; diagonal clamped at zero like the lazy path so
      // later pivoting decisions follow the same rule set.
      A.bottomRightCorner(tail, tail).noalias() -=
          factor.L.col(m).tail(tail) * factor.L.col(m).tail(tail).transpose();
      for (Eigen::Index j = m + 1; j < n; ++j) {
        if (A(j, j) < 0.0) A(j, j) = 0.0;
      }
    }
    A(m, m) = 0.0;
  }

  if (rank != rank_cap) {
    factor.L.conservativeResize(Eigen::NoChange, rank);
  }
  factor.residual_diag = A.diagonal();
  return factor;
}

Eigen::MatrixXd qr_factor_oracle(const Eigen::MatrixXd& features_permuted,
                                 Eigen::Index num_pivots) {
  const Eigen::Index n = features_permuted.rows();
  const Eigen::Index f = features_permuted.cols();
  if (num_pivots < 0 || num_pivots > n) {
    throw ArgumentError("qr_factor_oracle: pivot count out of range");
  }

  // Modified Gram-Schmidt on the pivot feature vectors (columns of Phi^T).
  Eigen::MatrixXd Q(f, num_pivots);
  for (Eigen::Index j = 0; j < num_pivots; ++j) {
    Eigen::VectorXd v = features_permuted.row(j).transpose();
    for (Eigen::Index k = 0; k < j; ++k) {
      v -= Q.col(k).dot(v) * Q.col(k);
    }
    const double norm = v.norm();
    if (norm < 1e-12) {
      throw DegenerateFeatureError(
          "pivot feature vector is linearly dependent on its predecessors");
    }
    Q.col(j) = v / norm;
  }
  // R[j, i] = <e_j, phi(x_i)> for every point, pivots included; the diagonal
  // is positive by construction.
  return Q.transpose() * features_permuted.transpose();
}

double residual_identity_check(const KernelSpec& spec, const PointSet& X,
                               const CholeskyFactor& factor, Eigen::Index cap) {
  if (X.size() > cap) {
    throw OracleScaleError("instance exceeds the dense oracle cap");
  }
  const GramMatrix gram = dense_gram(spec, X, cap);
  const IndexVector pivots = factor.pivots();
  const std::span<const Eigen::Index> selected(pivots.data(), pivots.size());

  double max_dev = 0.0;
  for (Eigen::Index pos = 0; pos < factor.n(); ++pos) {
    const Eigen::Index original =
        factor.permutation[static_cast<std::size_t>(pos)];
    const double dense = subspace_sq_distance(gram, selected, original);
    max_dev = std::max(max_dev, std::abs(factor.residual_diag[pos] - dense));
  }
  return max_dev;
}

ResidualMetrics residual_matrix_metrics(const GramMatrix& gram,
                                        const CholeskyFactor& factor) {
  const Eigen::Index n = gram.n();
  if (factor.n() != n) {
    throw ArgumentError("factor and Gram matrix sizes disagree");
  }
  // Conjugate K by the factor's permutation so rows line up with L.
  Eigen::MatrixXd K_perm(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      K_perm(a, b) = gram.K(factor.permutation[static_cast<std::size_t>(a)],
                            factor.permutation[static_cast<std::size_t>(b)]);
    }
  }
  Eigen::MatrixXd residual = K_perm - factor.L * factor.L.transpose();
  ResidualMetrics metrics;
  metrics.trace_error = residual.trace();
  metrics.frobenius_error = residual.norm();
  metrics.min_eigenvalue = min_eigenvalue(residual);
  return metrics;
}

OrthonormalBasis gram_schmidt_basis(const Eigen::MatrixXd& features_permuted,
                                    Eigen::Index num_pivots) {
  const Eigen::Index f = features_permuted.cols();
  if (num_pivots < 0 || num_pivots > features_permuted.rows()) {
    throw ArgumentError("gram_schmidt_basis: pivot count out of range");
  }
  // Classical Gram-Schmidt, the projection route: residual of the pivot
  // feature against the accumulated basis, then normalize.
  OrthonormalBasis basis;
  basis.vectors.resize(f, num_pivots);
  for (Eigen::Index m = 0; m < num_pivots; ++m) {
    const Eigen::VectorXd phi = features_permuted.row(m).transpose();
    Eigen::VectorXd r = phi;
    for (Eigen::Index j = 0; j < m; ++j) {
      r -= basis.vectors.col(j).dot(phi) * basis.vectors.col(j);
    }
    const double norm = r.norm();
    if (norm < 1e-12) {
      throw DegenerateFeatureError(
          "pivot feature vector is linearly dependent on its predecessors");
    }
    basis.vectors.col(m) = r / norm;
  }
  return basis;
}

double projection_coefficient_check(const Eigen::MatrixXd& features_permuted,
                                    const OrthonormalBasis& basis,
                                    const CholeskyFactor& factor) {
  if (features_permuted.rows() != factor.n() ||
      basis.vectors.cols() != factor.rank()) {
    throw ArgumentError("projection check: shapes disagree with the factor");
  }
  // <phi(x_i), e_j> for every point/basis pair vs the stored coefficients.
  const Eigen::MatrixXd projected = features_permuted * basis.vectors;
  return (projected - factor.L).cwiseAbs().maxCoeff();
}

double min_eigenvalue(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
      0.5 * (symmetric + symmetric.transpose()), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw NumericError("symmetric eigenvalue computation failed");
  }
  return solver.eigenvalues().minCoeff();
}

}  // namespace lazychol::oracles
