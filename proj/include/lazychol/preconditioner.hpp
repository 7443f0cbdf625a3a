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

#include <Eigen/Cholesky>

#include <functional>
#include <utility>
#include <vector>

#include "lazychol/decomposition.hpp"
#include "lazychol/kernels.hpp"
#include "lazychol/types.hpp"

namespace lazychol {

// Inverse of L L^T + sigma^2 I applied through the M x M core
// C = sigma^2 I + L^T L:
//
//   apply(v) = (1/sigma^2) (v - L C^-1 L^T v)
//
// C is factored once at construction (O(N M^2)); each application costs
// O(N M). The factor is consumed in original point order, matching the
// right-hand sides of the solves it preconditions.
class LowRankPlusDiagonal {
 public:
  LowRankPlusDiagonal(const CholeskyFactor& factor, double sigma2);

  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;

  Eigen::Index n() const { return L_.rows(); }
  Eigen::Index rank() const { return L_.cols(); }
  double sigma2() const { return sigma2_; }
  const Eigen::MatrixXd& factor_original_order() const { return L_; }

 private:
  Eigen::MatrixXd L_;  // N x M, original order
  double sigma2_;
  Eigen::LLT<Eigen::MatrixXd> core_;  // sigma^2 I + L^T L
};

LowRankPlusDiagonal build_preconditioner(const CholeskyFactor& factor,
                                         double sigma2);

// CG convergence record. residual_norms holds the true residual norm
// ||b - A x_k|| for every iteration, recomputed from the operator rather
// than taken from the recurrence.
struct SolveReport {
  int iterations = 0;
  std::vector<double> residual_norms;
  bool converged = false;
  bool preconditioned = false;
};

using LinearOperator = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Preconditioned conjugate gradients on a symmetric positive definite
// operator (caller's contract). Terminates when the true residual satisfies
// ||r|| <= tol * ||b|| or after max_iter iterations. Direction updates use
// the recurrence residual, refreshed from the operator every 50 iterations
// against drift. Throws DivergenceError when non-finite values appear.
std::pair<Eigen::VectorXd, SolveReport> cg_solve(
    const LinearOperator& matvec, const Eigen::VectorXd& b,
    const LowRankPlusDiagonal* precond, double tol, int max_iter);

// K v + sigma^2 v computed in row blocks without materializing K.
Eigen::VectorXd kernel_matvec(const KernelSpec& spec, const PointSet& X,
                              double sigma2, const Eigen::VectorXd& v,
                              Eigen::Index block_rows = 256);

}  // namespace lazychol
