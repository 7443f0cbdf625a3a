/*
 * This file is part of lazychol, a toolkit for lazy pivoted Cholesky
 * decomposition of kernel matrices.
 *
 * Copyright (c) 2026 lazychol contributors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */
#include "lazychol/preconditioner.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lazychol {

LowRankPlusDiagonal::LowRankPlusDiagonal(const CholeskyFactor& factor,
                                         double sigma2)
    : sigma2_(sigma2) {
  if (!(sigma2 > 0.0)) {
    throw ArgumentError("noise variance must be positive, got " +
                        std::to_string(sigma2));
  }
  if (factor.n() == 0) {
    throw ArgumentError("preconditioner requires a non-empty factor");
  }
  L_ = unpermute(factor);
  const Eigen::Index m = L_.cols();
  Eigen::MatrixXd core = Eigen::MatrixXd::Identity(m, m) * sigma2_;
  core.noalias() += L_.transpose() * L_;
  core_.compute(core);
  if (core_.info() != Eigen::Success) {
    // sigma^2 I + L^T L is positive definite for sigma^2 > 0; failure here
    // means the factor carries non-finite entries.
    throw NumericError("failed to factor preconditioner core matrix");
  }
}

Eigen::VectorXd LowRankPlusDiagonal::apply(const Eigen::VectorXd& v) const {
  if (v.size() != L_.rows()) {
    throw ArgumentError("preconditioner expects vectors of length " +
                        std::to_string(L_.rows()) + ", got " +
                        std::to_string(v.size()));
  }
  if (L_.cols() == 0) {
    return v / sigma2_;
  }
  Eigen::VectorXd t = L_.transpose() * v;
  Eigen::VectorXd out = v;
  out.noalias() -= L_ * core_.solve(t);
  return out / sigma2_;
}

LowRankPlusDiagonal build_preconditioner(const CholeskyFactor& factor,
                                         double sigma2) {
  return LowRankPlusDiagonal(factor, sigma2);
}

namespace {

constexpr int kResidualRefreshInterval = 50;

void check_finite(const Eigen::VectorXd& v, int iteration) {
  if (!v.allFinite()) {
    throw DivergenceError(iteration);
  }
}

}  // namespace

std::pair<Eigen::VectorXd, SolveReport> cg_solve(
    const LinearOperator& matvec, const Eigen::VectorXd& b,
    const LowRankPlusDiagonal* precond, double tol, int max_iter) {
  if (!(tol > 0.0)) {
    throw ArgumentError("solver tolerance must be positive, got " +
                        std::to_string(tol));
  }
  if (max_iter < 1) {
    throw ArgumentError("maximum iteration count must be at least 1, got " +
                        std::to_string(max_iter));
  }
  if (!b.allFinite()) {
    throw ArgumentError("right-hand side contains non-finite entries");
  }

  SolveReport report;
  report.preconditioned = (precond != nullptr);

  const double b_norm = b.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
  if (b_norm == 0.0) {
    report.converged = true;
    report.residual_norms.push_back(0.0);
    return {x, report};
  }
  const double threshold = tol * b_norm;

  Eigen::VectorXd r = b;  // r_0 = b - A * 0
  report.residual_norms.push_back(r.norm());
  if (report.residual_norms.back() <= threshold) {
    report.converged = true;
    return {x, report};
  }

  Eigen::VectorXd z = precond ? precond->apply(r) : r;
  Eigen::VectorXd p = z;
  double rz = r.dot(z);

  for (int k = 0; k < max_iter; ++k) {
    Eigen::VectorXd Ap = matvec(p);
    check_finite(Ap, k + 1);
    const double pAp = p.dot(Ap);
    if (!std::isfinite(pAp) || pAp <= 0.0) {
      // Curvature loss: the operator is not behaving as SPD in this
      // direction, so the recurrences are no longer trustworthy.
      throw DivergenceError(k + 1);
    }
    const double alpha = rz / pAp;
    x += alpha * p;
    r -= alpha * Ap;

    Eigen::VectorXd true_residual = b - matvec(x);
    check_finite(true_residual, k + 1);
    if ((k + 1) % kResidualRefreshInterval == 0) {
      r = true_residual;
    }
    check_finite(r, k + 1);
    const double true_norm = true_residual.norm();
    report.residual_norms.push_back(true_norm);
    report.iterations = k + 1;
    if (true_norm <= threshold) {
      report.converged = true;
      return {x, report};
    }

    z = precond ? precond->apply(r) : r;
    check_finite(z, k + 1);
    const double rz_next = r.dot(z);
    const double beta = rz_next / rz;
    if (!std::isfinite(beta)) {
      throw DivergenceError(k + 1);
    }
    p = z + beta * p;
    rz = rz_next;
  }
  return {x, report};
}

Eigen::VectorXd kernel_matvec(const KernelSpec& spec, const PointSet& X,
                              double sigma2, const Eigen::VectorXd& v,
                              Eigen::Index block_rows) {
  spec.validate();
  if (v.size() != X.size()) {
    throw ArgumentError("kernel matvec expects vectors of length " +
                        std::to_string(X.size()) + ", got " +
                        std::to_string(v.size()));
  }
  if (!(sigma2 >= 0.0)) {
    throw ArgumentError("noise variance must be non-negative, got " +
                        std::to_string(sigma2));
  }
  if (block_rows < 1) {
    throw ArgumentError("block size must be at least 1");
  }
  const Eigen::Index n = X.size();
  Eigen::VectorXd out(n);
  for (Eigen::Index start = 0; start < n; start += block_rows) {
    const Eigen::Index rows = std::min(block_rows, n - start);
    RowMatrixXd block(rows, X.dim());
    block = X.matrix().middleRows(start, rows);
    PointSet block_points(block);
    Eigen::MatrixXd K_block = eval_cross(spec, block_points, X);
    out.segment(start, rows).noalias() = K_block * v;
  }
  out += sigma2 * v;
  return out;
}

}  // namespace lazychol
