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

#include <atomic>
#include <cstdint>
#include <span>
#include <string>

#include "lazychol/types.hpp"

namespace lazychol {

enum class KernelFamily { RBF, Matern12, Matern32, Matern52, Linear, Polynomial };

const char* to_string(KernelFamily family);
KernelFamily kernel_family_from_string(const std::string& name);

// Kernel family plus hyperparameters defining k(.,.). `variance` multiplies
// the whole kernel, so stationary families have k(x,x) = variance.
// `lengthscale` applies to RBF/Matern, `degree`/`offset` to Polynomial only.
struct KernelSpec {
  KernelFamily family = KernelFamily::RBF;
  double lengthscale = 1.0;
  double variance = 1.0;
  int degree = 1;
  double offset = 0.0;

  bool is_stationary() const;
  void validate() const;  // throws ArgumentError

  static KernelSpec rbf(double lengthscale, double variance = 1.0);
  static KernelSpec matern12(double lengthscale, double variance = 1.0);
  static KernelSpec matern32(double lengthscale, double variance = 1.0);
  static KernelSpec matern52(double lengthscale, double variance = 1.0);
  static KernelSpec linear(double variance = 1.0);
  static KernelSpec polynomial(int degree, double offset, double variance = 1.0);
};

double eval_pair(const KernelSpec& spec, Eigen::Ref<const Eigen::RowVectorXd> x,
                 Eigen::Ref<const Eigen::RowVectorXd> y);

// Entry i is k(x_i, x_i), computed in O(N) without forming any matrix.
Eigen::VectorXd eval_diag(const KernelSpec& spec, const PointSet& X);

Eigen::MatrixXd eval_cross(const KernelSpec& spec, const PointSet& A,
                           const PointSet& B);

// Single cross column k(X[rows], X[col]); the lazy access pattern of the
// decomposition. Entry j is k(x_{rows[j]}, x_col).
Eigen::VectorXd eval_cross_rows(const KernelSpec& spec, const PointSet& X,
                                std::span<const Eigen::Index> rows,
                                Eigen::Index col);

// Finite-dimensional feature matrix Phi with Phi * Phi^T equal to the Gram
// matrix. Supported for Linear and Polynomial; stationary families have an
// infinite-dimensional feature map and throw UnsupportedFeatureError.
// Polynomial features enumerate monomials in graded lexicographic order
// (grade ascending, exponents lexicographically descending within a grade)
// with square-root multinomial weights; zero-weight columns are dropped.
Eigen::MatrixXd explicit_features(const KernelSpec& spec, const PointSet& X);

// Exact scalar-evaluation counts for one decomposition run; monotonically
// nondecreasing, updated atomically.
struct EvalCounter {
  std::atomic<std::int64_t> pair_evals{0};
  std::atomic<std::int64_t> diag_evals{0};
};

// Same evaluation surfaces as the free functions, bumping an EvalCounter on
// every call. Complexity tests read the counts back.
class CountingKernel {
 public:
  explicit CountingKernel(KernelSpec spec);

  CountingKernel(const CountingKernel&) = delete;
  CountingKernel& operator=(const CountingKernel&) = delete;

  const KernelSpec& spec() const { return spec_; }

  double pair(Eigen::Ref<const Eigen::RowVectorXd> x,
              Eigen::Ref<const Eigen::RowVectorXd> y) const;
  Eigen::VectorXd diag(const PointSet& X) const;
  Eigen::MatrixXd cross(const PointSet& A, const PointSet& B) const;
  Eigen::VectorXd cross_rows(const PointSet& X,
                             std::span<const Eigen::Index> rows,
                             Eigen::Index col) const;

  std::int64_t pair_evals() const { return counter_.pair_evals.load(); }
  std::int64_t diag_evals() const { return counter_.diag_evals.load(); }

 private:
  KernelSpec spec_;
  mutable EvalCounter counter_;
};

}  // namespace lazychol
