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

#include <Eigen/Core>

#include <stdexcept>
#include <string>
#include <vector>

#define LAZYCHOL_VERSION "0.1.0"

namespace lazychol {

// Points are stored row-major so a single point is a contiguous row.
using RowMatrixXd =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using IndexVector = std::vector<Eigen::Index>;

struct ArgumentError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Kernel produced a negative or non-finite diagonal: not PSD or corrupt data.
struct InvalidKernelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedFeatureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Instance exceeds the configured dense-oracle size cap.
struct OracleScaleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A dense oracle solve hit a numerically singular system; surfaced, never
// papered over with regularization.
struct OracleDegeneracyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DegenerateFeatureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
  ParseError(const std::string& what, long row, long column)
      : std::runtime_error(what), row(row), column(column) {}
  long row = -1;     // 1-based data location, -1 when not applicable
  long column = -1;
};

struct DivergenceError : std::runtime_error {
  explicit DivergenceError(int iteration)
      : std::runtime_error("solver diverged at iteration " +
                           std::to_string(iteration)),
        iteration(iteration) {}
  DivergenceError(const std::string& what, int iteration)
      : std::runtime_error(what), iteration(iteration) {}
  int iteration = 0;
};

// N points in D dimensions, the raw inputs to the kernel. Immutable after
// construction; every entry finite, N >= 1, D >= 1.
class PointSet {
 public:
  explicit PointSet(RowMatrixXd points) : points_(std::move(points)) {
    if (points_.rows() < 1 || points_.cols() < 1) {
      throw ArgumentError("PointSet requires at least one point and one dimension");
    }
    if (!points_.allFinite()) {
      throw ArgumentError("PointSet entries must all be finite");
    }
  }

  Eigen::Index size() const { return points_.rows(); }
  Eigen::Index dim() const { return points_.cols(); }
  const RowMatrixXd& matrix() const { return points_; }
  Eigen::Ref<const Eigen::RowVectorXd> point(Eigen::Index i) const {
    return points_.row(i);
  }

 private:
  RowMatrixXd points_;
};

}  // namespace lazychol
