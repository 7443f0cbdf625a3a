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

#include <cstdint>
#include <vector>

#include "lazychol/kernels.hpp"
#include "lazychol/types.hpp"

namespace lazychol {

enum class StopReason { ReachedMaxRank, ToleranceMet };

const char* to_string(StopReason reason);
StopReason stop_reason_from_string(const std::string& name);

struct DecompositionConfig {
  Eigen::Index max_rank = 0;
  // Absolute threshold on the largest remaining residual diagonal entry,
  // compared strictly (stop when max < tolerance). Not scaled by the
  // diagonal; callers wanting a relative stop scale it themselves.
  double tolerance = 1e-6;
  bool clamp_negative = true;

  void validate() const;
};

// Partial factor K ~= L L^T with greedy max-diagonal pivoting.
//
// Rows of L are stored in permuted order: row m corresponds to original
// point permutation[m]. The first rank() entries of the permutation are the
// selected pivots in selection order. residual_diag is the per-point squared
// RKHS distance to the span of the selected features, also in permuted
// order; consumed pivot slots hold 0.
struct CholeskyFactor {
  Eigen::MatrixXd L;                // N x rank, column-major, permuted rows
  IndexVector permutation;          // length N, position -> original index
  Eigen::VectorXd residual_diag;    // length N, permuted order
  StopReason stop_reason = StopReason::ReachedMaxRank;

  Eigen::Index n() const { return L.rows(); }
  Eigen::Index rank() const { return L.cols(); }
  IndexVector pivots() const;       // first rank() permutation entries
};

struct TraceStep {
  Eigen::Index step = 0;          // 1-based
  Eigen::Index pivot_index = -1;  // original index of the selected point
  double pivot_value = 0.0;       // d at selection, before normalization
  double residual_trace = 0.0;    // sum of residual diagonal after the step
  std::int64_t pair_evals = 0;    // cumulative pair evaluations by this run
};

struct DecompositionTrace {
  double initial_trace = 0.0;  // sum of the raw kernel diagonal
  std::vector<TraceStep> steps;
};

struct DecompositionResult {
  CholeskyFactor factor;
  DecompositionTrace trace;
};

// Lazy pivoted Cholesky decomposition: greedy max-diagonal pivot selection,
// on-demand column evaluation, Schur-complement update, early stop when the
// largest remaining residual falls below the tolerance. Costs exactly N
// diagonal evaluations plus sum_{m=1..rank} (N - m) pair evaluations; the
// N x N matrix is never formed.
DecompositionResult pivoted_cholesky(const CountingKernel& kernel,
                                     const PointSet& X,
                                     const DecompositionConfig& config);
DecompositionResult pivoted_cholesky(const KernelSpec& spec, const PointSet& X,
                                     const DecompositionConfig& config);

// Row-wise squared norms of L (permuted order): the explained energy per
// point. eval_diag - result recovers residual_diag up to clamping.
Eigen::VectorXd factor_times_transpose_diag(const CholeskyFactor& factor);

// L with rows returned to original point order: output row permutation[m]
// equals L row m.
Eigen::MatrixXd unpermute(const CholeskyFactor& factor);

// Replays the selection swaps to recover the full length-n permutation from
// the pivot list alone; used when deserializing factors.
IndexVector permutation_from_pivots(Eigen::Index n, const IndexVector& pivots);

}  // namespace lazychol
