/*
 * This file is part of lazychol, a toolkit for lazy pivoted Cholesky
 * decomposition of kernel matrices.
 *
 * Copyright (c) 2026 lazychol contributors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */
#include "lazychol/decomposition.hpp"

#include <algorithm>
#include <cmath>

namespace lazychol {

const char* to_string(StopReason reason) {
  switch (reason) {
    case StopReason::ReachedMaxRank: return "ReachedMaxRank";
    case StopReason::ToleranceMet: return "ToleranceMet";
  }
  return "unknown";
}

StopReason stop_reason_from_string(const std::string& name) {
  if (name == "ReachedMaxRank") return StopReason::ReachedMaxRank;
  if (name == "ToleranceMet") return StopReason::ToleranceMet;
  throw ArgumentError("unknown stop reason: " + name);
}

void DecompositionConfig::validate() const {
  if (max_rank < 0) throw ArgumentError("max_rank must be nonnegative");
  if (!(tolerance >= 0.0) || !std::isfinite(tolerance)) {
    throw ArgumentError("tolerance must be nonnegative and finite");
  }
}

IndexVector CholeskyFactor::pivots() const {
  return IndexVector(permutation.begin(),
                     permutation.begin() + static_cast<std::size_t>(rank()));
}

namespace {

// First position attaining the maximum of d[from..n): lowest permuted
// position wins ties, the one fixed rule shared with the dense FPS oracle.
Eigen::Index argmax_tail(const Eigen::VectorXd& d, Eigen::Index from) {
  Eigen::Index best = from;
  for (Eigen::Index j = from + 1; j < d.size(); ++j) {
    if (d[j] > d[best]) best = j;
  }
  return best;
}

}  // namespace

DecompositionResult pivoted_cholesky(const CountingKernel& kernel,
                                     const PointSet& X,
                                     const DecompositionConfig& config) {
  config.validate();
  const Eigen::Index n = X.size();
  const Eigen::Index max_rank = std::min(config.max_rank, n);
  const std::int64_t pair_evals_before = kernel.pair_evals();

  Eigen::VectorXd d = kernel.diag(X);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!std::isfinite(d[i]) || d[i] < 0.0) {
      throw InvalidKernelError(
          "kernel diagonal has a negative or non-finite entry: kernel is not "
          "PSD or data is corrupt");
    }
  }

  CholeskyFactor factor;
  factor.L = Eigen::MatrixXd::Zero(n, max_rank);
  factor.permutation.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    factor.permutation[static_cast<std::size_t>(i)] = i;
  }
  factor.stop_reason = StopReason::ReachedMaxRank;

  DecompositionTrace trace;
  trace.initial_trace = d.sum();

  Eigen::Index rank = max_rank;
  for (Eigen::Index m = 0; m < max_rank; ++m) {
    // 1. Selection: the point farthest from the current subspace.
    const Eigen::Index i_star = argmax_tail(d, m);
    if (i_star != m) {
      std::swap(factor.permutation[static_cast<std::size_t>(m)],
                factor.permutation[static_cast<std::size_t>(i_star)]);
      std::swap(d[m], d[i_star]);
      factor.L.row(m).swap(factor.L.row(i_star));
    }

    // Tolerance check after the swap, before normalization; strict <.
    if (d[m] < config.tolerance) {
      rank = m;
      factor.stop_reason = StopReason::ToleranceMet;
      break;
    }
    if (d[m] <= 0.0) {
      // Negative max can only happen with clamping off and is a kernel
      // defect. An exactly zero max (clamped residuals, tolerance 0) means
      // the matrix is already reproduced; truncating is exact.
      if (d[m] < 0.0) {
        throw InvalidKernelError(
            "selected pivot has a negative residual: kernel is not PSD");
      }
      rank = m;
      factor.stop_reason = StopReason::ToleranceMet;
      break;
    }

    // 2. Basis construction.
    const double pivot_value = d[m];
    factor.L(m, m) = std::sqrt(pivot_value);

    // 3. Lazy column evaluation against remaining permuted points.
    const Eigen::Index tail = n - m - 1;
    if (tail > 0) {
      const Eigen::VectorXd raw = kernel.cross_rows(
          X,
          std::span<const Eigen::Index>(factor.permutation.data() + m + 1,
                                        static_cast<std::size_t>(tail)),
          factor.permutation[static_cast<std::size_t>(m)]);
      // Schur complement: subtract the projection onto previous basis
      // vectors, then normalize.
      factor.L.col(m).tail(tail) =
          (raw - factor.L.bottomLeftCorner(tail, m) *
                     factor.L.row(m).head(m).transpose()) /
          factor.L(m, m);

      // 4. Residual update (Pythagoras), clamped at zero against float
      // precision when enabled.
      d.tail(tail) -= factor.L.col(m).tail(tail).array().square().matrix();
      if (config.clamp_negative) {
        d.tail(tail) = d.tail(tail).cwiseMax(0.0);
      }
    }
    // The consumed pivot now lies in the span: its subspace distance is 0.
    d[m] = 0.0;

    trace.steps.push_back(TraceStep{
        m + 1, factor.permutation[static_cast<std::size_t>(m)], pivot_value,
        d.sum(), kernel.pair_evals() - pair_evals_before});
  }

  if (rank != max_rank) {
    factor.L.conservativeResize(Eigen::NoChange, rank);
  }
  factor.residual_diag = std::move(d);
  return DecompositionResult{std::move(factor), std::move(trace)};
}

DecompositionResult pivoted_cholesky(const KernelSpec& spec, const PointSet& X,
                                     const DecompositionConfig& config) {
  CountingKernel kernel(spec);
  return pivoted_cholesky(kernel, X, config);
}

Eigen::VectorXd factor_times_transpose_diag(const CholeskyFactor& factor) {
  return factor.L.rowwise().squaredNorm();
}

Eigen::MatrixXd unpermute(const CholeskyFactor& factor) {
  Eigen::MatrixXd out(factor.n(), factor.rank());
  for (Eigen::Index m = 0; m < factor.n(); ++m) {
    out.row(factor.permutation[static_cast<std::size_t>(m)]) = factor.L.row(m);
  }
  return out;
}

IndexVector permutation_from_pivots(Eigen::Index n, const IndexVector& pivots) {
  if (static_cast<Eigen::Index>(pivots.size()) > n) {
    throw ArgumentError("more pivots than points");
  }
  IndexVector perm(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  for (std::size_t m = 0; m < pivots.size(); ++m) {
    const Eigen::Index target = pivots[m];
    if (target < 0 || target >= n) {
      throw ArgumentError("pivot index out of range");
    }
    // The selected index currently sits at or after position m; swapping it
    // into place replays the algorithm's transposition sequence.
    std::size_t pos = m;
    while (pos < perm.size() && perm[pos] != target) ++pos;
    if (pos == perm.size()) {
      throw ArgumentError("duplicate pivot index in pivot list");
    }
    std::swap(perm[m], perm[pos]);
  }
  return perm;
}

}  // namespace lazychol
