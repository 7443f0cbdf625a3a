/*
 * This file is part of lazychol, a toolkit for lazy pivoted Cholesky
 * decomposition of kernel matrices.
 *
 * Copyright (c) 2026 lazychol contributors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */
#include "lazychol/verification.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <sstream>
#include <utility>

#include "lazychol/oracles.hpp"

namespace lazychol {

void VerificationConfig::validate() const {
  if (instances < 0 || feature_instances < 0) {
    throw ArgumentError("instance counts cannot be negative");
  }
  if (instances == 0 && feature_instances == 0 && !include_fixtures) {
    throw ArgumentError("verification needs at least one suite enabled");
  }
  if (max_n < 4) {
    throw ArgumentError("verification needs max_n >= 4, got " +
                        std::to_string(max_n));
  }
  if (max_rank < 1) {
    throw ArgumentError("verification needs max_rank >= 1, got " +
                        std::to_string(max_rank));
  }
}

bool VerificationReport::all_passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.passed; });
}

const CheckResult* VerificationReport::first_failure() const {
  for (const CheckResult& c : checks) {
    if (!c.passed) {
      return &c;
    }
  }
  return nullptr;
}

namespace {

using oracles::GramMatrix;
using oracles::PivotSequence;

constexpr double kInf = std::numeric_limits<double>::infinity();

// Accumulates one named property over every instance it runs on, keeping
// the worst deviation and the first failure's seed.
class Check {
 public:
  Check(std::string name, double bound) {
    result_.name = std::move(name);
    result_.bound = bound;
  }

  void observe(double value, std::uint64_t seed, const std::string& note = {}) {
    ++result_.instances;
    if (!(value <= result_.worst_observed)) {
      result_.worst_observed = value;
    }
    if (result_.passed && !(value <= result_.bound)) {
      result_.passed = false;
      std::ostringstream msg;
      msg << "instance seed " << seed << ": observed " << value << " > bound "
          << result_.bound;
      if (!note.empty()) {
        msg << " (" << note << ")";
      }
      result_.detail = msg.str();
    }
  }

  // Exact pass/fail facts (sequence equality, counts); bound must be 0.
  void require(bool ok, std::uint64_t seed, const std::string& note) {
    observe(ok ? 0.0 : 1.0, seed, note);
  }

  const CheckResult& result() const { return result_; }

 private:
  CheckResult result_;
};

struct Battery {
  Check pivot_match{"pivot_sequence_matches_subspace_fps", 0.0};
  Check pivot_values{"pivot_values_match_subspace_distances", 1e-8};
  Check residual_match{"residual_diag_matches_subspace_distances", 1e-8};
  Check trace_match{"residual_trace_matches_dense", 1e-8};
  Check dense_factor{"factor_matches_dense_pivoted_cholesky", 1e-10};
  Check psd{"residual_matrix_stays_psd", 1e-8};
  Check monotone{"pivot_values_nonincreasing", 1e-12};
  Check evals{"kernel_eval_count_closed_form", 0.0};
  Check detvol{"selected_determinant_matches_diagonal_product", 1e-8};
  Check rowsq{"row_energy_complements_residual", 1e-10};
  Check unperm{"unpermute_restores_original_order", 0.0};
  Check trunc{"truncation_returns_factor_prefix", 0.0};
  Check qr{"gram_schmidt_transpose_matches_factor", 1e-8};
  Check proj{"projection_coefficients_match_factor", 1e-8};
  Check recovery_rank{"exact_recovery_rank_bounded_by_feature_dim", 0.0};
  Check recovery_trace{"exact_recovery_residual_trace", 1e-8};
  Check fix_identical{"identical_points_collapse_to_rank_one", 0.0};
  Check fix_tie{"tied_candidates_resolve_to_lowest_position", 0.0};
  Check fix_dependent{"dependent_point_splits_sampling_strategies", 0.0};
  Check fix_duplicate{"duplicate_point_reported_not_reselected", 0.0};
};

Eigen::MatrixXd permuted_matrix(const Eigen::MatrixXd& K,
                                const IndexVector& perm) {
  const Eigen::Index n = K.rows();
  Eigen::MatrixXd P(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      P(i, j) = K(perm[static_cast<std::size_t>(i)],
                  perm[static_cast<std::size_t>(j)]);
    }
  }
  return P;
}

Eigen::VectorXd permuted_vector(const Eigen::VectorXd& v,
                                const IndexVector& perm) {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out[i] = v[perm[static_cast<std::size_t>(i)]];
  }
  return out;
}

// The residual diagonal after m steps, reconstructed from the final factor:
// diag - row energy of the first m columns, clamped like the live update and
// zeroed on consumed slots. Row order is the final permutation, which agrees
// with the live order on the first m slots and holds the same set of points
// elsewhere, so per-point comparisons against dense distances are unaffected.
Eigen::VectorXd prefix_residual(const CholeskyFactor& factor,
                                const Eigen::VectorXd& diag_perm,
                                Eigen::Index m) {
  Eigen::VectorXd d = diag_perm;
  if (m > 0) {
    d -= factor.L.leftCols(m).rowwise().squaredNorm();
  }
  d = d.cwiseMax(0.0);
  for (Eigen::Index p = 0; p < m; ++p) {
    d[p] = 0.0;
  }
  return d;
}

void run_core_instance(Battery& b, const RandomInstance& inst,
                       bool try_truncation) {
  const std::uint64_t seed = inst.seed;
  const Eigen::Index n = inst.points.size();

  CountingKernel kernel(inst.kernel);
  const DecompositionResult run =
      pivoted_cholesky(kernel, inst.points, DecompositionConfig{inst.rank, 0.0});
  const CholeskyFactor& factor = run.factor;
  const DecompositionTrace& trace = run.trace;
  const Eigen::Index rank = factor.rank();

  const GramMatrix gram = oracles::dense_gram(inst.kernel, inst.points);
  const double max_diag = gram.K.diagonal().maxCoeff();
  const double scale = std::max(1.0, max_diag);
  const double dense_trace = gram.K.trace();

  // Pivot sequences: lazy vs dense subspace farthest-point sampling.
  const PivotSequence seq = oracles::subspace_fps(gram, inst.rank, 0.0);
  const IndexVector pivots = factor.pivots();
  const bool pivots_equal = pivots == seq.indices;
  b.pivot_match.require(pivots_equal, seed,
                        "lazy pivots differ from dense subspace FPS");

  if (pivots_equal) {
    double dev = 0.0;
    for (std::size_t s = 0; s < seq.sq_distances.size(); ++s) {
      dev = std::max(dev, std::abs(trace.steps[s].pivot_value -
                                   seq.sq_distances[s]) /
                              scale);
    }
    b.pivot_values.observe(dev, seed);
  }

  // Residual diagonal against dense subspace distances at every step.
  const Eigen::VectorXd diag_perm =
      permuted_vector(gram.K.diagonal(), factor.permutation);
  {
    double dev = 0.0;
    for (Eigen::Index m = 0; m <= rank; ++m) {
      const Eigen::VectorXd d =
          (m == rank) ? factor.residual_diag
                      : prefix_residual(factor, diag_perm, m);
      const std::span<const Eigen::Index> selected(pivots.data(),
                                                   static_cast<std::size_t>(m));
      for (Eigen::Index p = 0; p < n; ++p) {
        const double dense = oracles::subspace_sq_distance(
            gram, selected, factor.permutation[static_cast<std::size_t>(p)]);
        dev = std::max(dev, std::abs(d[p] - dense) / scale);
      }
    }
    b.residual_match.observe(dev, seed);
  }

  // Residual trace and PSD-ness of the dense residual matrix per step.
  {
    const Eigen::MatrixXd K_perm = permuted_matrix(gram.K, factor.permutation);
    // Relative deviation with a floor: once the residual is exhausted down
    // to rounding noise, a pure ratio of two near-zero sums is meaningless.
    const double floor = std::max(1e-6 * std::abs(dense_trace), 1e-300);
    double trace_dev =
        std::abs(trace.initial_trace - dense_trace) /
        std::max(std::abs(dense_trace), floor);
    double psd_dev = 0.0;
    for (Eigen::Index m = 1; m <= rank; ++m) {
      const Eigen::MatrixXd E =
          K_perm - factor.L.leftCols(m) * factor.L.leftCols(m).transpose();
      const double dense_tr = E.trace();
      const double recorded =
          trace.steps[static_cast<std::size_t>(m - 1)].residual_trace;
      trace_dev =
          std::max(trace_dev, std::abs(recorded - dense_tr) /
                                  std::max(std::abs(dense_tr), floor));
      const double min_eig = oracles::min_eigenvalue(E);
      psd_dev = std::max(
          psd_dev, std::max(0.0, -min_eig) / std::max(dense_trace, 1e-300));
    }
    b.trace_match.observe(trace_dev, seed);
    b.psd.observe(psd_dev, seed);
  }

  // Same factor from the textbook dense implementation.
  {
    const CholeskyFactor dense =
        oracles::dense_pivoted_cholesky(gram, inst.rank, 0.0);
    if (dense.pivots() != pivots || dense.rank() != rank) {
      b.dense_factor.observe(kInf, seed, "dense oracle selected other pivots");
    } else {
      const double lscale =
          std::max(1.0, factor.L.cwiseAbs().maxCoeff());
      b.dense_factor.observe(
          (dense.L - factor.L).cwiseAbs().maxCoeff() / lscale, seed);
    }
  }

  // Selected pivot values never increase.
  {
    double rise = 0.0;
    for (std::size_t s = 1; s < trace.steps.size(); ++s) {
      rise = std::max(rise, (trace.steps[s].pivot_value -
                             trace.steps[s - 1].pivot_value) /
                                scale);
    }
    b.monotone.observe(rise, seed);
  }

  // Exact evaluation accounting: N diagonal, N-m pairs at step m.
  {
    const std::int64_t expected_pairs =
        static_cast<std::int64_t>(n) * rank -
        static_cast<std::int64_t>(rank) * (rank + 1) / 2;
    b.evals.require(kernel.diag_evals() == n &&
                        kernel.pair_evals() == expected_pairs,
                    seed, "kernel evaluation counts off closed form");
  }

  // Volume identity: det of the selected principal minor equals the product
  // of squared factor diagonals. LU determinant, nothing shared with the
  // Cholesky path.
  if (rank <= 12 && rank > 0) {
    Eigen::MatrixXd K_SS(rank, rank);
    for (Eigen::Index a = 0; a < rank; ++a) {
      for (Eigen::Index c = 0; c < rank; ++c) {
        K_SS(a, c) = gram.K(pivots[static_cast<std::size_t>(a)],
                            pivots[static_cast<std::size_t>(c)]);
      }
    }
    const double det = K_SS.determinant();
    double prod = 1.0;
    for (Eigen::Index m = 0; m < rank; ++m) {
      prod *= factor.L(m, m) * factor.L(m, m);
    }
    const double denom = std::max({std::abs(det), std::abs(prod), 1e-300});
    b.detvol.observe(std::abs(det - prod) / denom, seed);
  }

  // Row energy + residual reconstructs the diagonal.
  {
    const Eigen::VectorXd energy = factor_times_transpose_diag(factor);
    Eigen::VectorXd reconstructed = (diag_perm - energy).cwiseMax(0.0);
    for (Eigen::Index p = 0; p < rank; ++p) {
      reconstructed[p] = 0.0;
    }
    b.rowsq.observe(
        (reconstructed - factor.residual_diag).cwiseAbs().maxCoeff() / scale,
        seed);
  }

  // Unpermutation is row-exact.
  {
    const Eigen::MatrixXd U = unpermute(factor);
    double dev = 0.0;
    for (Eigen::Index m = 0; m < n; ++m) {
      dev = std::max(dev,
                     (U.row(factor.permutation[static_cast<std::size_t>(m)]) -
                      factor.L.row(m))
                         .cwiseAbs()
                         .maxCoeff());
    }
    b.unperm.require(dev == 0.0, seed, "unpermuted rows moved in value");
  }

  // A tolerance between two consecutive pivot values truncates to exactly
  // the leading columns of the full run.
  if (try_truncation && rank >= 2) {
    const Eigen::Index k = rank / 2;
    const double hi = trace.steps[static_cast<std::size_t>(k - 1)].pivot_value;
    const double lo = trace.steps[static_cast<std::size_t>(k)].pivot_value;
    const double mid = 0.5 * (hi + lo);
    if (lo < mid && mid <= hi) {
      const DecompositionResult cut = pivoted_cholesky(
          inst.kernel, inst.points, DecompositionConfig{inst.rank, mid});
      bool ok = cut.factor.rank() == k &&
                cut.factor.stop_reason == StopReason::ToleranceMet;
      if (ok) {
        const IndexVector cut_pivots = cut.factor.pivots();
        ok = std::equal(cut_pivots.begin(), cut_pivots.end(), pivots.begin());
      }
      if (ok) {
        const Eigen::MatrixXd full_prefix = unpermute(factor).leftCols(k);
        ok = (unpermute(cut.factor) - full_prefix).cwiseAbs().maxCoeff() == 0.0;
      }
      b.trunc.require(ok, seed, "truncated run is not a bitwise prefix");
    }
  }
}

void run_feature_instance(Battery& b, const RandomInstance& inst) {
  const std::uint64_t seed = inst.seed;
  const DecompositionResult run = pivoted_cholesky(
      inst.kernel, inst.points, DecompositionConfig{inst.rank, 0.0});
  const CholeskyFactor& factor = run.factor;
  const Eigen::Index rank = factor.rank();

  const Eigen::MatrixXd features = explicit_features(inst.kernel, inst.points);
  Eigen::MatrixXd features_perm(features.rows(), features.cols());
  for (Eigen::Index i = 0; i < features.rows(); ++i) {
    features_perm.row(i) =
        features.row(factor.permutation[static_cast<std::size_t>(i)]);
  }

  // Gram-Schmidt QR of the permuted feature vectors: R^T is the factor.
  const Eigen::MatrixXd R = oracles::qr_factor_oracle(features_perm, rank);
  b.qr.observe((R.transpose() - factor.L).cwiseAbs().maxCoeff(), seed);

  // Entrywise: L[i][j] is the coefficient of phi(x_i) on basis vector e_j.
  const oracles::OrthonormalBasis basis =
      oracles::gram_schmidt_basis(features_perm, rank);
  b.proj.observe(
      oracles::projection_coefficient_check(features_perm, basis, factor),
      seed);

  // Finite feature dimension caps the achievable rank; a tight tolerance
  // must drain the residual there.
  {
    const Eigen::VectorXd diag = eval_diag(inst.kernel, inst.points);
    const double initial_trace = diag.sum();
    const DecompositionResult full = pivoted_cholesky(
        inst.kernel, inst.points,
        DecompositionConfig{inst.points.size(), 1e-10 * diag.maxCoeff()});
    b.recovery_rank.require(full.factor.rank() <= features.cols(), seed,
                            "rank exceeded the feature dimension");
    b.recovery_trace.observe(
        full.factor.residual_diag.sum() / std::max(initial_trace, 1e-300),
        seed);
  }
}

void run_fixtures(Battery& b) {
  // Three identical points: the Gram matrix is the rank-one all-ones matrix
  // (times the variance); one step explains everything.
  {
    RowMatrixXd pts(3, 2);
    pts << 0.3, 0.7, 0.3, 0.7, 0.3, 0.7;
    const PointSet X{pts};
    const KernelSpec spec = KernelSpec::rbf(1.0);
    const DecompositionResult run =
        pivoted_cholesky(spec, X, DecompositionConfig{3, 1e-6});
    const bool ok =
        run.factor.rank() == 1 &&
        run.factor.stop_reason == StopReason::ToleranceMet &&
        run.factor.pivots() == IndexVector{0} &&
        (run.factor.L.col(0) - Eigen::VectorXd::Ones(3)).cwiseAbs().maxCoeff() <=
            1e-15 &&
        run.factor.residual_diag.cwiseAbs().maxCoeff() <= 1e-15;
    b.fix_identical.require(ok, 0, "identical points fixture");
  }

  // Unit square corners: after the two diagonal corners, the remaining two
  // candidates are exactly tied by symmetry; both implementations must
  // resolve the tie to the lower position in swap order.
  {
    RowMatrixXd pts(4, 2);
    pts << 0, 0, 1, 0, 0, 1, 1, 1;
    const PointSet X{pts};
    const KernelSpec spec = KernelSpec::rbf(1.0);
    const GramMatrix gram = oracles::dense_gram(spec, X);
    const DecompositionResult run =
        pivoted_cholesky(spec, X, DecompositionConfig{3, 0.0});
    const PivotSequence seq = oracles::subspace_fps(gram, 3, 0.0);

    const IndexVector both = {0, 3, 2};
    const IndexVector selected = {0, 3};
    const double d1 = oracles::subspace_sq_distance(
        gram, std::span<const Eigen::Index>(selected.data(), 2), 1);
    const double d2 = oracles::subspace_sq_distance(
        gram, std::span<const Eigen::Index>(selected.data(), 2), 2);
    const bool ok = run.factor.pivots() == both && seq.indices == both &&
                    d1 == d2;  // the tie must genuinely occur
    b.fix_tie.require(ok, 0, "symmetric-square tie fixture");
  }

  // One point linearly dependent on the other two: subspace selection
  // exhausts it at residual exactly zero, pointwise sampling still takes it
  // at distance 2.
  {
    const PointSet X = linear_dependence_fixture();
    const KernelSpec spec = KernelSpec::linear();
    const GramMatrix gram = oracles::dense_gram(spec, X);
    const DecompositionResult run =
        pivoted_cholesky(spec, X, DecompositionConfig{3, 0.0});
    const PivotSequence sub = oracles::subspace_fps(gram, 3, 0.0);
    const PivotSequence pw = oracles::pointwise_fps(gram, 3, 0);
    const bool ok = run.factor.rank() == 2 &&
                    run.factor.stop_reason == StopReason::ToleranceMet &&
                    run.factor.pivots() == IndexVector{0, 1} &&
                    run.factor.residual_diag[2] <= 1e-10 &&
                    sub.indices == IndexVector{0, 1} &&
                    pw.indices == IndexVector{0, 1, 2} &&
                    pw.sq_distances[2] > 0.1;
    b.fix_dependent.require(ok, 0, "linear-dependence fixture");
  }

  // Exact duplicate: residual hits zero after its twin is selected; the
  // subspace strategies never take it, pointwise sampling takes it last at
  // distance exactly zero.
  {
    RowMatrixXd pts(3, 2);
    pts << 0, 0, 1, 0, 0, 0;
    const PointSet X{pts};
    const KernelSpec spec = KernelSpec::rbf(1.0);
    const GramMatrix gram = oracles::dense_gram(spec, X);
    const DecompositionResult run =
        pivoted_cholesky(spec, X, DecompositionConfig{3, 0.0});
    const PivotSequence sub = oracles::subspace_fps(gram, 3, 0.0);
    const PivotSequence pw = oracles::pointwise_fps(gram, 3, 0);
    const bool ok = run.factor.rank() == 2 &&
                    run.factor.pivots() == IndexVector{0, 1} &&
                    run.factor.residual_diag[2] <= 1e-12 &&
                    sub.indices == IndexVector{0, 1} &&
                    pw.indices == IndexVector{0, 1, 2} &&
                    pw.sq_distances[2] == 0.0;
    b.fix_duplicate.require(ok, 0, "duplicate-point fixture");
  }
}

}  // namespace

PointSet random_separated_points(SplitMix64& rng, Eigen::Index n,
                                 Eigen::Index dim, double min_distance) {
  const double min_sq = min_distance * min_distance;
  RowMatrixXd pts(n, dim);
  Eigen::RowVectorXd candidate(dim);
  Eigen::Index filled = 0;
  long attempts = 0;
  const long attempt_cap = 1000 * static_cast<long>(n) + 1000;
  while (filled < n) {
    if (++attempts > attempt_cap) {
      throw NumericError(
          "could not place " + std::to_string(n) +
          " points with pairwise separation " + std::to_string(min_distance));
    }
    for (Eigen::Index j = 0; j < dim; ++j) {
      candidate[j] = rng.next_uniform();
    }
    bool ok = true;
    for (Eigen::Index i = 0; i < filled; ++i) {
      if ((pts.row(i) - candidate).squaredNorm() < min_sq) {
        ok = false;
        break;
      }
    }
    if (ok) {
      pts.row(filled++) = candidate;
    }
  }
  return PointSet(std::move(pts));
}

RandomInstance make_random_instance(std::uint64_t seed, Eigen::Index max_n,
                                    Eigen::Index max_rank) {
  SplitMix64 rng(seed);
  const Eigen::Index n =
      2 + static_cast<Eigen::Index>(rng.next() %
                                    static_cast<std::uint64_t>(max_n - 1));
  const Eigen::Index dim = 2 + static_cast<Eigen::Index>(rng.next() % 3);

  KernelSpec spec;
  switch (rng.next() % 5) {
    case 0:
      spec = KernelSpec::rbf(0.2 + 0.7 * rng.next_uniform(),
                             0.5 + 1.5 * rng.next_uniform());
      break;
    case 1:
      spec = KernelSpec::matern12(0.2 + 0.7 * rng.next_uniform(),
                                  0.5 + 1.5 * rng.next_uniform());
      break;
    case 2:
      spec = KernelSpec::matern32(0.2 + 0.7 * rng.next_uniform(),
                                  0.5 + 1.5 * rng.next_uniform());
      break;
    case 3:
      spec = KernelSpec::matern52(0.2 + 0.7 * rng.next_uniform(),
                                  0.5 + 1.5 * rng.next_uniform());
      break;
    default:
      spec = KernelSpec::linear(0.5 + 1.5 * rng.next_uniform());
      break;
  }

  Eigen::Index hi = std::min(max_rank, n - 1);
  if (spec.family == KernelFamily::Linear) {
    // The Gram matrix has rank <= dim; past it the residual is rounding
    // noise and greedy selection over noise is not a meaningful comparison.
    hi = std::min(hi, dim);
  }
  hi = std::max<Eigen::Index>(1, hi);
  const Eigen::Index rank =
      1 + static_cast<Eigen::Index>(rng.next() %
                                    static_cast<std::uint64_t>(hi));

  RandomInstance inst{random_separated_points(rng, n, dim, 1e-3), spec, rank,
                      seed};
  return inst;
}

RandomInstance make_feature_instance(std::uint64_t seed, Eigen::Index max_n,
                                     Eigen::Index max_rank) {
  SplitMix64 rng(seed);
  const bool linear = (rng.next() % 2) == 0;
  KernelSpec spec;
  Eigen::Index dim = 2;
  Eigen::Index n = 0;
  Eigen::Index feature_cap = 0;
  if (linear) {
    const Eigen::Index dim_hi = std::min<Eigen::Index>(5, max_n - 2);
    dim = 2 + static_cast<Eigen::Index>(
                  rng.next() % static_cast<std::uint64_t>(dim_hi - 1));
    const Eigen::Index n_lo = dim + 2;
    n = n_lo + static_cast<Eigen::Index>(
                   rng.next() % static_cast<std::uint64_t>(max_n - n_lo + 1));
    spec = KernelSpec::linear(0.5 + 1.5 * rng.next_uniform());
    feature_cap = dim;
  } else {
    dim = 2;
    const int degree = 2 + static_cast<int>(rng.next() % 2);
    spec = KernelSpec::polynomial(degree, 0.5 + rng.next_uniform(),
                                  0.5 + 1.5 * rng.next_uniform());
    feature_cap = degree == 2 ? 6 : 10;  // monomials up to the degree in 2-D
    const Eigen::Index n_lo = std::min<Eigen::Index>(8, max_n);
    n = n_lo + static_cast<Eigen::Index>(
                   rng.next() % static_cast<std::uint64_t>(max_n - n_lo + 1));
  }
  Eigen::Index rank =
      1 + static_cast<Eigen::Index>(rng.next() %
                                    static_cast<std::uint64_t>(max_rank));
  rank = std::min({rank, feature_cap, n - 1});

  RandomInstance inst{random_separated_points(rng, n, dim, 1e-3), spec, rank,
                      seed};
  return inst;
}

PointSet linear_dependence_fixture() {
  RowMatrixXd pts(3, 2);
  pts << 2, 0, 0, 2, 1, 1;
  return PointSet(std::move(pts));
}

VerificationReport run_verification(const VerificationConfig& config) {
  config.validate();
  VerificationReport report;
  report.config = config;

  Battery b;
  for (int i = 0; i < config.instances; ++i) {
    const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(i);
    const RandomInstance inst =
        make_random_instance(seed, config.max_n, config.max_rank);
    run_core_instance(b, inst, i % 10 == 0);
  }
  for (int i = 0; i < config.feature_instances; ++i) {
    const std::uint64_t seed =
        config.seed + 5000000 + static_cast<std::uint64_t>(i);
    const RandomInstance inst =
        make_feature_instance(seed, config.max_n, config.max_rank);
    run_feature_instance(b, inst);
  }
  if (config.include_fixtures) {
    run_fixtures(b);
  }

  report.checks = {
      b.pivot_match.result(),   b.pivot_values.result(),
      b.residual_match.result(), b.trace_match.result(),
      b.dense_factor.result(),  b.psd.result(),
      b.monotone.result(),      b.evals.result(),
      b.detvol.result(),        b.rowsq.result(),
      b.unperm.result(),        b.trunc.result(),
      b.qr.result(),            b.proj.result(),
      b.recovery_rank.result(), b.recovery_trace.result(),
      b.fix_identical.result(), b.fix_tie.result(),
      b.fix_dependent.result(), b.fix_duplicate.result(),
  };
  // Checks that never ran (suite disabled) drop out rather than reporting
  // a vacuous pass.
  std::erase_if(report.checks,
                [](const CheckResult& c) { return c.instances == 0; });
  return report;
}

}  // namespace lazychol
