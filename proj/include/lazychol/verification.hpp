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
#include <string>
#include <vector>

#include "lazychol/data.hpp"
#include "lazychol/decomposition.hpp"
#include "lazychol/kernels.hpp"
#include "lazychol/types.hpp"

namespace lazychol {

// One named property, aggregated over every instance it ran on. A check
// compares the lazy decomposition against dense brute-force recomputation;
// worst_observed is the largest deviation seen and must stay under bound.
// Exact checks (integer sequences, bitwise equality) use bound 0 and count
// mismatches in worst_observed.
struct CheckResult {
  std::string name;
  bool passed = true;
  int instances = 0;
  double worst_observed = 0.0;
  double bound = 0.0;
  std::string detail;  // first failure: instance seed and specifics
};

struct VerificationConfig {
  int instances = 200;          // randomized cross-check instances
  int feature_instances = 50;   // explicit-feature (linear/polynomial) suite
  Eigen::Index max_n = 50;
  Eigen::Index max_rank = 15;
  std::uint64_t seed = 20260822;
  bool include_fixtures = true;  // hand-built degenerate/tie fixtures

  void validate() const;
};

struct VerificationReport {
  VerificationConfig config;
  std::vector<CheckResult> checks;

  bool all_passed() const;
  const CheckResult* first_failure() const;  // nullptr when clean
};

VerificationReport run_verification(const VerificationConfig& config);

// A randomized desk-scale instance: separated points plus a kernel drawn
// from the stationary families and Linear, and a target rank < N.
struct RandomInstance {
  PointSet points;
  KernelSpec kernel;
  Eigen::Index rank = 0;
  std::uint64_t seed = 0;
};

// Uniform points in the unit cube with all pairwise distances >= the given
// floor, so randomized pivot comparisons never hinge on numerically tied
// candidates.
PointSet random_separated_points(SplitMix64& rng, Eigen::Index n,
                                 Eigen::Index dim, double min_distance);

RandomInstance make_random_instance(std::uint64_t seed, Eigen::Index max_n,
                                    Eigen::Index max_rank);

// Instance restricted to kernels with explicit finite feature maps, for the
// Gram-Schmidt/QR identities.
RandomInstance make_feature_instance(std::uint64_t seed, Eigen::Index max_n,
                                     Eigen::Index max_rank);

// Three points whose middle point is a linear combination of the other two:
// subspace selection exhausts it (residual exactly zero) while pointwise
// farthest-point sampling still picks it at a positive distance.
PointSet linear_dependence_fixture();

}  // namespace lazychol
