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
#include <optional>
#include <string>

#include "lazychol/types.hpp"

namespace lazychol {

// Counter-based 64-bit generator (SplitMix64). Chosen so synthetic fixtures
// are reproducible from a seed alone, independent of platform and standard
// library: the update is
//
//   z = (state += 0x9E3779B97F4A7C15)
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// Uniform doubles take the top 53 bits; Gaussians come from the Box-Muller
// transform on consecutive uniforms (with the second variate cached).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();
  double next_uniform();   // [0, 1)
  double next_gaussian();  // standard normal

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

enum class SyntheticKind { UniformCube, GaussianClusters, Grid };

std::string to_string(SyntheticKind kind);

struct SyntheticRecipe {
  SyntheticKind kind = SyntheticKind::UniformCube;
  Eigen::Index n = 0;
  Eigen::Index dim = 0;
  std::uint64_t seed = 0;
  // GaussianClusters
  Eigen::Index clusters = 4;
  double spread = 0.05;
  // Grid
  double extent = 1.0;

  void validate() const;
};

struct DatasetSource {
  std::string path;  // empty when synthetic
  std::optional<SyntheticRecipe> recipe;

  static DatasetSource from_path(std::string p);
  static DatasetSource from_recipe(SyntheticRecipe r);
};

PointSet generate_points(const SyntheticRecipe& recipe);

// CSV loader: rectangular numeric table, optional single header row
// (detected when any first-row cell fails to parse as a number). Throws
// ParseError carrying 1-based row/column on ragged rows, bad cells, or an
// empty file.
PointSet load_points_csv(const std::string& path);
PointSet load_points(const DatasetSource& source);

void write_points_csv(const std::string& path, const PointSet& points);

Eigen::VectorXd generate_rhs(Eigen::Index n, std::uint64_t seed);

// Recipe strings used on the command line and echoed in manifests:
//   uniform:n=100,dim=3,seed=7
//   clusters:n=200,dim=2,seed=1,clusters=4,spread=0.05
//   grid:n=64,dim=2,extent=1
SyntheticRecipe parse_recipe(const std::string& text);
std::string recipe_to_string(const SyntheticRecipe& recipe);

// 17-significant-digit decimal form; round-trips any finite double exactly.
std::string format_full(double value);

}  // namespace lazychol
