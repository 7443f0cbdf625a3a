/*
 * This file is part of lazychol, a toolkit for lazy pivoted Cholesky
 * decomposition of kernel matrices.
 *
 * Copyright (c) 2026 lazychol contributors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */
#include "lazychol/data.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace lazychol {

std::uint64_t SplitMix64::next() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double SplitMix64::next_uniform() {
  return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double SplitMix64::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] keeps the logarithm finite.
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  const double u1 = 1.0 - next_uniform();
  const double u2 = next_uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = kTwoPi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::string to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::UniformCube:
      return "uniform";
    case SyntheticKind::GaussianClusters:
      return "clusters";
    case SyntheticKind::Grid:
      return "grid";
  }
  throw ArgumentError("unknown synthetic kind");
}

void SyntheticRecipe::validate() const {
  if (n < 1) {
    throw ArgumentError("synthetic recipe needs n >= 1, got " +
                        std::to_string(n));
  }
  if (dim < 1) {
    throw ArgumentError("synthetic recipe needs dim >= 1, got " +
                        std::to_string(dim));
  }
  if (kind == SyntheticKind::GaussianClusters) {
    if (clusters < 1) {
      throw ArgumentError("cluster recipe needs clusters >= 1, got " +
                          std::to_string(clusters));
    }
    if (!(spread >= 0.0) || !std::isfinite(spread)) {
      throw ArgumentError("cluster spread must be finite and non-negative");
    }
  }
  if (kind == SyntheticKind::Grid) {
    if (!(extent > 0.0) || !std::isfinite(extent)) {
      throw ArgumentError("grid extent must be finite and positive");
    }
  }
}

DatasetSource DatasetSource::from_path(std::string p) {
  DatasetSource src;
  src.path = std::move(p);
  return src;
}

DatasetSource DatasetSource::from_recipe(SyntheticRecipe r) {
  DatasetSource src;
  src.recipe = std::move(r);
  return src;
}

namespace {

RowMatrixXd generate_uniform_cube(const SyntheticRecipe& recipe) {
  SplitMix64 rng(recipe.seed);
  RowMatrixXd points(recipe.n, recipe.dim);
  for (Eigen::Index i = 0; i < recipe.n; ++i) {
    for (Eigen::Index j = 0; j < recipe.dim; ++j) {
      points(i, j) = rng.next_uniform();
    }
  }
  return points;
}

RowMatrixXd generate_gaussian_clusters(const SyntheticRecipe& recipe) {
  SplitMix64 rng(recipe.seed);
  RowMatrixXd centers(recipe.clusters, recipe.dim);
  for (Eigen::Index c = 0; c < recipe.clusters; ++c) {
    for (Eigen::Index j = 0; j < recipe.dim; ++j) {
      centers(c, j) = rng.next_uniform();
    }
  }
  RowMatrixXd points(recipe.n, recipe.dim);
  for (Eigen::Index i = 0; i < recipe.n; ++i) {
    const auto c = static_cast<Eigen::Index>(
        rng.next() % static_cast<std::uint64_t>(recipe.clusters));
    for (Eigen::Index j = 0; j < recipe.dim; ++j) {
      points(i, j) = centers(c, j) + recipe.spread * rng.next_gaussian();
    }
  }
  return points;
}

RowMatrixXd generate_grid(const SyntheticRecipe& recipe) {
  // Smallest per-axis count whose lattice covers n points; the first n
  // lattice sites in row-major order (last axis fastest) are kept.
  Eigen::Index per_axis = 1;
  auto covers = [&](Eigen::Index k) {
    double total = 1.0;
    for (Eigen::Index j = 0; j < recipe.dim; ++j) {
      total *= static_cast<double>(k);
      if (total >= static_cast<double>(recipe.n)) {
        return true;
      }
    }
    return total >= static_cast<double>(recipe.n);
  };
  while (!covers(per_axis)) {
    ++per_axis;
  }
  RowMatrixXd points(recipe.n, recipe.dim);
  std::vector<Eigen::Index> index(recipe.dim, 0);
  for (Eigen::Index i = 0; i < recipe.n; ++i) {
    for (Eigen::Index j = 0; j < recipe.dim; ++j) {
      points(i, j) =
          per_axis == 1
              ? 0.0
              : recipe.extent * static_cast<double>(index[j]) /
                    static_cast<double>(per_axis - 1);
    }
    for (Eigen::Index j = recipe.dim - 1; j >= 0; --j) {
      if (++index[j] < per_axis) {
        break;
      }
      index[j] = 0;
    }
  }
  return points;
}

}  // namespace

PointSet generate_points(const SyntheticRecipe& recipe) {
  recipe.validate();
  switch (recipe.kind) {
    case SyntheticKind::UniformCube:
      return PointSet(generate_uniform_cube(recipe));
    case SyntheticKind::GaussianClusters:
      return PointSet(generate_gaussian_clusters(recipe));
    case SyntheticKind::Grid:
      return PointSet(generate_grid(recipe));
  }
  throw ArgumentError("unknown synthetic kind");
}

namespace {

bool parse_cell(const std::string& cell, double& out) {
  const char* begin = cell.data();
  const char* end = begin + cell.size();
  while (begin < end && (*begin == ' ' || *begin == '\t')) {
    ++begin;
  }
  while (end > begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) {
    --end;
  }
  if (begin == end) {
    return false;
  }
  auto [ptr, ec] = std::from_chars(begin, end, out);
  return ec == std::errc() && ptr == end && std::isfinite(out);
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string current;
  for (char ch : line) {
    if (ch == ',') {
      cells.push_back(current);
      current.clear();
    } else if (ch != '\r') {
      current.push_back(ch);
    }
  }
  cells.push_back(current);
  return cells;
}

}  // namespace

PointSet load_points_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ArgumentError("cannot open points file: " + path);
  }
  std::vector<std::vector<double>> rows;
  Eigen::Index cols = -1;
  std::string line;
  long line_number = 0;
  bool first_content_row = true;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty() || line == "\r") {
      continue;
    }
    const std::vector<std::string> cells = split_row(line);
    std::vector<double> values(cells.size());
    bool all_numeric = true;
    long bad_column = -1;
    for (std::size_t j = 0; j < cells.size(); ++j) {
      if (!parse_cell(cells[j], values[j])) {
        all_numeric = false;
        bad_column = static_cast<long>(j) + 1;
        break;
      }
    }
    if (!all_numeric) {
      if (first_content_row) {
        // Header row: remember the expected width, consume nothing.
        cols = static_cast<Eigen::Index>(cells.size());
        first_content_row = false;
        continue;
      }
      throw ParseError("non-numeric cell in points file " + path, line_number,
                       bad_column);
    }
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(cells.size());
    } else if (static_cast<Eigen::Index>(cells.size()) != cols) {
      throw ParseError("ragged row in points file " + path + ": expected " +
                           std::to_string(cols) + " columns, got " +
                           std::to_string(cells.size()),
                       line_number, static_cast<long>(cells.size()));
    }
    first_content_row = false;
    rows.push_back(std::move(values));
  }
  if (rows.empty()) {
    throw ParseError("points file " + path + " contains no data rows", 0, -1);
  }
  RowMatrixXd matrix(static_cast<Eigen::Index>(rows.size()), cols);
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      matrix(i, j) = rows[static_cast<std::size_t>(i)][
          static_cast<std::size_t>(j)];
    }
  }
  return PointSet(std::move(matrix));
}

PointSet load_points(const DatasetSource& source) {
  if (source.recipe) {
    return generate_points(*source.recipe);
  }
  if (source.path.empty()) {
    throw ArgumentError("dataset source has neither a path nor a recipe");
  }
  return load_points_csv(source.path);
}

std::string format_full(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

void write_points_csv(const std::string& path, const PointSet& points) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) {
    throw ArgumentError("cannot write points file: " + path);
  }
  for (Eigen::Index i = 0; i < points.size(); ++i) {
    for (Eigen::Index j = 0; j < points.dim(); ++j) {
      if (j > 0) {
        out << ',';
      }
      out << format_full(points.matrix()(i, j));
    }
    out << '\n';
  }
  if (!out) {
    throw ArgumentError("failed while writing points file: " + path);
  }
}

Eigen::VectorXd generate_rhs(Eigen::Index n, std::uint64_t seed) {
  if (n < 1) {
    throw ArgumentError("right-hand side length must be >= 1, got " +
                        std::to_string(n));
  }
  SplitMix64 rng(seed);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    rhs[i] = rng.next_gaussian();
  }
  return rhs;
}

namespace {

std::uint64_t parse_uint64_field(const std::string& text,
                                 const std::string& field) {
  std::uint64_t value = 0;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ArgumentError("recipe field '" + field +
                        "' expects an unsigned integer, got '" + text + "'");
  }
  return value;
}

double parse_double_field(const std::string& text, const std::string& field) {
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ArgumentError("recipe field '" + field +
                        "' expects a number, got '" + text + "'");
  }
  return value;
}

}  // namespace

SyntheticRecipe parse_recipe(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw ArgumentError(
        "recipe must look like kind:n=...,dim=...,seed=..., got '" + text +
        "'");
  }
  SyntheticRecipe recipe;
  const std::string kind = text.substr(0, colon);
  if (kind == "uniform") {
    recipe.kind = SyntheticKind::UniformCube;
  } else if (kind == "clusters") {
    recipe.kind = SyntheticKind::GaussianClusters;
  } else if (kind == "grid") {
    recipe.kind = SyntheticKind::Grid;
  } else {
    throw ArgumentError("unknown recipe kind '" + kind +
                        "' (expected uniform, clusters, or grid)");
  }
  std::stringstream fields(text.substr(colon + 1));
  std::string item;
  while (std::getline(fields, item, ',')) {
    if (item.empty()) {
      continue;
    }
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw ArgumentError("recipe field '" + item + "' is missing '='");
    }
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "n") {
      recipe.n = static_cast<Eigen::Index>(parse_uint64_field(value, key));
    } else if (key == "dim" || key == "d") {
      recipe.dim = static_cast<Eigen::Index>(parse_uint64_field(value, key));
    } else if (key == "seed") {
      recipe.seed = parse_uint64_field(value, key);
    } else if (key == "clusters") {
      recipe.clusters =
          static_cast<Eigen::Index>(parse_uint64_field(value, key));
    } else if (key == "spread") {
      recipe.spread = parse_double_field(value, key);
    } else if (key == "extent") {
      recipe.extent = parse_double_field(value, key);
    } else {
      throw ArgumentError("unknown recipe field '" + key + "'");
    }
  }
  recipe.validate();
  return recipe;
}

std::string recipe_to_string(const SyntheticRecipe& recipe) {
  std::string out = to_string(recipe.kind) + ":n=" + std::to_string(recipe.n) +
                    ",dim=" + std::to_string(recipe.dim) +
                    ",seed=" + std::to_string(recipe.seed);
  if (recipe.kind == SyntheticKind::GaussianClusters) {
    out += ",clusters=" + std::to_string(recipe.clusters) +
           ",spread=" + format_full(recipe.spread);
  }
  if (recipe.kind == SyntheticKind::Grid) {
    out += ",extent=" + format_full(recipe.extent);
  }
  return out;
}

}  // namespace lazychol
