/*
 * This file is part of lazychol, a toolkit for lazy pivoted Cholesky
 * decomposition of kernel matrices.
 *
 * Copyright (c) 2026 lazychol contributors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */
#include "lazychol/serialization.hpp"

#include <doctest.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "lazychol/decomposition.hpp"
#include "lazychol/kernels.hpp"
#include "test_support.hpp"

using namespace lazychol;
using testing::random_points;

namespace {

// Scratch directory shared by the cases in this file, removed at exit.
class TempDir {
 public:
  TempDir() {
    dir_ = std::filesystem::temp_directory_path() /
           ("lazychol_serialization_test_" +
            std::to_string(
                std::chrono::steady_clock::now().time_since_epoch().count()));
    std::filesystem::create_directories(dir_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(dir_, ec);
  }
  std::string path(const std::string& name) const {
    return (dir_ / name).string();
  }
  const std::filesystem::path& root() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("atomic text writes leave no temporaries behind") {
  TempDir dir;
  const std::string target = dir.path("note.txt");
  atomic_write_text(target, "first\n");
  CHECK(slurp(target) == "first\n");
  atomic_write_text(target, "second\n");
  CHECK(slurp(target) == "second\n");
  std::size_t entries = 0;
  for (const auto& entry : std::filesystem::directory_iterator(dir.root())) {
    (void)entry;
    ++entries;
  }
  CHECK(entries == 1);
}

TEST_CASE("kernel specifications round-trip through json") {
  const KernelSpec poly = KernelSpec::polynomial(3, 0.25, 1.5);
  const KernelSpec back = kernel_spec_from_json(kernel_spec_to_json(poly));
  CHECK(back.family == KernelFamily::Polynomial);
  CHECK(back.degree == 3);
  CHECK(back.offset == 0.25);
  CHECK(back.variance == 1.5);

  const KernelSpec rbf = KernelSpec::rbf(0.37, 2.25);
  const KernelSpec rbf_back = kernel_spec_from_json(kernel_spec_to_json(rbf));
  CHECK(rbf_back.family == KernelFamily::RBF);
  CHECK(rbf_back.lengthscale == 0.37);
  CHECK(rbf_back.variance == 2.25);

  // Unknown family names and missing fields are both rejected.
  CHECK_THROWS_AS(kernel_spec_from_json(OrderedJson{{"family", "cubic"}}),
                  ArgumentError);
  CHECK_THROWS_AS(kernel_spec_from_json(OrderedJson{{"family", "rbf"}}),
                  ParseError);
}

TEST_CASE("factor files round-trip bitwise") {
  TempDir dir;
  const PointSet X = random_points(501, 20, 3);
  const KernelSpec spec = KernelSpec::matern32(0.45, 1.2);
  const DecompositionResult run =
      pivoted_cholesky(spec, X, DecompositionConfig{6, 1e-9});

  const std::string header = dir.path("factor.json");
  write_factor(header, run.factor, spec, 1e-9);
  CHECK(std::filesystem::exists(factor_matrix_path(header)));

  const LoadedFactor loaded = load_factor(header);
  CHECK(loaded.factor.n() == 20);
  CHECK(loaded.factor.rank() == run.factor.rank());
  CHECK(loaded.factor.L == run.factor.L);
  CHECK(loaded.factor.permutation == run.factor.permutation);
  CHECK(loaded.factor.pivots() == run.factor.pivots());
  CHECK(loaded.factor.stop_reason == run.factor.stop_reason);
  CHECK(loaded.tolerance == 1e-9);
  CHECK(loaded.kernel.family == KernelFamily::Matern32);
  CHECK(loaded.kernel.lengthscale == 0.45);
  CHECK(loaded.kernel.variance == 1.2);
  // The residual diagonal is not serialized.
  CHECK(loaded.factor.residual_diag.size() == 0);
}

TEST_CASE("rank-zero factors serialize") {
  TempDir dir;
  const PointSet X = random_points(503, 5, 2);
  const KernelSpec spec = KernelSpec::rbf(0.6);
  const DecompositionResult run =
      pivoted_cholesky(spec, X, DecompositionConfig{0, 0.0});
  const std::string header = dir.path("empty.json");
  write_factor(header, run.factor, spec, 0.0);
  const LoadedFactor loaded = load_factor(header);
  CHECK(loaded.factor.rank() == 0);
  CHECK(loaded.factor.n() == 5);
  CHECK(loaded.factor.permutation == run.factor.permutation);
}

TEST_CASE("matrix path derivation avoids clobbering the header") {
  CHECK(factor_matrix_path("runs/factor.json") == "runs/factor.csv");
  // A header path already ending in .csv gets the suffix appended so the two
  // files never collide.
  CHECK(factor_matrix_path("runs/factor.csv") == "runs/factor.csv.matrix.csv");
}

TEST_CASE("factor loading validates its inputs") {
  TempDir dir;
  CHECK_THROWS_AS(load_factor(dir.path("missing.json")), ArgumentError);

  const std::string bad_json = dir.path("broken.json");
  atomic_write_text(bad_json, "{ not json ");
  CHECK_THROWS_AS(load_factor(bad_json), ParseError);

  // A well-formed header from a different tool is rejected by format tag.
  const std::string foreign = dir.path("foreign.json");
  atomic_write_text(foreign, "{\"format\": \"other-factor-v9\"}");
  CHECK_THROWS_AS(load_factor(foreign), ParseError);

  // Prepare a real factor pair, then corrupt the matrix shape.
  const PointSet X = random_points(509, 8, 2);
  const KernelSpec spec = KernelSpec::rbf(0.5);
  const DecompositionResult run =
      pivoted_cholesky(spec, X, DecompositionConfig{3, 0.0});
  const std::string header = dir.path("factor.json");
  write_factor(header, run.factor, spec, 0.0);

  const std::string matrix = factor_matrix_path(header);
  const std::string full = slurp(matrix);
  const std::string truncated = full.substr(0, full.find('\n') + 1);
  atomic_write_text(matrix, truncated);
  CHECK_THROWS_AS(load_factor(header), ParseError);

  atomic_write_text(matrix, "1,2\n3,4\n");
  CHECK_THROWS_AS(load_factor(header), ParseError);
}

TEST_CASE("trace files carry one row per step") {
  TempDir dir;
  const PointSet X = random_points(521, 10, 2);
  const DecompositionResult run = pivoted_cholesky(
      KernelSpec::rbf(0.4), X, DecompositionConfig{4, 0.0});
  const std::string path = dir.path("trace.csv");
  write_trace_csv(path, run.trace);
  const std::string content = slurp(path);

  std::istringstream lines(content);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "step,pivot_index,pivot_value,residual_trace,kernel_evals");
  std::size_t rows = 0;
  while (std::getline(lines, line)) ++rows;
  CHECK(rows == static_cast<std::size_t>(run.factor.rank()));
}

TEST_CASE("rank-zero traces keep the initial residual visible") {
  TempDir dir;
  DecompositionTrace trace;
  trace.initial_trace = 10.0;
  const std::string path = dir.path("empty_trace.csv");
  write_trace_csv(path, trace);
  CHECK(slurp(path) ==
        "step,pivot_index,pivot_value,residual_trace,kernel_evals\n"
        "0,-1,0,10,0\n");
}
