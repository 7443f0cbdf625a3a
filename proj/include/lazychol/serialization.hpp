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

#include <string>

#include <json.hpp>

#include "lazychol/decomposition.hpp"
#include "lazychol/kernels.hpp"

namespace lazychol {

using OrderedJson = nlohmann::ordered_json;

// Writes content to path atomically (temporary file in the same directory,
// then rename), so readers never observe a partial file.
void atomic_write_text(const std::string& path, const std::string& content);

OrderedJson kernel_spec_to_json(const KernelSpec& spec);
KernelSpec kernel_spec_from_json(const OrderedJson& j);

// A factor on disk is a JSON header next to a CSV matrix:
//   header: {format, n, rank, pivots, stop_reason, tolerance, kernel,
//            matrix_file}
//   matrix: N rows by rank columns, rows in permuted order, 17 significant
//           digits per entry.
// The matrix file sits in the header's directory under the name recorded in
// matrix_file (the header path with a .csv extension by default).
struct LoadedFactor {
  CholeskyFactor factor;  // residual_diag is not serialized; empty on load
  KernelSpec kernel;
  double tolerance = 0.0;
};

void write_factor(const std::string& header_path, const CholeskyFactor& factor,
                  const KernelSpec& kernel, double tolerance);
LoadedFactor load_factor(const std::string& header_path);

// Path of the matrix CSV belonging to a factor header path.
std::string factor_matrix_path(const std::string& header_path);

// Trace curve CSV with columns step,pivot_index,pivot_value,residual_trace,
// kernel_evals. A rank-0 run has no steps; it is recorded as the single row
// "0,-1,0,<initial trace>,0" so the initial energy is still observable.
void write_trace_csv(const std::string& path, const DecompositionTrace& trace);

}  // namespace lazychol
