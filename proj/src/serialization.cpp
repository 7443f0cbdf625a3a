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

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "lazychol/data.hpp"

namespace lazychol {

namespace fs = std::filesystem;

void atomic_write_text(const std::string& path, const std::string& content) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc | std::ios::binary);
    if (!out) {
      throw ArgumentError("cannot open " + tmp.string() + " for writing");
    }
    out << content;
    out.flush();
    if (!out) {
      throw ArgumentError("failed while writing " + tmp.string());
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw ArgumentError("cannot move " + tmp.string() + " into place: " +
                        ec.message());
  }
}

OrderedJson kernel_spec_to_json(const KernelSpec& spec) {
  OrderedJson j;
  j["family"] = to_string(spec.family);
  j["lengthscale"] = spec.lengthscale;
  j["variance"] = spec.variance;
  j["degree"] = spec.degree;
  j["offset"] = spec.offset;
  return j;
}

KernelSpec kernel_spec_from_json(const OrderedJson& j) {
  KernelSpec spec;
  try {
    spec.family = kernel_family_from_string(j.at("family").get<std::string>());
    spec.lengthscale = j.at("lengthscale").get<double>();
    spec.variance = j.at("variance").get<double>();
    spec.degree = j.at("degree").get<int>();
    spec.offset = j.at("offset").get<double>();
  } catch (const OrderedJson::exception& e) {
    throw ParseError(std::string("malformed kernel specification: ") +
                     e.what());
  }
  spec.validate();
  return spec;
}

std::string factor_matrix_path(const std::string& header_path) {
  fs::path p(header_path);
  p.replace_extension(".csv");
  if (p == fs::path(header_path)) {
    p += ".matrix.csv";
  }
  return p.string();
}

void write_factor(const std::string& header_path, const CholeskyFactor& factor,
                  const KernelSpec& kernel, double tolerance) {
  const std::string matrix_path = factor_matrix_path(header_path);

  OrderedJson header;
  header["format"] = "lazychol-factor-v1";
  header["n"] = factor.n();
  header["rank"] = factor.rank();
  std::vector<long long> pivots;
  for (Eigen::Index p : factor.pivots()) {
    pivots.push_back(static_cast<long long>(p));
  }
  header["pivots"] = pivots;
  header["stop_reason"] = to_string(factor.stop_reason);
  header["tolerance"] = tolerance;
  header["kernel"] = kernel_spec_to_json(kernel);
  header["matrix_file"] = fs::path(matrix_path).filename().string();

  std::string matrix;
  matrix.reserve(static_cast<std::size_t>(factor.n()) *
                 (static_cast<std::size_t>(factor.rank()) + 1) * 24);
  for (Eigen::Index i = 0; i < factor.n(); ++i) {
    for (Eigen::Index j = 0; j < factor.rank(); ++j) {
      if (j > 0) {
        matrix += ',';
      }
      matrix += format_full(factor.L(i, j));
    }
    matrix += '\n';
  }

  atomic_write_text(matrix_path, matrix);
  atomic_write_text(header_path, header.dump(2) + "\n");
}

namespace {

double parse_matrix_cell(const std::string& cell, const std::string& path,
                         long row, long column) {
  double value = 0.0;
  auto [ptr, ec] =
      std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (ec != std::errc() || ptr != cell.data() + cell.size() ||
      !std::isfinite(value)) {
    throw ParseError("bad matrix entry in " + path, row, column);
  }
  return value;
}

}  // namespace

LoadedFactor load_factor(const std::string& header_path) {
  std::ifstream in(header_path);
  if (!in) {
    throw ArgumentError("cannot open factor header: " + header_path);
  }
  OrderedJson header;
  try {
    in >> header;
  } catch (const OrderedJson::exception& e) {
    throw ParseError("malformed factor header " + header_path + ": " +
                     e.what());
  }

  LoadedFactor loaded;
  Eigen::Index n = 0;
  Eigen::Index rank = 0;
  std::string matrix_file;
  try {
    if (header.at("format").get<std::string>() != "lazychol-factor-v1") {
      throw ParseError("unrecognized factor format in " + header_path);
    }
    n = header.at("n").get<Eigen::Index>();
    rank = header.at("rank").get<Eigen::Index>();
    loaded.factor.stop_reason =
        stop_reason_from_string(header.at("stop_reason").get<std::string>());
    loaded.tolerance = header.at("tolerance").get<double>();
    loaded.kernel = kernel_spec_from_json(header.at("kernel"));
    matrix_file = header.at("matrix_file").get<std::string>();
    IndexVector pivots;
    for (const auto& p : header.at("pivots")) {
      pivots.push_back(p.get<Eigen::Index>());
    }
    if (static_cast<Eigen::Index>(pivots.size()) != rank) {
      throw ParseError("factor header " + header_path + " lists " +
                       std::to_string(pivots.size()) + " pivots for rank " +
                       std::to_string(rank));
    }
    loaded.factor.permutation = permutation_from_pivots(n, pivots);
  } catch (const OrderedJson::exception& e) {
    throw ParseError("malformed factor header " + header_path + ": " +
                     e.what());
  }
  if (n < 1 || rank < 0 || rank > n) {
    throw ParseError("factor header " + header_path +
                     " has inconsistent n/rank");
  }

  const fs::path matrix_path =
      fs::path(header_path).parent_path() / matrix_file;
  std::ifstream min(matrix_path);
  if (!min) {
    throw ArgumentError("cannot open factor matrix: " + matrix_path.string());
  }
  loaded.factor.L.resize(n, rank);
  std::string line;
  Eigen::Index row = 0;
  while (std::getline(min, line)) {
    if (line.empty() || line == "\r") {
      continue;
    }
    if (row >= n) {
      throw ParseError("factor matrix " + matrix_path.string() +
                           " has more rows than header n=" + std::to_string(n),
                       static_cast<long>(row) + 1, -1);
    }
    std::stringstream cells(line);
    std::string cell;
    Eigen::Index col = 0;
    while (std::getline(cells, cell, ',')) {
      if (!cell.empty() && cell.back() == '\r') {
        cell.pop_back();
      }
      if (col >= rank) {
        break;
      }
      loaded.factor.L(row, col) =
          parse_matrix_cell(cell, matrix_path.string(),
                            static_cast<long>(row) + 1,
                            static_cast<long>(col) + 1);
      ++col;
    }
    if (col != rank) {
      throw ParseError("factor matrix " + matrix_path.string() +
                           " row has wrong width: expected " +
                           std::to_string(rank) + ", got " +
                           std::to_string(col),
                       static_cast<long>(row) + 1, col + 1);
    }
    ++row;
  }
  if (rank > 0 && row != n) {
    throw ParseError("factor matrix " + matrix_path.string() + " has " +
                         std::to_string(row) + " rows, header says " +
                         std::to_string(n),
                     static_cast<long>(row), -1);
  }
  if (rank == 0) {
    loaded.factor.L.resize(n, 0);
  }
  loaded.factor.residual_diag.resize(0);
  return loaded;
}

void write_trace_csv(const std::string& path,
                     const DecompositionTrace& trace) {
  std::string out = "step,pivot_index,pivot_value,residual_trace,kernel_evals\n";
  if (trace.steps.empty()) {
    out += "0,-1,0," + format_full(trace.initial_trace) + ",0\n";
  } else {
    for (const TraceStep& step : trace.steps) {
      out += std::to_string(step.step) + ',' +
             std::to_string(step.pivot_index) + ',' +
             format_full(step.pivot_value) + ',' +
             format_full(step.residual_trace) + ',' +
             std::to_string(step.pair_evals) + '\n';
    }
  }
  atomic_write_text(path, out);
}

}  // namespace lazychol
