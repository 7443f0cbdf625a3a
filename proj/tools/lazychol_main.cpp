/*
 * This file is part of lazychol, a toolkit for lazy pivoted Cholesky
 * decomposition of kernel matrices.
 *
 * Copyright (c) 2026 lazychol contributors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */
#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <iostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lazychol/data.hpp"
#include "lazychol/decomposition.hpp"
#include "lazychol/kernels.hpp"
#include "lazychol/oracles.hpp"
#include "lazychol/preconditioner.hpp"
#include "lazychol/serialization.hpp"
#include "lazychol/types.hpp"
#include "lazychol/verification.hpp"

namespace lz = lazychol;
using lz::OrderedJson;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Wall-clock per phase, kept in one object so every other manifest field is
// byte-comparable between reruns.
class PhaseTimer {
 public:
  void start(const std::string& phase) {
    phase_ = phase;
    begin_ = Clock::now();
  }
  void stop() {
    if (!phase_.empty()) {
      phases_.emplace_back(phase_, seconds_since(begin_));
      phase_.clear();
    }
  }
  OrderedJson json() const {
    OrderedJson j;
    for (const auto& [name, secs] : phases_) {
      j[name + "_seconds"] = secs;
    }
    return j;
  }

 private:
  std::string phase_;
  Clock::time_point begin_;
  std::vector<std::pair<std::string, double>> phases_;
};

struct KernelFlags {
  std::string family = "rbf";
  double lengthscale = 1.0;
  double variance = 1.0;
  int degree = 2;
  double offset = 0.0;
};

void add_kernel_flags(CLI::App* cmd, KernelFlags& kf) {
  cmd->add_option("--kernel", kf.family,
                  "Kernel family: rbf, matern12, matern32, matern52, linear, "
                  "polynomial")
      ->capture_default_str();
  cmd->add_option("--lengthscale", kf.lengthscale,
                  "Lengthscale of the stationary families")
      ->capture_default_str();
  cmd->add_option("--variance", kf.variance, "Kernel variance multiplier")
      ->capture_default_str();
  cmd->add_option("--degree", kf.degree, "Polynomial degree")
      ->capture_default_str();
  cmd->add_option("--offset", kf.offset, "Polynomial offset")
      ->capture_default_str();
}

lz::KernelSpec kernel_from_flags(const KernelFlags& kf) {
  lz::KernelSpec spec;
  spec.family = lz::kernel_family_from_string(kf.family);
  spec.lengthscale = kf.lengthscale;
  spec.variance = kf.variance;
  spec.degree = kf.degree;
  spec.offset = kf.offset;
  spec.validate();
  return spec;
}

struct DatasetFlags {
  std::string points_path;
  std::string synthetic;
};

void add_dataset_flags(CLI::App* cmd, DatasetFlags& df) {
  cmd->add_option("--points", df.points_path, "CSV file of points, one row each");
  cmd->add_option("--synthetic", df.synthetic,
                  "Synthetic recipe, e.g. uniform:n=200,dim=3,seed=7");
}

lz::DatasetSource source_from_flags(const DatasetFlags& df) {
  const bool has_path = !df.points_path.empty();
  const bool has_recipe = !df.synthetic.empty();
  if (has_path == has_recipe) {
    throw lz::ArgumentError(
        "exactly one of --points or --synthetic must be given");
  }
  if (has_path) {
    return lz::DatasetSource::from_path(df.points_path);
  }
  return lz::DatasetSource::from_recipe(lz::parse_recipe(df.synthetic));
}

std::string dataset_echo(const DatasetFlags& df) {
  if (!df.points_path.empty()) {
    return df.points_path;
  }
  // Canonical form so the manifest echo is reproducible.
  return lz::recipe_to_string(lz::parse_recipe(df.synthetic));
}

OrderedJson tool_header(const std::string& command) {
  OrderedJson j;
  j["tool"] = "lazychol";
  j["version"] = LAZYCHOL_VERSION;
  j["command"] = command;
  return j;
}

void write_report(const std::string& path, const OrderedJson& j) {
  lz::atomic_write_text(path, j.dump(2) + "\n");
}

Eigen::VectorXd load_rhs_file(const std::string& path, Eigen::Index n) {
  const lz::PointSet column = lz::load_points_csv(path);
  if (column.dim() != 1) {
    throw lz::ArgumentError("right-hand side file must have one column, " +
                            path + " has " + std::to_string(column.dim()));
  }
  if (column.size() != n) {
    throw lz::ArgumentError("right-hand side has " +
                            std::to_string(column.size()) + " entries, need " +
                            std::to_string(n));
  }
  return column.matrix().col(0);
}

OrderedJson solve_report_json(const lz::SolveReport& report,
                              double rhs_norm) {
  OrderedJson j;
  j["preconditioned"] = report.preconditioned;
  j["converged"] = report.converged;
  j["iterations"] = report.iterations;
  j["final_residual_norm"] = report.residual_norms.back();
  j["final_relative_residual"] =
      rhs_norm > 0.0 ? report.residual_norms.back() / rhs_norm : 0.0;
  j["residual_norms"] = report.residual_norms;
  return j;
}

// ---------------------------------------------------------------- decompose

int cmd_decompose(const DatasetFlags& df, const KernelFlags& kf,
                  Eigen::Index rank, double tol, const std::string& out_factor,
                  const std::string& out_trace,
                  const std::string& out_manifest) {
  PhaseTimer timer;
  const lz::KernelSpec spec = kernel_from_flags(kf);
  const lz::DatasetSource source = source_from_flags(df);

  timer.start("load");
  const lz::PointSet points = lz::load_points(source);
  timer.stop();

  lz::CountingKernel kernel(spec);
  timer.start("decompose");
  const lz::DecompositionResult run = lz::pivoted_cholesky(
      kernel, points, lz::DecompositionConfig{rank, tol});
  timer.stop();

  timer.start("write");
  if (!out_factor.empty()) {
    lz::write_factor(out_factor, run.factor, spec, tol);
  }
  if (!out_trace.empty()) {
    lz::write_trace_csv(out_trace, run.trace);
  }
  timer.stop();

  const double final_trace = run.trace.steps.empty()
                                 ? run.trace.initial_trace
                                 : run.trace.steps.back().residual_trace;
  if (!out_manifest.empty()) {
    OrderedJson manifest = tool_header("decompose");
    OrderedJson inputs;
    inputs["dataset"] = dataset_echo(df);
    inputs["kernel"] = lz::kernel_spec_to_json(spec);
    inputs["max_rank"] = rank;
    inputs["tolerance"] = tol;
    OrderedJson outputs;
    outputs["factor"] = out_factor;
    outputs["trace"] = out_trace;
    inputs["outputs"] = outputs;
    manifest["inputs"] = inputs;
    OrderedJson results;
    results["n"] = points.size();
    results["dim"] = points.dim();
    results["rank"] = run.factor.rank();
    results["stop_reason"] = lz::to_string(run.factor.stop_reason);
    results["initial_trace"] = run.trace.initial_trace;
    results["final_residual_trace"] = final_trace;
    OrderedJson evals;
    evals["diag"] = kernel.diag_evals();
    evals["pair"] = kernel.pair_evals();
    evals["total"] = kernel.diag_evals() + kernel.pair_evals();
    results["kernel_evals"] = evals;
    manifest["results"] = results;
    manifest["timing"] = timer.json();
    write_report(out_manifest, manifest);
  }

  std::cout << "decomposed n=" << points.size() << " rank="
            << run.factor.rank() << " stop="
            << lz::to_string(run.factor.stop_reason)
            << " residual_trace=" << lz::format_full(final_trace) << "\n";
  return 0;
}

// ------------------------------------------------------------------- verify

int check_factor_against_recomputation(const std::string& factor_path,
                                       const DatasetFlags& df,
                                       const std::string& report_path) {
  const lz::LoadedFactor loaded = lz::load_factor(factor_path);
  const lz::PointSet points = lz::load_points(source_from_flags(df));

  std::string mismatch;
  if (points.size() != loaded.factor.n()) {
    mismatch = "dataset has " + std::to_string(points.size()) +
               " points, factor header says " +
               std::to_string(loaded.factor.n());
  } else {
    // Deterministic recomputation must reproduce the file bitwise. A
    // tolerance-stopped factor is rerun with one extra rank of headroom so
    // the rerun stops by tolerance too.
    const Eigen::Index rerun_rank =
        loaded.factor.rank() +
        (loaded.factor.stop_reason == lz::StopReason::ToleranceMet ? 1 : 0);
    const lz::DecompositionResult rerun = lz::pivoted_cholesky(
        loaded.kernel, points,
        lz::DecompositionConfig{rerun_rank, loaded.tolerance});
    if (rerun.factor.rank() != loaded.factor.rank()) {
      mismatch = "recomputed rank " + std::to_string(rerun.factor.rank()) +
                 " != stored rank " + std::to_string(loaded.factor.rank());
    } else if (rerun.factor.stop_reason != loaded.factor.stop_reason) {
      mismatch = "recomputed stop reason differs";
    } else if (rerun.factor.pivots() != loaded.factor.pivots()) {
      mismatch = "recomputed pivot sequence differs";
    } else if (loaded.factor.rank() > 0 &&
               (rerun.factor.L - loaded.factor.L).cwiseAbs().maxCoeff() !=
                   0.0) {
      mismatch = "factor entries differ from recomputation";
    }
  }

  if (!report_path.empty()) {
    OrderedJson j = tool_header("verify");
    j["mode"] = "check_factor";
    j["factor_file"] = factor_path;
    j["dataset"] = dataset_echo(df);
    j["match"] = mismatch.empty();
    j["mismatch"] = mismatch;
    write_report(report_path, j);
  }
  if (!mismatch.empty()) {
    std::cerr << "factor check failed: " << mismatch << "\n";
    return 1;
  }
  std::cout << "factor file matches deterministic recomputation\n";
  return 0;
}

int cmd_verify(int instances, Eigen::Index max_n, Eigen::Index max_rank,
               std::uint64_t seed, const std::string& report_path,
               const std::string& check_factor_path, const DatasetFlags& df) {
  if (!check_factor_path.empty()) {
    return check_factor_against_recomputation(check_factor_path, df,
                                              report_path);
  }

  lz::VerificationConfig config;
  config.instances = instances;
  config.feature_instances = std::min(50, instances);
  config.max_n = max_n;
  config.max_rank = max_rank;
  config.seed = seed;
  config.include_fixtures = true;

  PhaseTimer timer;
  timer.start("verify");
  const lz::VerificationReport report = lz::run_verification(config);
  timer.stop();

  if (!report_path.empty()) {
    OrderedJson j = tool_header("verify");
    OrderedJson cfg;
    cfg["instances"] = config.instances;
    cfg["feature_instances"] = config.feature_instances;
    cfg["max_n"] = config.max_n;
    cfg["max_rank"] = config.max_rank;
    cfg["seed"] = config.seed;
    j["config"] = cfg;
    OrderedJson checks = OrderedJson::array();
    for (const lz::CheckResult& c : report.checks) {
      OrderedJson cj;
      cj["name"] = c.name;
      cj["passed"] = c.passed;
      cj["instances"] = c.instances;
      cj["worst_observed"] = c.worst_observed;
      cj["bound"] = c.bound;
      cj["detail"] = c.detail;
      checks.push_back(cj);
    }
    j["checks"] = checks;
    j["all_passed"] = report.all_passed();
    j["timing"] = timer.json();
    write_report(report_path, j);
  }

  for (const lz::CheckResult& c : report.checks) {
    std::cout << (c.passed ? "pass" : "FAIL") << "  " << c.name << "  ("
              << c.instances << " instances, worst "
              << lz::format_full(c.worst_observed) << ")\n";
  }
  if (const lz::CheckResult* failure = report.first_failure()) {
    std::cerr << "verification failed: " << failure->name << ": "
              << failure->detail << "\n";
    return 1;
  }
  std::cout << "all checks passed\n";
  return 0;
}

// -------------------------------------------------------------------- solve

int cmd_solve(const DatasetFlags& df, const KernelFlags& kf, double noise,
              Eigen::Index precond_rank, double tol, int max_iter,
              std::uint64_t rhs_seed, const std::string& rhs_file,
              bool compare, const std::string& report_path,
              const std::string& solution_path) {
  PhaseTimer timer;
  const lz::KernelSpec spec = kernel_from_flags(kf);
  if (!(noise > 0.0)) {
    throw lz::ArgumentError("--noise must be positive");
  }

  timer.start("load");
  const lz::PointSet points = lz::load_points(source_from_flags(df));
  const Eigen::VectorXd rhs = rhs_file.empty()
                                  ? lz::generate_rhs(points.size(), rhs_seed)
                                  : load_rhs_file(rhs_file, points.size());
  timer.stop();

  const lz::LinearOperator matvec = [&](const Eigen::VectorXd& v) {
    return lz::kernel_matvec(spec, points, noise, v);
  };
  const double rhs_norm = rhs.norm();

  OrderedJson report = tool_header("solve");
  OrderedJson inputs;
  inputs["dataset"] = dataset_echo(df);
  inputs["kernel"] = lz::kernel_spec_to_json(spec);
  inputs["noise"] = noise;
  inputs["precond_rank"] = precond_rank;
  inputs["tol"] = tol;
  inputs["max_iter"] = max_iter;
  inputs["rhs"] = rhs_file.empty()
                      ? OrderedJson{{"seed", rhs_seed}}
                      : OrderedJson{{"file", rhs_file}};
  inputs["compare"] = compare;
  report["inputs"] = inputs;

  auto fail_diverged = [&](const lz::DivergenceError& e,
                           const char* which) -> int {
    report["diverged"] = true;
    report["diverged_solver"] = which;
    report["diverged_at_iteration"] = e.iteration;
    report["timing"] = timer.json();
    std::string trace_path =
        report_path.empty() ? std::string("solve_divergence.json")
                            : report_path;
    write_report(trace_path, report);
    std::cerr << e.what() << "; iteration trace: " << trace_path << "\n";
    return 4;
  };

  Eigen::VectorXd solution;
  if (precond_rank > 0) {
    timer.start("decompose");
    const lz::DecompositionResult run = lz::pivoted_cholesky(
        spec, points, lz::DecompositionConfig{precond_rank, 0.0});
    timer.stop();
    timer.start("build_preconditioner");
    const lz::LowRankPlusDiagonal precond =
        lz::build_preconditioner(run.factor, noise);
    timer.stop();
    OrderedJson pj;
    pj["rank"] = run.factor.rank();
    pj["stop_reason"] = lz::to_string(run.factor.stop_reason);
    report["preconditioner"] = pj;

    timer.start("solve_preconditioned");
    try {
      auto [x, solve_report] =
          lz::cg_solve(matvec, rhs, &precond, tol, max_iter);
      solution = std::move(x);
      report["preconditioned_solve"] = solve_report_json(solve_report,
                                                         rhs_norm);
    } catch (const lz::DivergenceError& e) {
      timer.stop();
      return fail_diverged(e, "preconditioned");
    }
    timer.stop();
  }

  if (precond_rank == 0 || compare) {
    timer.start("solve_unpreconditioned");
    try {
      auto [x, solve_report] =
          lz::cg_solve(matvec, rhs, nullptr, tol, max_iter);
      if (precond_rank == 0) {
        solution = std::move(x);
      }
      report["unpreconditioned_solve"] =
          solve_report_json(solve_report, rhs_norm);
    } catch (const lz::DivergenceError& e) {
      timer.stop();
      return fail_diverged(e, "unpreconditioned");
    }
    timer.stop();
  }

  if (!solution_path.empty()) {
    std::string body;
    for (Eigen::Index i = 0; i < solution.size(); ++i) {
      body += lz::format_full(solution[i]);
      body += '\n';
    }
    lz::atomic_write_text(solution_path, body);
    report["solution_file"] = solution_path;
  }

  report["timing"] = timer.json();
  if (!report_path.empty()) {
    write_report(report_path, report);
  }

  auto print_line = [](const char* label, const OrderedJson& j) {
    std::cout << label << ": iterations=" << j.at("iterations")
              << " converged=" << (j.at("converged").get<bool>() ? "yes" : "no")
              << "\n";
  };
  if (report.contains("preconditioned_solve")) {
    print_line("preconditioned", report["preconditioned_solve"]);
  }
  if (report.contains("unpreconditioned_solve")) {
    print_line("unpreconditioned", report["unpreconditioned_solve"]);
  }
  return 0;
}

// --------------------------------------------------------- compare-sampling

int cmd_compare_sampling(const DatasetFlags& df, const KernelFlags& kf,
                         Eigen::Index rank, Eigen::Index seed_index,
                         const std::string& report_path) {
  PhaseTimer timer;
  const lz::KernelSpec spec = kernel_from_flags(kf);

  timer.start("load");
  const lz::PointSet points = lz::load_points(source_from_flags(df));
  timer.stop();

  // Subspace strategy through the lazy decomposition itself; pointwise
  // strategy on the dense Gram matrix (desk-scale only).
  timer.start("subspace");
  const lz::DecompositionResult run =
      lz::pivoted_cholesky(spec, points, lz::DecompositionConfig{rank, 0.0});
  timer.stop();
  timer.start("pointwise");
  const lz::oracles::GramMatrix gram = lz::oracles::dense_gram(spec, points);
  const lz::oracles::PivotSequence pw =
      lz::oracles::pointwise_fps(gram, rank, seed_index);
  timer.stop();

  const lz::IndexVector sub_indices = run.factor.pivots();
  std::vector<double> sub_distances;
  for (const lz::TraceStep& step : run.trace.steps) {
    sub_distances.push_back(step.pivot_value);
  }

  const std::size_t common =
      std::min(sub_indices.size(), pw.indices.size());
  std::size_t lcp = 0;
  while (lcp < common && sub_indices[lcp] == pw.indices[lcp]) {
    ++lcp;
  }
  const bool identical = lcp == sub_indices.size() &&
                         sub_indices.size() == pw.indices.size();

  std::set<Eigen::Index> sub_set(sub_indices.begin(), sub_indices.end());
  std::size_t shared = 0;
  for (Eigen::Index i : pw.indices) {
    shared += sub_set.count(i);
  }
  const std::size_t larger =
      std::max(sub_indices.size(), pw.indices.size());
  const double overlap =
      larger == 0 ? 1.0
                  : static_cast<double>(shared) / static_cast<double>(larger);

  OrderedJson j = tool_header("compare-sampling");
  OrderedJson inputs;
  inputs["dataset"] = dataset_echo(df);
  inputs["kernel"] = lz::kernel_spec_to_json(spec);
  inputs["rank"] = rank;
  inputs["seed_index"] = seed_index;
  j["inputs"] = inputs;
  OrderedJson sub;
  sub["indices"] = sub_indices;
  sub["sq_distances"] = sub_distances;
  sub["stop_reason"] = lz::to_string(run.factor.stop_reason);
  j["subspace"] = sub;
  OrderedJson pwj;
  pwj["indices"] = pw.indices;
  OrderedJson pw_dists = OrderedJson::array();
  for (double d : pw.sq_distances) {
    // The seed's distance to the empty set is infinite; JSON has no inf.
    if (std::isfinite(d)) {
      pw_dists.push_back(d);
    } else {
      pw_dists.push_back(nullptr);
    }
  }
  pwj["sq_distances"] = pw_dists;
  j["pointwise"] = pwj;
  j["longest_common_prefix"] = lcp;
  j["set_overlap_fraction"] = overlap;
  if (identical) {
    j["divergence_step"] = nullptr;
  } else {
    j["divergence_step"] = lcp + 1;  // 1-based first differing step
  }
  j["timing"] = timer.json();
  if (!report_path.empty()) {
    write_report(report_path, j);
  }

  std::cout << "subspace selected " << sub_indices.size()
            << " pivots, pointwise " << pw.indices.size()
            << "; common prefix " << lcp << ", set overlap "
            << lz::format_full(overlap) << "\n";
  if (!identical) {
    std::cout << "sequences diverge at step " << (lcp + 1) << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lazy pivoted Cholesky decomposition of kernel matrices"};
  app.require_subcommand(1);

  // decompose
  auto* dec = app.add_subcommand(
      "decompose", "Run the decomposition and write factor, trace, manifest");
  DatasetFlags dec_data;
  KernelFlags dec_kernel;
  Eigen::Index dec_rank = 0;
  double dec_tol = 1e-6;
  std::string dec_out_factor, dec_out_trace, dec_out_manifest;
  add_dataset_flags(dec, dec_data);
  add_kernel_flags(dec, dec_kernel);
  dec->add_option("--rank", dec_rank, "Maximum rank (0 allowed)")->required();
  dec->add_option("--tol", dec_tol,
                  "Stop when the largest remaining residual falls below this")
      ->capture_default_str();
  dec->add_option("--out-factor", dec_out_factor,
                  "Factor header path (matrix CSV written alongside)");
  dec->add_option("--out-trace", dec_out_trace, "Trace curve CSV path");
  dec->add_option("--out-manifest", dec_out_manifest, "Run manifest JSON path");

  // verify
  auto* ver = app.add_subcommand(
      "verify", "Cross-check the decomposition against dense oracles");
  int ver_instances = 200;
  Eigen::Index ver_max_n = 50;
  Eigen::Index ver_max_rank = 15;
  std::uint64_t ver_seed = 20260822;
  std::string ver_report, ver_check_factor;
  DatasetFlags ver_data;
  ver->add_option("--instances", ver_instances, "Randomized instance count")
      ->capture_default_str();
  ver->add_option("--max-n", ver_max_n, "Largest instance size")
      ->capture_default_str();
  ver->add_option("--max-rank", ver_max_rank, "Largest decomposition rank")
      ->capture_default_str();
  ver->add_option("--seed", ver_seed, "Base seed for instance generation")
      ->capture_default_str();
  ver->add_option("--report", ver_report, "Verification report JSON path");
  ver->add_option("--check-factor", ver_check_factor,
                  "Check a factor file against deterministic recomputation "
                  "(requires the dataset flags)");
  add_dataset_flags(ver, ver_data);

  // solve
  auto* sol = app.add_subcommand(
      "solve", "Solve (K + noise I) x = b by preconditioned CG, matrix-free");
  DatasetFlags sol_data;
  KernelFlags sol_kernel;
  double sol_noise = 0.0;
  Eigen::Index sol_precond_rank = 0;
  double sol_tol = 1e-8;
  int sol_max_iter = 1000;
  std::uint64_t sol_rhs_seed = 0;
  std::string sol_rhs_file, sol_report, sol_solution;
  bool sol_compare = false;
  add_dataset_flags(sol, sol_data);
  add_kernel_flags(sol, sol_kernel);
  sol->add_option("--noise", sol_noise, "Noise variance added to the diagonal")
      ->required();
  sol->add_option("--precond-rank", sol_precond_rank,
                  "Preconditioner rank (0 disables preconditioning)")
      ->capture_default_str();
  sol->add_option("--tol", sol_tol, "Relative residual convergence threshold")
      ->capture_default_str();
  sol->add_option("--max-iter", sol_max_iter, "Iteration cap")
      ->capture_default_str();
  sol->add_option("--rhs-seed", sol_rhs_seed,
                  "Seed for a standard-normal right-hand side")
      ->capture_default_str();
  sol->add_option("--rhs-file", sol_rhs_file,
                  "Right-hand side as a one-column CSV");
  sol->add_flag("--compare", sol_compare,
                "Also run unpreconditioned CG and report both");
  sol->add_option("--report", sol_report, "Solve report JSON path");
  sol->add_option("--out-solution", sol_solution,
                  "Write the solution vector as CSV");

  // compare-sampling
  auto* cmp = app.add_subcommand(
      "compare-sampling",
      "Compare subspace selection against pointwise farthest-point sampling");
  DatasetFlags cmp_data;
  KernelFlags cmp_kernel;
  Eigen::Index cmp_rank = 0;
  Eigen::Index cmp_seed_index = 0;
  std::string cmp_report;
  add_dataset_flags(cmp, cmp_data);
  add_kernel_flags(cmp, cmp_kernel);
  cmp->add_option("--rank", cmp_rank, "Selection length for both strategies")
      ->required();
  cmp->add_option("--seed-index", cmp_seed_index,
                  "Starting point for pointwise sampling")
      ->capture_default_str();
  cmp->add_option("--report", cmp_report, "Comparison report JSON path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (dec->parsed()) {
      return cmd_decompose(dec_data, dec_kernel, dec_rank, dec_tol,
                           dec_out_factor, dec_out_trace, dec_out_manifest);
    }
    if (ver->parsed()) {
      return cmd_verify(ver_instances, ver_max_n, ver_max_rank, ver_seed,
                        ver_report, ver_check_factor, ver_data);
    }
    if (sol->parsed()) {
      return cmd_solve(sol_data, sol_kernel, sol_noise, sol_precond_rank,
                       sol_tol, sol_max_iter, sol_rhs_seed, sol_rhs_file,
                       sol_compare, sol_report, sol_solution);
    }
    if (cmp->parsed()) {
      return cmd_compare_sampling(cmp_data, cmp_kernel, cmp_rank,
                                  cmp_seed_index, cmp_report);
    }
  } catch (const lz::ArgumentError& e) {
    std::cerr << "argument error: " << e.what() << "\n";
    return 2;
  } catch (const lz::ParseError& e) {
    std::cerr << "parse error: " << e.what();
    if (e.row >= 0) {
      std::cerr << " (row " << e.row;
      if (e.column >= 0) {
        std::cerr << ", column " << e.column;
      }
      std::cerr << ")";
    }
    std::cerr << "\n";
    return 2;
  } catch (const lz::OracleScaleError& e) {
    std::cerr << "scale error: " << e.what() << "\n";
    return 2;
  } catch (const lz::DivergenceError& e) {
    std::cerr << "divergence: " << e.what() << "\n";
    return 4;
  } catch (const lz::InvalidKernelError& e) {
    std::cerr << "numeric error (kernel not positive semidefinite): "
              << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 3;
  }
  return 2;
}
