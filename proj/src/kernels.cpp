/*
 * This file is part of lazychol, a toolkit for lazy pivoted Cholesky
 * decomposition of kernel matrices.
 *
 * Copyright (c) 2026 lazychol contributors
 *
 * Licensed under the Apache License, Version 2.0. See the LICENSE file in
 * the project root for license information.
 */
#include "lazychol/kernels.hpp"

#include <cmath>
#include <cstdlib>
#include <thread>
#include <vector>

namespace lazychol {

const char* to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::RBF: return "rbf";
    case KernelFamily::Matern12: return "matern12";
    case KernelFamily::Matern32: return "matern32";
    case KernelFamily::Matern52: return "matern52";
    case KernelFamily::Linear: return "linear";
    case KernelFamily::Polynomial: return "polynomial";
  }
  return "unknown";
}

KernelFamily kernel_family_from_string(const std::string& name) {
  if (name == "rbf") return KernelFamily::RBF;
  if (name == "matern12") return KernelFamily::Matern12;
  if (name == "matern32") return KernelFamily::Matern32;
  if (name == "matern52") return KernelFamily::Matern52;
  if (name == "linear") return KernelFamily::Linear;
  if (name == "polynomial") return KernelFamily::Polynomial;
  throw ArgumentError("unknown kernel family: " + name);
}

bool KernelSpec::is_stationary() const {
  switch (family) {
    case KernelFamily::RBF:
    case KernelFamily::Matern12:
    case KernelFamily::Matern32:
    case KernelFamily::Matern52:
      return true;
    default:
      return false;
  }
}

void KernelSpec::validate() const {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw ArgumentError("kernel variance must be positive and finite");
  }
  if (is_stationary() && (!(lengthscale > 0.0) || !std::isfinite(lengthscale))) {
    throw ArgumentError("kernel lengthscale must be positive and finite");
  }
  if (family == KernelFamily::Polynomial) {
    if (degree < 1) throw ArgumentError("polynomial degree must be >= 1");
    if (!(offset >= 0.0) || !std::isfinite(offset)) {
      throw ArgumentError("polynomial offset must be nonnegative and finite");
    }
  }
}

KernelSpec KernelSpec::rbf(double lengthscale, double variance) {
  return KernelSpec{KernelFamily::RBF, lengthscale, variance, 1, 0.0};
}
KernelSpec KernelSpec::matern12(double lengthscale, double variance) {
  return KernelSpec{KernelFamily::Matern12, lengthscale, variance, 1, 0.0};
}
KernelSpec KernelSpec::matern32(double lengthscale, double variance) {
  return KernelSpec{KernelFamily::Matern32, lengthscale, variance, 1, 0.0};
}
KernelSpec KernelSpec::matern52(double lengthscale, double variance) {
  return KernelSpec{KernelFamily::Matern52, lengthscale, variance, 1, 0.0};
}
KernelSpec KernelSpec::linear(double variance) {
  return KernelSpec{KernelFamily::Linear, 1.0, variance, 1, 0.0};
}
KernelSpec KernelSpec::polynomial(int degree, double offset, double variance) {
  return KernelSpec{KernelFamily::Polynomial, 1.0, variance, degree, offset};
}

namespace {

// Squared distance in the explicitly symmetric form sum (x_i - y_i)^2.
// Never expanded as |x|^2 + |y|^2 - 2 x.y: the symmetric form is exact under
// argument exchange and nonnegative, which the FPS argmax reproduction needs.
inline double squared_distance(const double* x, const double* y, Eigen::Index d) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) {
    const double diff = x[i] - y[i];
    s += diff * diff;
  }
  return s;
}

inline double dot(const double* x, const double* y, Eigen::Index d) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < d; ++i) s += x[i] * y[i];
  return s;
}

// Integer power by repeated multiplication; deterministic across platforms.
inline double int_pow(double base, int exponent) {
  double p = 1.0;
  for (int i = 0; i < exponent; ++i) p *= base;
  return p;
}

// Scalar kernel core shared by every evaluation surface, so the diagonal,
// cross-matrix and pair paths agree bitwise.
inline double kernel_scalar(const KernelSpec& spec, const double* x,
                            const double* y, Eigen::Index d) {
  switch (spec.family) {
    case KernelFamily::RBF: {
      const double r2 = squared_distance(x, y, d);
      return spec.variance *
             std::exp(-r2 / (2.0 * spec.lengthscale * spec.lengthscale));
    }
    case KernelFamily::Matern12: {
      const double r = std::sqrt(squared_distance(x, y, d));
      return spec.variance * std::exp(-r / spec.lengthscale);
    }
    case KernelFamily::Matern32: {
      const double r = std::sqrt(squared_distance(x, y, d));
      const double t = std::sqrt(3.0) * r / spec.lengthscale;
      return spec.variance * (1.0 + t) * std::exp(-t);
    }
    case KernelFamily::Matern52: {
      const double r = std::sqrt(squared_distance(x, y, d));
      const double t = std::sqrt(5.0) * r / spec.lengthscale;
      return spec.variance * (1.0 + t + t * t / 3.0) * std::exp(-t);
    }
    case KernelFamily::Linear:
      return spec.variance * dot(x, y, d);
    case KernelFamily::Polynomial:
      return spec.variance * int_pow(dot(x, y, d) + spec.offset, spec.degree);
  }
  throw ArgumentError("unknown kernel family");
}

int configured_threads() {
  const char* env = std::getenv("LAZYCHOL_THREADS");
  if (env == nullptr) return 1;
  const int t = std::atoi(env);
  return t > 1 ? t : 1;
}

}  // namespace

double eval_pair(const KernelSpec& spec, Eigen::Ref<const Eigen::RowVectorXd> x,
                 Eigen::Ref<const Eigen::RowVectorXd> y) {
  spec.validate();
  if (x.size() != y.size()) {
    throw ArgumentError("eval_pair: points have different dimensions");
  }
  return kernel_scalar(spec, x.data(), y.data(), x.size());
}

Eigen::VectorXd eval_diag(const KernelSpec& spec, const PointSet& X) {
  spec.validate();
  const Eigen::Index n = X.size();
  const Eigen::Index d = X.dim();
  Eigen::VectorXd out(n);
  const double* data = X.matrix().data();
  for (Eigen::Index i = 0; i < n; ++i) {
    const double* row = data + i * d;
    out[i] = kernel_scalar(spec, row, row, d);
  }
  return out;
}

Eigen::MatrixXd eval_cross(const KernelSpec& spec, const PointSet& A,
                           const PointSet& B) {
  spec.validate();
  if (A.dim() != B.dim()) {
    throw ArgumentError("eval_cross: point sets have different dimensions");
  }
  const Eigen::Index na = A.size();
  const Eigen::Index nb = B.size();
  const Eigen::Index d = A.dim();
  const double* a = A.matrix().data();
  const double* b = B.matrix().data();
  Eigen::MatrixXd out(na, nb);

  auto fill_rows = [&](Eigen::Index row_begin, Eigen::Index row_end) {
    for (Eigen::Index i = row_begin; i < row_end; ++i) {
      for (Eigen::Index j = 0; j < nb; ++j) {
        out(i, j) = kernel_scalar(spec, a + i * d, b + j * d, d);
      }
    }
  };

  // Entries are independent, so row-range threading stays bitwise
  // deterministic regardless of schedule.
  const int threads = configured_threads();
  if (threads > 1 && na * nb >= 65536) {
    std::vector<std::thread> pool;
    const Eigen::Index chunk = (na + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const Eigen::Index begin = t * chunk;
      const Eigen::Index end = std::min(na, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(fill_rows, begin, end);
    }
    for (auto& th : pool) th.join();
  } else {
    fill_rows(0, na);
  }
  return out;
}

Eigen::VectorXd eval_cross_rows(const KernelSpec& spec, const PointSet& X,
                                std::span<const Eigen::Index> rows,
                                Eigen::Index col) {
  spec.validate();
  const Eigen::Index d = X.dim();
  if (col < 0 || col >= X.size()) {
    throw ArgumentError("eval_cross_rows: column index out of range");
  }
  const double* data = X.matrix().data();
  const double* pivot = data + col * d;
  Eigen::VectorXd out(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t j = 0; j < rows.size(); ++j) {
    const Eigen::Index r = rows[j];
    if (r < 0 || r >= X.size()) {
      throw ArgumentError("eval_cross_rows: row index out of range");
    }
    out[static_cast<Eigen::Index>(j)] =
        kernel_scalar(spec, data + r * d, pivot, d);
  }
  return out;
}

namespace {

// Multinomial coefficient degree! / (alpha_1! ... alpha_k! j!) as a product
// of binomials, exact in 64-bit for the supported degrees.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

// Exponent tuples of total degree `grade` over `dim` variables, appended to
// `out` in lexicographically descending order.
void enumerate_grade(Eigen::Index dim, int grade, std::vector<int>& current,
                     std::vector<std::vector<int>>& out) {
  const Eigen::Index pos = static_cast<Eigen::Index>(current.size());
  if (pos == dim - 1) {
    current.push_back(grade);
    out.push_back(current);
    current.pop_back();
    return;
  }
  for (int e = grade; e >= 0; --e) {
    current.push_back(e);
    enumerate_grade(dim, grade - e, current, out);
    current.pop_back();
  }
}

}  // namespace

Eigen::MatrixXd explicit_features(const KernelSpec& spec, const PointSet& X) {
  spec.validate();
  const Eigen::Index n = X.size();
  const Eigen::Index d = X.dim();

  if (spec.family == KernelFamily::Linear) {
    return std::sqrt(spec.variance) * X.matrix();
  }
  if (spec.family != KernelFamily::Polynomial) {
    throw UnsupportedFeatureError(
        std::string("explicit features are infinite-dimensional for family ") +
        to_string(spec.family));
  }

  const int degree = spec.degree;
  if (degree > 20) {
    throw ArgumentError("explicit polynomial features limited to degree <= 20");
  }

  // Monomial exponents in graded lexicographic order: grade ascending,
  // exponents descending lexicographically within a grade.
  std::vector<std::vector<int>> exponents;
  for (int grade = 0; grade <= degree; ++grade) {
    std::vector<int> current;
    enumerate_grade(d, grade, current, exponents);
    if (exponents.size() > 100000) {
      throw ArgumentError("polynomial feature expansion too large");
    }
  }

  // Weight for exponent tuple alpha: multinomial(degree; alpha, j) * offset^j
  // with j = degree - |alpha|. Columns with zero weight are dropped so the
  // degree-1 offset-0 expansion reduces exactly to the linear features.
  std::vector<std::pair<std::vector<int>, double>> columns;
  for (const auto& alpha : exponents) {
    int total = 0;
    for (int e : alpha) total += e;
    const int j = degree - total;
    std::uint64_t multinomial = 1;
    std::uint64_t remaining = static_cast<std::uint64_t>(degree);
    for (int e : alpha) {
      multinomial *= binomial(remaining, static_cast<std::uint64_t>(e));
      remaining -= static_cast<std::uint64_t>(e);
    }
    const double weight = static_cast<double>(multinomial) * int_pow(spec.offset, j);
    if (weight > 0.0) {
      columns.emplace_back(alpha, std::sqrt(spec.variance * weight));
    }
  }

  Eigen::MatrixXd phi(n, static_cast<Eigen::Index>(columns.size()));
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto x = X.point(i);
    for (std::size_t c = 0; c < columns.size(); ++c) {
      double monomial = 1.0;
      for (Eigen::Index k = 0; k < d; ++k) {
        monomial *= int_pow(x[k], columns[c].first[static_cast<std::size_t>(k)]);
      }
      phi(i, static_cast<Eigen::Index>(c)) = columns[c].second * monomial;
    }
  }
  return phi;
}

CountingKernel::CountingKernel(KernelSpec spec) : spec_(std::move(spec)) {
  spec_.validate();
}

double CountingKernel::pair(Eigen::Ref<const Eigen::RowVectorXd> x,
                            Eigen::Ref<const Eigen::RowVectorXd> y) const {
  counter_.pair_evals.fetch_add(1, std::memory_order_relaxed);
  return eval_pair(spec_, x, y);
}

Eigen::VectorXd CountingKernel::diag(const PointSet& X) const {
  counter_.diag_evals.fetch_add(X.size(), std::memory_order_relaxed);
  return eval_diag(spec_, X);
}

Eigen::MatrixXd CountingKernel::cross(const PointSet& A, const PointSet& B) const {
  counter_.pair_evals.fetch_add(A.size() * B.size(), std::memory_order_relaxed);
  return eval_cross(spec_, A, B);
}

Eigen::VectorXd CountingKernel::cross_rows(const PointSet& X,
                                           std::span<const Eigen::Index> rows,
                                           Eigen::Index col) const {
  counter_.pair_evals.fetch_add(static_cast<std::int64_t>(rows.size()),
                                std::memory_order_relaxed);
  return eval_cross_rows(spec_, X, rows, col);
}

}  // namespace lazychol
