#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

#include "vmc/errors.hpp"

namespace vmc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Explicit lifts are materialized only up to this many entries (N*s); larger
// instances must go through the kernel path.
inline constexpr std::int64_t kLiftEntryBudget = 10'000'000;

// Exponent vector (a_1,...,a_n) of one monomial x^a.
struct MultiIndex {
  std::vector<int> exponents;

  int degree() const;
};

// All multi-indices with |a| <= d in n variables, in graded lexicographic
// order: total degree ascending, and within a degree exponent vectors in
// descending lexicographic order (so x1 sorts before x2, matching the row
// order 1, x1, x2, x1^2, x1*x2, x2^2 for n = d = 2).
struct MonomialBasis {
  int n = 0;
  int d = 0;
  std::vector<MultiIndex> entries;

  std::int64_t size() const { return static_cast<std::int64_t>(entries.size()); }
};

// Eigenvalue profile of the kernel Gram matrix and the rank read off it.
struct RankReport {
  Vector eigenvalues;          // clamped at 0, sorted non-increasing
  int numerical_rank = 0;
  double rel_tol = 0.0;
  std::int64_t feature_dim = 0;  // N = C(n+d, d)
  int columns = 0;               // s
};

// C(n, k) in exact integer arithmetic; throws std::overflow_error if the
// result (or an intermediate) exceeds the 64-bit range.
std::int64_t binomial_checked(std::int64_t n, std::int64_t k);

// Number of monomials of degree <= d in n variables: C(n+d, d).
std::int64_t feature_dimension(int n, int d);

MonomialBasis monomial_basis(int n, int d);

// Explicit monomial lift: row a, column i holds x_i^a with rows ordered as in
// monomial_basis(n, d). Refuses instances over the entry budget.
Matrix lift(const Matrix& X, int d);

// Lift with multinomial weights sqrt(c_a), c_a = d! / (a_1!...a_n!(d-|a|)!),
// so that weighted_lift(X,d)^T weighted_lift(Y,d) = kernel_matrix(X,Y,d).
Matrix weighted_lift(const Matrix& X, int d);

// Polynomial kernel Gram matrix: entry (i,j) = (x_i . y_j + 1)^d.
Matrix kernel_matrix(const Matrix& X, const Matrix& Y, int d);

// Eigenvalues of kernel_matrix(X, X, d), never materializing the lift.
// Negative roundoff eigenvalues are clamped to zero; the rank counts
// eigenvalues above rel_tol * lambda_max.
RankReport lifted_rank(const Matrix& X, int d, double rel_tol = 1e-8);

namespace detail {

// x^e by repeated multiplication; e >= 0. Exact for e = 0 (returns 1).
inline double ipow(double x, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

// Eigenvalues of a symmetric PSD matrix, clamped at 0, non-increasing.
Vector psd_eigenvalues(const Matrix& K);

}  // namespace detail

}  // namespace vmc
