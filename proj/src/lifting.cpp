#include "vmc/lifting.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

namespace vmc {

int MultiIndex::degree() const {
  return std::accumulate(exponents.begin(), exponents.end(), 0);
}

std::int64_t binomial_checked(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::int64_t i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned __int128>(n - k + i);
    r /= static_cast<unsigned __int128>(i);  // exact: r = C(n-k+i, i)
    if (r > static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max())) {
      std::ostringstream msg;
      msg << "binomial(" << n << ", " << k << ") overflows 64-bit integer range";
      throw std::overflow_error(msg.str());
    }
  }
  return static_cast<std::int64_t>(r);
}

std::int64_t feature_dimension(int n, int d) {
  if (n < 1) throw std::invalid_argument("feature_dimension: n must be >= 1");
  if (d < 0) throw std::invalid_argument("feature_dimension: d must be >= 0");
  return binomial_checked(static_cast<std::int64_t>(n) + d, d);
}

namespace {

void enumerate_degree(int n, int pos, int remaining, std::vector<int>& cur,
                      std::vector<MultiIndex>& out) {
  if (pos == n - 1) {
    cur[pos] = remaining;
    out.push_back(MultiIndex{cur});
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    cur[pos] = e;
    enumerate_degree(n, pos + 1, remaining - e, cur, out);
  }
}

}  // namespace

MonomialBasis monomial_basis(int n, int d) {
  const std::int64_t count = feature_dimension(n, d);
  MonomialBasis basis;
  basis.n = n;
  basis.d = d;
  basis.entries.reserve(static_cast<std::size_t>(count));
  std::vector<int> cur(static_cast<std::size_t>(n), 0);
  for (int g = 0; g <= d; ++g) enumerate_degree(n, 0, g, cur, basis.entries);
  return basis;
}

namespace {

void check_lift_budget(std::int64_t feature_dim, Eigen::Index s) {
  if (feature_dim > kLiftEntryBudget / std::max<Eigen::Index>(s, 1)) {
    std::ostringstream msg;
    msg << "lift too large, use kernel path (N*s = " << feature_dim << "*" << s
        << " exceeds " << kLiftEntryBudget << " entries)";
    throw LiftBudgetError(msg.str());
  }
}

// Shared worker: evaluates x^a per basis row, optionally scaled by sqrt(c_a).
Matrix lift_impl(const Matrix& X, int d, bool weighted) {
  if (X.rows() < 1 || X.cols() < 1)
    throw std::invalid_argument("lift: matrix must be at least 1x1");
  const int n = static_cast<int>(X.rows());
  const Eigen::Index s = X.cols();
  const MonomialBasis basis = monomial_basis(n, d);
  const std::int64_t N = basis.size();
  check_lift_budget(N, s);

  std::vector<double> weight(static_cast<std::size_t>(N), 1.0);
  if (weighted) {
    for (std::int64_t a = 0; a < N; ++a) {
      const MultiIndex& mi = basis.entries[static_cast<std::size_t>(a)];
      // Multinomial coefficient of (x.y + 1)^d for the extended index
      // (a_1,...,a_n, d - |a|), as a product of binomials over prefix sums.
      std::int64_t c = 1;
      std::int64_t prefix = 0;
      for (int v = 0; v < n; ++v) {
        prefix += mi.exponents[static_cast<std::size_t>(v)];
        c *= binomial_checked(prefix, mi.exponents[static_cast<std::size_t>(v)]);
      }
      c *= binomial_checked(d, static_cast<int>(prefix));
      weight[static_cast<std::size_t>(a)] = std::sqrt(static_cast<double>(c));
    }
  }

  Matrix L(N, s);
  Matrix powers(n, d + 1);
  for (Eigen::Index i = 0; i < s; ++i) {
    for (int v = 0; v < n; ++v) {
      powers(v, 0) = 1.0;
      for (int e = 1; e <= d; ++e) powers(v, e) = powers(v, e - 1) * X(v, i);
    }
    for (std::int64_t a = 0; a < N; ++a) {
      const MultiIndex& mi = basis.entries[static_cast<std::size_t>(a)];
      double val = 1.0;
      for (int v = 0; v < n; ++v) {
        const int e = mi.exponents[static_cast<std::size_t>(v)];
        if (e > 0) val *= powers(v, e);
      }
      L(a, i) = weight[static_cast<std::size_t>(a)] * val;
    }
  }
  return L;
}

}  // namespace

Matrix lift(const Matrix& X, int d) { return lift_impl(X, d, false); }

Matrix weighted_lift(const Matrix& X, int d) { return lift_impl(X, d, true); }

Matrix kernel_matrix(const Matrix& X, const Matrix& Y, int d) {
  if (X.rows() != Y.rows())
    throw std::invalid_argument("kernel_matrix: ambient dimensions differ");
  if (d < 0) throw std::invalid_argument("kernel_matrix: d must be >= 0");
  Matrix K = X.transpose() * Y;
  K.array() += 1.0;
  if (d != 1) {
    for (Eigen::Index j = 0; j < K.cols(); ++j)
      for (Eigen::Index i = 0; i < K.rows(); ++i)
        K(i, j) = detail::ipow(K(i, j), d);
  }
  return K;
}

namespace detail {

Vector psd_eigenvalues(const Matrix& K) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(K, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw NumericalError("symmetric eigendecomposition failed on a " +
                         std::to_string(K.rows()) + "x" +
                         std::to_string(K.cols()) + " kernel matrix");
  Vector ev = es.eigenvalues().reverse();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = std::max(ev(i), 0.0);
  return ev;
}

}  // namespace detail

RankReport lifted_rank(const Matrix& X, int d, double rel_tol) {
  if (!(rel_tol > 0.0 && rel_tol < 1.0))
    throw std::invalid_argument("lifted_rank: rel_tol must lie in (0, 1)");
  RankReport report;
  report.rel_tol = rel_tol;
  report.feature_dim = feature_dimension(static_cast<int>(X.rows()), d);
  report.columns = static_cast<int>(X.cols());
  report.eigenvalues = detail::psd_eigenvalues(kernel_matrix(X, X, d));
  const double lmax = report.eigenvalues.size() > 0 ? report.eigenvalues(0) : 0.0;
  if (lmax > 0.0) {
    const double cut = rel_tol * lmax;
    for (Eigen::Index i = 0; i < report.eigenvalues.size(); ++i)
      if (report.eigenvalues(i) > cut) ++report.numerical_rank;
  }
  return report;
}

}  // namespace vmc
