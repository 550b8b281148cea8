#include "vmc/sampling.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace vmc {

std::int64_t subspace_rank_bound(int r, int d) {
  if (r < 0) throw std::invalid_argument("subspace_rank_bound: r must be >= 0");
  if (d < 0) throw std::invalid_argument("subspace_rank_bound: d must be >= 0");
  return binomial_checked(static_cast<std::int64_t>(r) + d, d);
}

std::int64_t uos_rank_bound(int k, int r, int d) {
  if (k < 1) throw std::invalid_argument("uos_rank_bound: k must be >= 1");
  const std::int64_t per = subspace_rank_bound(r, d);
  const unsigned __int128 total =
      static_cast<unsigned __int128>(k) * static_cast<unsigned __int128>(per);
  if (total > static_cast<unsigned __int128>(std::numeric_limits<std::int64_t>::max()))
    throw std::overflow_error("uos_rank_bound: k * C(r+d, d) overflows");
  return static_cast<std::int64_t>(total);
}

std::int64_t observed_features(int m, int d) {
  if (m < 0) throw std::invalid_argument("observed_features: m must be >= 0");
  if (d < 0) throw std::invalid_argument("observed_features: d must be >= 0");
  return binomial_checked(static_cast<std::int64_t>(m) + d, d);
}

std::pair<double, double> ratio_bounds(int m, int n, int d) {
  if (m < 1 || m > n)
    throw std::invalid_argument("ratio_bounds: need 1 <= m <= n");
  if (d < 0) throw std::invalid_argument("ratio_bounds: d must be >= 0");
  const double lower = std::pow(static_cast<double>(m) / n, d);
  const double upper = std::pow(static_cast<double>(m + d) / n, d);
  return {lower, upper};
}

SamplingBound min_samples_per_column(int n, int s, int d, std::int64_t R) {
  if (n < 1 || s < 1) throw std::invalid_argument("min_samples_per_column: n, s must be >= 1");
  if (d < 0) throw std::invalid_argument("min_samples_per_column: d must be >= 0");
  const std::int64_t N = feature_dimension(n, d);
  if (R < 1 || R > std::min<std::int64_t>(N, s)) {
    std::ostringstream msg;
    msg << "min_samples_per_column: R = " << R << " outside [1, min(N, s)] = [1, "
        << std::min<std::int64_t>(N, s) << "]";
    throw std::domain_error(msg.str());
  }
  // R*(N+s-R) and M*s can exceed 64 bits for large N; compare in 128 bits.
  const unsigned __int128 needed =
      static_cast<unsigned __int128>(R) *
      static_cast<unsigned __int128>(N + s - R);
  SamplingBound bound;
  bound.n = n;
  bound.s = s;
  bound.d = d;
  bound.R = R;
  bound.N = N;
  for (int m = 0; m <= n; ++m) {
    const std::int64_t M = observed_features(m, d);
    const unsigned __int128 have =
        static_cast<unsigned __int128>(M) * static_cast<unsigned __int128>(s);
    if (have >= needed) {
      bound.m0 = m;
      bound.M0 = M;
      bound.rho0 = static_cast<double>(m) / n;
      return bound;
    }
  }
  // Unreachable when R <= min(N, s): m = n gives N*s >= R*(N+s-R).
  throw NumericalError("min_samples_per_column: no m in {0..n} satisfies the bound");
}

double uos_sampling_heuristic(int k, int r, int d) {
  if (k < 1 || r < 1 || d < 1)
    throw std::invalid_argument("uos_sampling_heuristic: need k, r, d >= 1");
  return std::pow(static_cast<double>(k), 1.0 / d) * r;
}

}  // namespace vmc
