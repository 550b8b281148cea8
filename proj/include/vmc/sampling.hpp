#pragma once

#include <cstdint>
#include <utility>

#include "vmc/lifting.hpp"

namespace vmc {

// Degrees-of-freedom account for completing a rank-R lifted matrix: the
// minimal per-column sample count m0, its lifted image M0 = C(m0+d, d), and
// the rate rho0 = m0/n.
struct SamplingBound {
  int n = 0;
  int s = 0;
  int d = 0;
  std::int64_t R = 0;
  std::int64_t N = 0;   // feature dimension C(n+d, d)
  int m0 = 0;
  std::int64_t M0 = 0;  // C(m0+d, d)
  double rho0 = 0.0;
};

// Feature-space rank ceiling for one affine subspace of dimension r: C(r+d, d).
std::int64_t subspace_rank_bound(int r, int d);

// Ceiling for a union of k affine subspaces of dimension <= r: k * C(r+d, d).
std::int64_t uos_rank_bound(int k, int r, int d);

// Revealed features per column when m original entries are observed: C(m+d, d).
std::int64_t observed_features(int m, int d);

// Bracket for M/N: returns ((m/n)^d, ((m+d)/n)^d).
std::pair<double, double> ratio_bounds(int m, int n, int d);

// Smallest m in {0..n} with C(m+d,d)*s >= R*(N+s-R), i.e. enough lifted
// samples to complete a rank-R N x s matrix. Requires 1 <= R <= min(N, s).
SamplingBound min_samples_per_column(int n, int s, int d, std::int64_t R);

// Asymptotic per-column sample count for a union of k r-dim subspaces:
// k^(1/d) * r.
double uos_sampling_heuristic(int k, int r, int d);

}  // namespace vmc
