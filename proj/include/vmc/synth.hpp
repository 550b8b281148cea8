#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "vmc/lifting.hpp"
#include "vmc/rng.hpp"

namespace vmc {

// Union of k subspaces of dimension r in R^n, points_per_subspace columns
// each. `affine` adds a standard-normal offset per subspace; `orthogonal`
// forces mutually orthogonal subspaces (needs k*r <= n).
struct UosSpec {
  int n = 0;
  int k = 1;
  int r = 1;
  int points_per_subspace = 1;
  bool affine = false;
  bool orthogonal = false;
};

// Image of a random polynomial map R^latent_dim -> R^n of degree map_degree,
// evaluated at s latent points drawn uniformly from [-1, 1]^latent_dim.
struct ParametricSpec {
  int n = 0;
  int latent_dim = 1;
  int map_degree = 2;
  int s = 0;
};

// Plane curve c0 + c1*x + c2*y + c3*x^2 + c4*x*y + c5*y^2 = 0, sampled by
// drawing x uniformly from [-window, window] and solving for y.
struct ConicSpec {
  std::array<double, 6> coeffs{};
  int s = 0;
  double window = 1.0;

  static ConicSpec circle(int s);    // x^2 + y^2 = 1
  static ConicSpec parabola(int s);  // y = x^2
};

using VarietySpec = std::variant<UosSpec, ParametricSpec, ConicSpec>;

struct GeneratedDataset {
  Matrix X;
  std::vector<int> labels;  // per-column component index; empty if none
  VarietySpec spec;
  std::uint64_t seed = 0;
};

// Index set of revealed entries, stored as sorted row lists per column.
struct ObservationMask {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<int>> column_rows;
  std::optional<int> per_column_count;  // set when every column has m rows

  std::size_t size() const;
  bool contains(int row, int col) const;
  bool is_full() const { return size() == static_cast<std::size_t>(rows) * cols; }
  std::vector<std::pair<int, int>> pairs() const;

  static ObservationMask full(int n, int s);
  static ObservationMask from_pairs(int n, int s,
                                    const std::vector<std::pair<int, int>>& entries);
};

// A partially observed matrix: revealed values with everything else marked
// missing (NaN), never silently zero.
struct ObservedMatrix {
  Matrix values;  // NaN at unrevealed positions
  ObservationMask mask;

  int rows() const { return static_cast<int>(values.rows()); }
  int cols() const { return static_cast<int>(values.cols()); }
  bool is_observed(int i, int j) const { return mask.contains(i, j); }

  // Copy with missing entries replaced by zero.
  Matrix zero_filled() const;
  // Overwrites the observed positions of `target` with the revealed values.
  void restore_observed(Matrix& target) const;
};

GeneratedDataset gen_uos(const UosSpec& spec, std::uint64_t seed);
GeneratedDataset gen_parametric(const ParametricSpec& spec, std::uint64_t seed);
GeneratedDataset gen_conic(const ConicSpec& spec, std::uint64_t seed);

// Per column, a uniformly random m-subset of rows, independent across columns.
ObservationMask sample_mask(int n, int s, int m, std::uint64_t seed);

ObservedMatrix apply_mask(const Matrix& X, const ObservationMask& mask);

}  // namespace vmc
