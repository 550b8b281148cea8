#include "vmc/synth.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace vmc {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Matrix draw_normal(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix M(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) M(i, j) = rng.normal();
  return M;
}

Matrix orthonormal_basis(Rng& rng, int n, int r) {
  const Matrix G = draw_normal(rng, n, r);
  Eigen::HouseholderQR<Matrix> qr(G);
  return qr.householderQ() * Matrix::Identity(n, r);
}

}  // namespace

ConicSpec ConicSpec::circle(int s) { return ConicSpec{{-1, 0, 0, 1, 0, 1}, s, 1.0}; }

ConicSpec ConicSpec::parabola(int s) { return ConicSpec{{0, 0, -1, 1, 0, 0}, s, 1.0}; }

GeneratedDataset gen_uos(const UosSpec& spec, std::uint64_t seed) {
  if (spec.n < 1 || spec.k < 1 || spec.points_per_subspace < 1)
    throw std::invalid_argument("gen_uos: n, k, points_per_subspace must be >= 1");
  if (spec.r < 1 || spec.r >= spec.n)
    throw std::invalid_argument("gen_uos: need 1 <= r < n");
  if (spec.orthogonal && spec.k * spec.r > spec.n)
    throw std::invalid_argument("gen_uos: orthogonal subspaces need k*r <= n");

  Rng rng(seed);
  const int s = spec.k * spec.points_per_subspace;
  GeneratedDataset out;
  out.X.resize(spec.n, s);
  out.labels.reserve(static_cast<std::size_t>(s));
  out.spec = spec;
  out.seed = seed;

  std::vector<Matrix> bases;
  if (spec.orthogonal) {
    const Matrix Q = orthonormal_basis(rng, spec.n, spec.k * spec.r);
    for (int c = 0; c < spec.k; ++c)
      bases.push_back(Q.middleCols(static_cast<Eigen::Index>(c) * spec.r, spec.r));
  } else {
    for (int c = 0; c < spec.k; ++c) bases.push_back(orthonormal_basis(rng, spec.n, spec.r));
  }

  for (int c = 0; c < spec.k; ++c) {
    Vector offset = Vector::Zero(spec.n);
    if (spec.affine) offset = draw_normal(rng, spec.n, 1);
    const Matrix coeffs = draw_normal(rng, spec.r, spec.points_per_subspace);
    out.X.middleCols(static_cast<Eigen::Index>(c) * spec.points_per_subspace,
                     spec.points_per_subspace) =
        (bases[static_cast<std::size_t>(c)] * coeffs).colwise() + offset;
    for (int i = 0; i < spec.points_per_subspace; ++i) out.labels.push_back(c);
  }
  return out;
}

GeneratedDataset gen_parametric(const ParametricSpec& spec, std::uint64_t seed) {
  if (spec.latent_dim < 1 || spec.latent_dim > 3)
    throw std::invalid_argument("gen_parametric: latent_dim must be 1, 2 or 3");
  if (spec.map_degree < 1)
    throw std::invalid_argument("gen_parametric: map_degree must be >= 1");
  if (spec.n < 1 || spec.s < 1)
    throw std::invalid_argument("gen_parametric: n, s must be >= 1");
  if (spec.latent_dim >= spec.n)
    throw std::invalid_argument("gen_parametric: latent_dim must be < n");

  Rng rng(seed);
  const std::int64_t B = feature_dimension(spec.latent_dim, spec.map_degree);
  const Matrix coeffs = draw_normal(rng, spec.n, B);
  Matrix latent(spec.latent_dim, spec.s);
  for (Eigen::Index j = 0; j < latent.cols(); ++j)
    for (Eigen::Index i = 0; i < latent.rows(); ++i)
      latent(i, j) = rng.uniform(-1.0, 1.0);

  GeneratedDataset out;
  out.X = coeffs * lift(latent, spec.map_degree);
  out.spec = spec;
  out.seed = seed;
  return out;
}

GeneratedDataset gen_conic(const ConicSpec& spec, std::uint64_t seed) {
  const auto& c = spec.coeffs;
  if (std::all_of(c.begin(), c.end(), [](double v) { return v == 0.0; }))
    throw std::invalid_argument("gen_conic: coefficients must not all be zero");
  if (spec.s < 1) throw std::invalid_argument("gen_conic: s must be >= 1");
  if (!(spec.window > 0.0)) throw std::invalid_argument("gen_conic: window must be > 0");

  Rng rng(seed);
  GeneratedDataset out;
  out.X.resize(2, spec.s);
  out.spec = spec;
  out.seed = seed;

  constexpr int kMaxRejects = 100000;
  int rejects = 0;
  for (int i = 0; i < spec.s;) {
    if (rejects > kMaxRejects)
      throw std::domain_error("gen_conic: no real solutions on the sampling window");
    const double x = rng.uniform(-spec.window, spec.window);
    // c5*y^2 + (c2 + c4*x)*y + (c0 + c1*x + c3*x^2) = 0
    const double a = c[5];
    const double b = c[2] + c[4] * x;
    const double cc = c[0] + c[1] * x + c[3] * x * x;
    double y;
    if (a != 0.0) {
      const double disc = b * b - 4.0 * a * cc;
      if (disc < 0.0) {
        ++rejects;
        continue;
      }
      const double root = std::sqrt(disc);
      // Citardauq-stable pairing of the two roots.
      double y1, y2;
      if (b >= 0.0) {
        y1 = (-b - root) / (2.0 * a);
        y2 = (cc == 0.0) ? 0.0 : (2.0 * cc) / (-b - root);
      } else {
        y1 = (-b + root) / (2.0 * a);
        y2 = (cc == 0.0) ? 0.0 : (2.0 * cc) / (-b + root);
      }
      y = (rng.uniform() < 0.5) ? y1 : y2;
      if (!std::isfinite(y)) {
        ++rejects;
        continue;
      }
    } else {
      if (b == 0.0) {
        ++rejects;
        continue;
      }
      y = -cc / b;
    }
    out.X(0, i) = x;
    out.X(1, i) = y;
    ++i;
    rejects = 0;
  }
  return out;
}

std::size_t ObservationMask::size() const {
  std::size_t total = 0;
  for (const auto& col : column_rows) total += col.size();
  return total;
}

bool ObservationMask::contains(int row, int col) const {
  if (col < 0 || col >= cols) return false;
  const auto& rows_in = column_rows[static_cast<std::size_t>(col)];
  return std::binary_search(rows_in.begin(), rows_in.end(), row);
}

std::vector<std::pair<int, int>> ObservationMask::pairs() const {
  std::vector<std::pair<int, int>> out;
  out.reserve(size());
  for (int j = 0; j < cols; ++j)
    for (int i : column_rows[static_cast<std::size_t>(j)]) out.emplace_back(i, j);
  return out;
}

ObservationMask ObservationMask::full(int n, int s) {
  ObservationMask mask;
  mask.rows = n;
  mask.cols = s;
  mask.column_rows.resize(static_cast<std::size_t>(s));
  std::vector<int> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), 0);
  for (auto& col : mask.column_rows) col = all;
  mask.per_column_count = n;
  return mask;
}

ObservationMask ObservationMask::from_pairs(
    int n, int s, const std::vector<std::pair<int, int>>& entries) {
  ObservationMask mask;
  mask.rows = n;
  mask.cols = s;
  mask.column_rows.resize(static_cast<std::size_t>(s));
  for (const auto& [i, j] : entries) {
    if (i < 0 || i >= n || j < 0 || j >= s) {
      std::ostringstream msg;
      msg << "mask entry (" << i << ", " << j << ") out of range for " << n << "x" << s;
      throw std::invalid_argument(msg.str());
    }
    mask.column_rows[static_cast<std::size_t>(j)].push_back(i);
  }
  bool uniform = true;
  for (auto& col : mask.column_rows) {
    std::sort(col.begin(), col.end());
    if (std::adjacent_find(col.begin(), col.end()) != col.end())
      throw std::invalid_argument("mask contains duplicate entries");
    if (col.size() != mask.column_rows.front().size()) uniform = false;
  }
  if (uniform && s > 0)
    mask.per_column_count = static_cast<int>(mask.column_rows.front().size());
  return mask;
}

ObservationMask sample_mask(int n, int s, int m, std::uint64_t seed) {
  if (n < 0 || s < 0) throw std::invalid_argument("sample_mask: n, s must be >= 0");
  if (m < 0 || m > n)
    throw std::invalid_argument("sample_mask: need 0 <= m <= n");
  Rng rng(seed);
  ObservationMask mask;
  mask.rows = n;
  mask.cols = s;
  mask.column_rows.resize(static_cast<std::size_t>(s));
  mask.per_column_count = m;
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (auto& col : mask.column_rows) {
    std::iota(idx.begin(), idx.end(), 0);
    // Partial Fisher-Yates: first m entries are a uniform m-subset.
    for (int t = 0; t < m; ++t) {
      const auto pick = t + static_cast<int>(rng.uniform_below(
                                static_cast<std::uint64_t>(n - t)));
      std::swap(idx[static_cast<std::size_t>(t)], idx[static_cast<std::size_t>(pick)]);
    }
    col.assign(idx.begin(), idx.begin() + m);
    std::sort(col.begin(), col.end());
  }
  return mask;
}

Matrix ObservedMatrix::zero_filled() const {
  Matrix out = Matrix::Zero(values.rows(), values.cols());
  for (int j = 0; j < mask.cols; ++j)
    for (int i : mask.column_rows[static_cast<std::size_t>(j)]) out(i, j) = values(i, j);
  return out;
}

void ObservedMatrix::restore_observed(Matrix& target) const {
  if (target.rows() != values.rows() || target.cols() != values.cols())
    throw std::invalid_argument("restore_observed: shape mismatch");
  for (int j = 0; j < mask.cols; ++j)
    for (int i : mask.column_rows[static_cast<std::size_t>(j)]) target(i, j) = values(i, j);
}

ObservedMatrix apply_mask(const Matrix& X, const ObservationMask& mask) {
  if (mask.rows != X.rows() || mask.cols != X.cols())
    throw std::invalid_argument("apply_mask: mask shape does not match matrix");
  ObservedMatrix obs;
  obs.values = Matrix::Constant(X.rows(), X.cols(), kNaN);
  obs.mask = mask;
  for (int j = 0; j < mask.cols; ++j)
    for (int i : mask.column_rows[static_cast<std::size_t>(j)]) obs.values(i, j) = X(i, j);
  return obs;
}

}  // namespace vmc
