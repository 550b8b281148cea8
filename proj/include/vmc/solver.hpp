#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "vmc/lifting.hpp"
#include "vmc/synth.hpp"

namespace vmc {

enum class InitMode { zero_fill, given };

// Knobs of the kernelized IRLS iteration. q = 1 - p/2 is derived; gamma
// follows the schedule gamma_i = max(gamma0 / eta^i, gamma_floor_rel*gamma0)
// with step size tau_i = gamma_i^q.
struct IrlsConfig {
  int d = 2;
  double p = 0.5;
  std::optional<double> gamma0;   // nullopt: (0.1)^d * lambda_max at the init
  double eta = 1.01;
  double gamma_floor_rel = 1e-14;
  int max_iter = 5000;
  double tol = 1e-6;
  InitMode init = InitMode::zero_fill;
  Matrix init_matrix;             // used when init == InitMode::given
  bool keep_trace = false;

  double q() const { return 1.0 - p / 2.0; }
};

struct TraceEntry {
  int iteration = 0;
  double gamma = 0.0;
  double objective = 0.0;   // sum_i (lambda_i + gamma)^(p/2)
  double rel_change = 0.0;  // relative Frobenius change off the mask
};

struct SolveResult {
  Matrix X_hat;
  int iterations = 0;
  bool converged = false;
  double final_gamma = 0.0;
  std::vector<TraceEntry> trace;  // filled when keep_trace is set
};

// Starting point: revealed entries of X0 with zeros elsewhere, or a supplied
// warm start whose observed positions are overwritten by the revealed values.
Matrix initialize(const ObservedMatrix& observed);
Matrix initialize(const ObservedMatrix& observed, const Matrix& warm_start);

// W = V (S_clamped + gamma*I)^(-q) V^T from the symmetric eigendecomposition
// K = V S V^T; always symmetric positive definite for gamma > 0.
Matrix weight_matrix(const Matrix& K, double gamma, double q);

// One projected gradient update: A = W .* k_{d-1}(X, X); X <- X (I - tau*A);
// then the observed entries are restored exactly. `iteration` only labels the
// divergence error raised if the update produces non-finite values.
Matrix irls_step(const Matrix& X, const ObservedMatrix& observed, const Matrix& W,
                 double tau, int d, int iteration = -1);

// Kernelized IRLS for Schatten-p minimization of the lifted matrix.
SolveResult vmc_complete(const ObservedMatrix& observed, const IrlsConfig& config);

// Linear-kernel specialization: p = 1 is the convex nuclear-norm baseline,
// p = 1/2 the non-convex one.
SolveResult lrmc_complete(const ObservedMatrix& observed, double p);
SolveResult lrmc_complete(const ObservedMatrix& observed, IrlsConfig config);

// ||X_hat - X0||_F / ||X0||_F.
double completion_error(const Matrix& X_hat, const Matrix& X0);

// Fraction of columns with relative error below `threshold`; zero columns of
// X0 count as recovered iff the matching column of X_hat has norm below it.
double column_success_rate(const Matrix& X_hat, const Matrix& X0,
                           double threshold = 1e-5);

}  // namespace vmc
