#include "vmc/solver.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <sstream>

namespace vmc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void validate(const IrlsConfig& cfg, const ObservedMatrix& observed) {
  if (cfg.d < 1) throw std::invalid_argument("IrlsConfig: d must be >= 1");
  if (!(cfg.p > 0.0 && cfg.p <= 1.0))
    throw std::invalid_argument("IrlsConfig: p must lie in (0, 1]");
  if (!(cfg.eta > 1.0)) throw std::invalid_argument("IrlsConfig: eta must be > 1");
  if (!(cfg.tol > 0.0)) throw std::invalid_argument("IrlsConfig: tol must be > 0");
  if (cfg.max_iter < 1) throw std::invalid_argument("IrlsConfig: max_iter must be >= 1");
  if (cfg.gamma0 && !(*cfg.gamma0 > 0.0))
    throw std::invalid_argument("IrlsConfig: explicit gamma0 must be > 0");
  if (cfg.init == InitMode::given) {
    if (cfg.init_matrix.rows() != observed.values.rows() ||
        cfg.init_matrix.cols() != observed.values.cols())
      throw std::invalid_argument("IrlsConfig: init_matrix shape mismatch");
  } else if (observed.mask.size() == 0) {
    throw std::invalid_argument(
        "vmc_complete: need at least one observed entry or an explicit init");
  }
}

// Stable evaluation of g(lambda) = ((lambda+gamma)^-q - gamma^-q) / lambda,
// the spectral transfer coefficient of the weight matrix split into its
// gamma^-q bulk and a rank-N correction. Smooth down to lambda = 0.
double weight_transfer(double lambda, double gamma, double q, double gamma_pow) {
  const double u = lambda / gamma;
  if (u < 1e-12) return -q * gamma_pow / gamma;  // limit of the difference quotient
  return gamma_pow * std::expm1(-q * std::log1p(u)) / lambda;
}

struct SpectrumAndWeight {
  Matrix W;
  double objective = 0.0;
  double lambda_max = 0.0;
};

// Eigendecomposition route written in Algorithm form: eig(K), clamp, invert.
SpectrumAndWeight weight_from_kernel(const Matrix& X, int d, double gamma, double q,
                                     double p, bool want_objective, int iteration = -1) {
  const Matrix K = kernel_matrix(X, X, d);
  if (!K.allFinite())
    throw DivergenceError("IRLS diverged: kernel matrix overflowed at iteration " +
                              std::to_string(iteration),
                          iteration);
  Eigen::SelfAdjointEigenSolver<Matrix> es(K);
  if (es.info() != Eigen::Success)
    throw NumericalError("weight matrix eigendecomposition failed (s = " +
                         std::to_string(K.rows()) + ")");
  Vector lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = std::max(lam(i), 0.0);
  SpectrumAndWeight out;
  out.lambda_max = lam(lam.size() - 1);
  Vector powered(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    powered(i) = std::pow(lam(i) + gamma, -q);
  out.W = es.eigenvectors() * powered.asDiagonal() * es.eigenvectors().transpose();
  out.W = ((out.W + out.W.transpose()) * 0.5).eval();
  if (want_objective)
    for (Eigen::Index i = 0; i < lam.size(); ++i)
      out.objective += std::pow(lam(i) + gamma, p / 2.0);
  return out;
}

// Same W through the lifted Gram matrix: when N = C(n+d,d) <= s the nonzero
// spectrum of K = L^T L lives in G = L L^T (N x N), and
//   W = gamma^-q I + L^T V g(S) V^T L
// with g the transfer coefficient above. Avoids the s x s eigensolve.
SpectrumAndWeight weight_from_lift(const Matrix& L, Eigen::Index s, double gamma,
                                   double q, double p, bool want_objective,
                                   int iteration = -1) {
  const Matrix G = L * L.transpose();
  if (!G.allFinite())
    throw DivergenceError("IRLS diverged: lifted Gram matrix overflowed at iteration " +
                              std::to_string(iteration),
                          iteration);
  Eigen::SelfAdjointEigenSolver<Matrix> es(G);
  if (es.info() != Eigen::Success)
    throw NumericalError("weight matrix eigendecomposition failed (N = " +
                         std::to_string(G.rows()) + ")");
  Vector lam = es.eigenvalues();
  for (Eigen::Index i = 0; i < lam.size(); ++i) lam(i) = std::max(lam(i), 0.0);
  SpectrumAndWeight out;
  out.lambda_max = lam(lam.size() - 1);
  const double gamma_pow = std::pow(gamma, -q);
  Vector transfer(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i)
    transfer(i) = weight_transfer(lam(i), gamma, q, gamma_pow);
  const Matrix VtL = es.eigenvectors().transpose() * L;
  out.W = VtL.transpose() * transfer.asDiagonal() * VtL;
  out.W.diagonal().array() += gamma_pow;
  out.W = ((out.W + out.W.transpose()) * 0.5).eval();
  if (want_objective) {
    for (Eigen::Index i = 0; i < lam.size(); ++i)
      out.objective += std::pow(lam(i) + gamma, p / 2.0);
    out.objective += static_cast<double>(s - lam.size()) * std::pow(gamma, p / 2.0);
  }
  return out;
}

bool lift_path_applies(const Matrix& X, int d) {
  std::int64_t N;
  try {
    N = feature_dimension(static_cast<int>(X.rows()), d);
  } catch (const std::overflow_error&) {
    return false;
  }
  return N <= X.cols() && N <= kLiftEntryBudget / std::max<Eigen::Index>(X.cols(), 1);
}

double kernel_lambda_max(const Matrix& X, int d) {
  if (lift_path_applies(X, d)) {
    const Matrix L = weighted_lift(X, d);
    return detail::psd_eigenvalues(L * L.transpose())(0);
  }
  return detail::psd_eigenvalues(kernel_matrix(X, X, d))(0);
}

}  // namespace

Matrix initialize(const ObservedMatrix& observed) { return observed.zero_filled(); }

Matrix initialize(const ObservedMatrix& observed, const Matrix& warm_start) {
  if (warm_start.rows() != observed.values.rows() ||
      warm_start.cols() != observed.values.cols())
    throw std::invalid_argument("initialize: warm start shape mismatch");
  Matrix X = warm_start;
  observed.restore_observed(X);
  return X;
}

Matrix weight_matrix(const Matrix& K, double gamma, double q) {
  if (K.rows() != K.cols()) throw std::invalid_argument("weight_matrix: K must be square");
  if (!(gamma > 0.0)) throw std::invalid_argument("weight_matrix: gamma must be > 0");
  Eigen::SelfAdjointEigenSolver<Matrix> es(K);
  if (es.info() != Eigen::Success)
    throw NumericalError("weight_matrix: eigendecomposition failed (s = " +
                         std::to_string(K.rows()) + ")");
  Vector powered(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < powered.size(); ++i)
    powered(i) = std::pow(std::max(es.eigenvalues()(i), 0.0) + gamma, -q);
  Matrix W = es.eigenvectors() * powered.asDiagonal() * es.eigenvectors().transpose();
  return ((W + W.transpose()) * 0.5).eval();
}

Matrix irls_step(const Matrix& X, const ObservedMatrix& observed, const Matrix& W,
                 double tau, int d, int iteration) {
  if (W.rows() != X.cols() || W.cols() != X.cols())
    throw std::invalid_argument("irls_step: W must be s x s");
  if (tau < 0.0) throw std::invalid_argument("irls_step: tau must be >= 0");
  if (observed.values.rows() != X.rows() || observed.values.cols() != X.cols())
    throw std::invalid_argument("irls_step: observed shape mismatch");
  const Matrix A = W.cwiseProduct(kernel_matrix(X, X, d - 1));
  Matrix next = X - tau * (X * A);
  observed.restore_observed(next);
  if (!next.allFinite()) {
    std::ostringstream msg;
    msg << "IRLS diverged: non-finite values in the gradient update";
    if (iteration >= 0) msg << " at iteration " << iteration;
    throw DivergenceError(msg.str(), iteration);
  }
  return next;
}

SolveResult vmc_complete(const ObservedMatrix& observed, const IrlsConfig& config) {
  validate(config, observed);
  const int d = config.d;
  const double q = config.q();

  Matrix X = (config.init == InitMode::given) ? initialize(observed, config.init_matrix)
                                              : initialize(observed);
  const double gamma0 =
      config.gamma0 ? *config.gamma0
                    : std::pow(0.1, d) * kernel_lambda_max(X, d);
  if (!(gamma0 > 0.0))
    throw NumericalError("vmc_complete: auto gamma0 is not positive");
  const double floor = config.gamma_floor_rel * gamma0;
  const bool use_lift = lift_path_applies(X, d);

  SolveResult result;
  double gamma = gamma0;
  for (int it = 1; it <= config.max_iter; ++it) {
    const double gamma_used = gamma;
    SpectrumAndWeight sw;
    if (use_lift) {
      const Matrix L = weighted_lift(X, d);
      if (!L.allFinite())
        throw DivergenceError("IRLS diverged: lifted matrix overflowed at iteration " +
                                  std::to_string(it),
                              it);
      sw = weight_from_lift(L, X.cols(), gamma, q, config.p, config.keep_trace, it);
    } else {
      sw = weight_from_kernel(X, d, gamma, q, config.p, config.keep_trace, it);
    }
    const double tau = std::pow(gamma, q);
    Matrix next = irls_step(X, observed, sw.W, tau, d, it);

    double num = 0.0, den = 0.0;
    for (int j = 0; j < observed.cols(); ++j) {
      const auto& rows_in = observed.mask.column_rows[static_cast<std::size_t>(j)];
      auto it_row = rows_in.begin();
      for (int i = 0; i < observed.rows(); ++i) {
        if (it_row != rows_in.end() && *it_row == i) {
          ++it_row;
          continue;
        }
        const double delta = next(i, j) - X(i, j);
        num += delta * delta;
        den += X(i, j) * X(i, j);
      }
    }
    const double rel = den > 0.0 ? std::sqrt(num / den) : (num > 0.0 ? kInf : 0.0);

    X = std::move(next);
    gamma = std::max(gamma / config.eta, floor);
    result.iterations = it;
    if (config.keep_trace)
      result.trace.push_back(TraceEntry{it, gamma_used, sw.objective, rel});
    if (rel < config.tol) {
      result.converged = true;
      break;
    }
  }
  result.X_hat = std::move(X);
  result.final_gamma = gamma;
  return result;
}

SolveResult lrmc_complete(const ObservedMatrix& observed, double p) {
  IrlsConfig cfg;
  cfg.d = 1;
  cfg.p = p;
  return vmc_complete(observed, cfg);
}

SolveResult lrmc_complete(const ObservedMatrix& observed, IrlsConfig config) {
  config.d = 1;
  return vmc_complete(observed, config);
}

double completion_error(const Matrix& X_hat, const Matrix& X0) {
  if (X_hat.rows() != X0.rows() || X_hat.cols() != X0.cols())
    throw std::invalid_argument("completion_error: shape mismatch");
  const double denom = X0.norm();
  if (denom == 0.0) throw std::domain_error("completion_error: ground truth has zero norm");
  return (X_hat - X0).norm() / denom;
}

double column_success_rate(const Matrix& X_hat, const Matrix& X0, double threshold) {
  if (X_hat.rows() != X0.rows() || X_hat.cols() != X0.cols())
    throw std::invalid_argument("column_success_rate: shape mismatch");
  if (X0.cols() == 0) return 1.0;
  Eigen::Index hits = 0;
  for (Eigen::Index j = 0; j < X0.cols(); ++j) {
    const double norm0 = X0.col(j).norm();
    if (norm0 > 0.0) {
      if ((X_hat.col(j) - X0.col(j)).norm() < threshold * norm0) ++hits;
    } else if (X_hat.col(j).norm() < threshold) {
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(X0.cols());
}

}  // namespace vmc
