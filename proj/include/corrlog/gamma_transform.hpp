#pragma once

// The gamma parametrization of correlation matrices, gamma(C) = vecl(log C),
// and its inverse computed by fixed-point iteration on the diagonal of log C.

#include <optional>
#include <vector>

#include "corrlog/symmat.hpp"

namespace corrlog {

/// Point of R^{n(n-1)/2}; any value is admissible.
using GammaVector = VeclVector;

struct SolverOptions {
  /// Step threshold on ||x_{k+1} - x_k||; defaults to 1e-8 * sqrt(n).
  std::optional<double> delta;
  int max_iter = 200;
  /// Starting diagonal; defaults to the zero vector.
  std::optional<Vector> x0;
  /// Norm used on the step. Any p >= 1, or +infinity.
  double p_norm = 2.0;
};

struct ConvergenceReport {
  int iterations = 0;
  /// ||x_{k+1} - x_k|| for every iteration performed.
  std::vector<double> residuals;
  bool converged = false;
  /// Final iterate (the fixed point on success, the last iterate otherwise).
  Vector x_star;
  double delta = 0.0;
  /// max_i |diag(result)_i - target_i| after the final iterate.
  double max_diag_error = 0.0;

  double final_residual() const { return residuals.empty() ? 0.0 : residuals.back(); }
};

/// max_iter reached before the step dropped below delta. The report carries
/// the last iterate; pass it back as x0 to resume.
class NonConvergenceError : public Error {
 public:
  explicit NonConvergenceError(ConvergenceReport report);
  const ConvergenceReport& report() const noexcept { return report_; }

 private:
  ConvergenceReport report_;
};

struct CorrelationSolve {
  CorrelationMatrix corr;
  ConvergenceReport report;
};

struct CovarianceSolve {
  SymMatrix sigma;
  ConvergenceReport report;
};

/// n log standard deviations followed by gamma of the correlation matrix.
struct CovarianceVector {
  Vector log_sd;
  GammaVector gamma;

  Index dim() const noexcept { return log_sd.size(); }
  /// (log_sd, gamma) stacked, length n(n+1)/2.
  Vector flatten() const;
  static CovarianceVector unflatten(const Vector& packed);
};

/// 1e-8 * sqrt(n).
double default_delta(Index n) noexcept;

/// Fisher's z: atanh(rho). Throws DomainError for |rho| >= 1.
double fisher(double rho);
double fisher_inv(double z) noexcept;

GammaVector gamma_of_corr(const CorrelationMatrix& c);

/// g(x) = x - log diag(exp(A[x])) where A has off-diagonal gamma.
Vector g_step(const GammaVector& gamma, const Vector& x);

/// The unique correlation matrix with vecl(log C) = gamma.
CorrelationSolve corr_of_gamma(const GammaVector& gamma, const SolverOptions& opts = {});

/// The unique SPD matrix Sigma with vecl(log Sigma) = gamma and diag(Sigma) = v.
CovarianceSolve corr_of_gamma_target_diag(const GammaVector& gamma, const Vector& v,
                                          const SolverOptions& opts = {});

CovarianceVector cov_compress(const SymMatrix& sigma);
SymMatrix cov_expand(const CovarianceVector& v, const SolverOptions& opts = {});

/// C^alpha = exp(alpha log C).
SymMatrix matrix_power(const CorrelationMatrix& c, double alpha);

}  // namespace corrlog
