#include "corrlog/gamma_transform.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace corrlog {

namespace {

std::string non_convergence_message(const ConvergenceReport& r) {
  std::ostringstream os;
  os << "fixed-point iteration did not converge in " << r.iterations
     << " iterations (last step " << r.final_residual() << ", delta " << r.delta << ')';
  return os.str();
}

double step_norm(const Vector& step, double p) {
  if (std::isinf(p)) return step.lpNorm<Eigen::Infinity>();
  if (p == 2.0) return step.norm();
  if (p == 1.0) return step.lpNorm<1>();
  return std::pow(step.array().abs().pow(p).sum(), 1.0 / p);
}

// log diag(exp(A[x])) from a single eigendecomposition of A[x]. The largest
// eigenvalue is factored out so huge |gamma| cannot overflow exp().
Vector log_diag_exp(const GammaVector& gamma, const Vector& x) {
  const EigenDecomposition d = sym_eig(unvecl(gamma, x));
  const double shift = d.lambda.maxCoeff();
  const Vector weights = (d.lambda.array() - shift).exp().matrix();
  const Vector diag = d.Q.array().square().matrix() * weights;
  return diag.array().log() + shift;
}

// x_{k+1} = x_k + log_target - log diag(exp(A[x_k])), stopped on the step norm.
ConvergenceReport iterate(const GammaVector& gamma, const Vector& log_target,
                          const SolverOptions& opts) {
  const Index n = gamma.dim();
  ConvergenceReport report;
  report.delta = opts.delta.value_or(default_delta(n));
  if (!(report.delta > 0.0)) throw DomainError("delta must be positive");
  if (opts.max_iter < 1) throw DomainError("max_iter must be at least 1");
  if (!(opts.p_norm >= 1.0)) throw DomainError("p_norm must be >= 1");

  Vector x = opts.x0.value_or(Vector::Zero(n));
  if (x.size() != n) {
    throw DimensionError("x0 has length " + std::to_string(x.size()) + ", expected " +
                         std::to_string(n));
  }
  if (!x.allFinite()) throw DomainError("x0 must be finite");

  report.residuals.reserve(static_cast<std::size_t>(opts.max_iter));
  for (int k = 1; k <= opts.max_iter; ++k) {
    Vector next = x + log_target - log_diag_exp(gamma, x);
    const double r = step_norm(next - x, opts.p_norm);
    x = std::move(next);
    report.residuals.push_back(r);
    report.iterations = k;
    if (r <= report.delta) {
      report.converged = true;
      break;
    }
  }
  report.x_star = std::move(x);
  return report;
}

}  // namespace

NonConvergenceError::NonConvergenceError(ConvergenceReport report)
    : Error(non_convergence_message(report)), report_(std::move(report)) {}

Vector CovarianceVector::flatten() const {
  Vector out(log_sd.size() + gamma.size());
  out << log_sd, gamma.values();
  return out;
}

CovarianceVector CovarianceVector::unflatten(const Vector& packed) {
  // n(n+1)/2 = len  <=>  (n+1)n/2 = len, so n+1 is the vecl dimension of len
  auto m = VeclVector::dim_for_length(packed.size());
  if (!m || *m < 2) {
    throw DimensionError("covariance vector length " + std::to_string(packed.size()) +
                         " is not n(n+1)/2 for any n >= 1");
  }
  const Index n = *m - 1;
  return {packed.head(n), GammaVector(packed.tail(packed.size() - n))};
}

double default_delta(Index n) noexcept { return 1e-8 * std::sqrt(static_cast<double>(n)); }

double fisher(double rho) {
  if (!(std::abs(rho) < 1.0)) {
    throw DomainError("Fisher transformation needs |rho| < 1, got " + std::to_string(rho));
  }
  return std::atanh(rho);
}

double fisher_inv(double z) noexcept { return std::tanh(z); }

GammaVector gamma_of_corr(const CorrelationMatrix& c) { return vecl(sym_log(c.sym())); }

Vector g_step(const GammaVector& gamma, const Vector& x) {
  if (x.size() != gamma.dim()) {
    throw DimensionError("x has length " + std::to_string(x.size()) + ", expected " +
                         std::to_string(gamma.dim()));
  }
  return x - log_diag_exp(gamma, x);
}

CorrelationSolve corr_of_gamma(const GammaVector& gamma, const SolverOptions& opts) {
  const Index n = gamma.dim();
  ConvergenceReport report = iterate(gamma, Vector::Zero(n), opts);
  if (!report.converged) throw NonConvergenceError(std::move(report));

  SymMatrix c = sym_exp(unvecl(gamma, report.x_star));
  report.max_diag_error = (c.diagonal().array() - 1.0).abs().maxCoeff();
  CorrelationMatrix corr = validate_correlation(c, 10.0 * report.delta);
  return {std::move(corr), std::move(report)};
}

CovarianceSolve corr_of_gamma_target_diag(const GammaVector& gamma, const Vector& v,
                                          const SolverOptions& opts) {
  const Index n = gamma.dim();
  if (v.size() != n) {
    throw DimensionError("target diagonal has length " + std::to_string(v.size()) +
                         ", expected " + std::to_string(n));
  }
  for (Index i = 0; i < n; ++i) {
    if (!(v(i) > 0.0) || !std::isfinite(v(i))) {
      throw DomainError("target diagonal entry " + std::to_string(i + 1) +
                        " must be positive, got " + std::to_string(v(i)));
    }
  }
  ConvergenceReport report = iterate(gamma, v.array().log().matrix(), opts);
  if (!report.converged) throw NonConvergenceError(std::move(report));

  SymMatrix sigma = sym_exp(unvecl(gamma, report.x_star));
  report.max_diag_error = (sigma.diagonal() - v).cwiseAbs().maxCoeff();
  return {std::move(sigma), std::move(report)};
}

CovarianceVector cov_compress(const SymMatrix& sigma) {
  const Index n = sigma.n();
  if (n == 0) throw DimensionError("covariance matrix is empty");
  const EigenDecomposition d = sym_eig(sigma);
  const double threshold = pd_threshold(d.lambda(n - 1));
  if (!(d.lambda(0) > threshold)) {
    throw ValidationError({{ViolationKind::Definiteness, 0, 0, d.lambda(0)}}, d.lambda(0));
  }
  const Vector sd = sigma.diagonal().array().sqrt();
  const Vector inv_sd = sd.cwiseInverse();
  Matrix r = inv_sd.asDiagonal() * sigma.matrix() * inv_sd.asDiagonal();
  r.diagonal().setOnes();
  const CorrelationMatrix c = validate_correlation(SymMatrix(std::move(r)), 1e-12);
  return {sd.array().log(), gamma_of_corr(c)};
}

SymMatrix cov_expand(const CovarianceVector& v, const SolverOptions& opts) {
  if (v.log_sd.size() != v.gamma.dim()) {
    throw DimensionError("log_sd has length " + std::to_string(v.log_sd.size()) +
                         " but gamma describes dimension " + std::to_string(v.gamma.dim()));
  }
  const CorrelationSolve solve = corr_of_gamma(v.gamma, opts);
  const Vector sd = v.log_sd.array().exp();
  return SymMatrix(sd.asDiagonal() * solve.corr.matrix() * sd.asDiagonal());
}

SymMatrix matrix_power(const CorrelationMatrix& c, double alpha) {
  const EigenDecomposition d = sym_eig(c.sym());
  return d.apply([alpha](double l) { return std::exp(alpha * std::log(l)); });
}

}  // namespace corrlog
