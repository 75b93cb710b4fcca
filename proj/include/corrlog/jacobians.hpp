#pragma once

// Derivatives of the symmetric matrix exponential and of the fixed-point
// map g(x) = x - log diag(exp(A[x])).
//
// For G = Q diag(lambda) Q', d vec(exp G) = A d vec(G) with
//   A = (Q (x) Q) Xi (Q (x) Q)',
// Xi diagonal with the divided differences xi_kl of exp at (lambda_k, lambda_l).
// A is never formed unless asked for; apply() costs O(n^3).

#include <vector>

#include "corrlog/gamma_transform.hpp"
#include "corrlog/symmat.hpp"

namespace corrlog {

/// Largest n for which n^2 x n^2 matrices are materialized.
inline constexpr Index kDenseJacobianMaxDim = 64;

/// xi_kk = exp(lambda_k), xi_kl = (exp(lambda_k) - exp(lambda_l)) / (lambda_k - lambda_l),
/// evaluated as exp((lk+ll)/2) * sinh(t)/t with t = (lk-ll)/2.
Matrix xi_matrix(const Vector& lambda);

/// sinh(t)/t, with a Taylor series for |t| < 1e-4.
double sinhc(double t) noexcept;

/// xi_kk + xi_ll - 2 xi_kl = 2 exp((lk+ll)/2) (cosh t - sinh(t)/t), t = (lk-ll)/2,
/// without the cancellation of the direct formula.
double phi_kl(double lk, double ll) noexcept;

class JacobianOperator {
 public:
  explicit JacobianOperator(EigenDecomposition decomp);

  Index n() const noexcept { return decomp_.n(); }
  const EigenDecomposition& decomposition() const noexcept { return decomp_; }
  const Matrix& xi() const noexcept { return xi_; }

  /// A applied to the n x n matrix E (that is, to vec E), returned as a matrix.
  Matrix apply(const Matrix& e) const;
  /// A applied to a length-n^2 column-major vec.
  Vector apply(const Vector& vec_e) const;
  /// A^{-1}, using 1/xi in the eigenbasis.
  Matrix apply_inverse(const Matrix& e) const;
  Vector apply_inverse(const Vector& vec_e) const;

  /// Dense n^2 x n^2 forms. Throw SizeGuardError for n > kDenseJacobianMaxDim.
  Matrix dense() const;
  Matrix dense_inverse() const;

 private:
  Matrix materialize(bool inverse) const;

  EigenDecomposition decomp_;
  Matrix xi_;
};

/// Jacobian of vec(exp G) w.r.t. vec(G) at G = Q diag(lambda) Q'.
JacobianOperator jacobian_A(const EigenDecomposition& decomp);

/// Jacobian of diag(exp G) w.r.t. diag(G):
/// H_ij = sum_kl q_ik q_jk q_il q_jl xi_kl, the diagonal-position block of A.
Matrix jacobian_H(const EigenDecomposition& decomp);

struct ContractionDiagnostics {
  /// Spectral radius of the Jacobian of g.
  double nu_max = 0.0;
  /// -1 / log(nu_max); 0 when nu_max == 0.
  double lipschitz_c = 0.0;
  /// Smallest eigenvalue of exp(A[x]).
  double lambda_min_C = 0.0;
};

struct ContractionAnalysis {
  /// J = I - D^{-1} H, D = diag(diag(exp(A[x]))).
  Matrix J;
  /// I - D^{-1/2} H D^{-1/2}.
  Matrix J_tilde;
  /// sum_{k<l} phi_kl (D^{-1/2} u_kl)(D^{-1/2} u_kl)', u_kl = Q_.k o Q_.l,
  /// phi_kl = xi_kk + xi_ll - 2 xi_kl.
  Matrix J_tilde_rank_one;
  /// Ascending eigenvalues of J_tilde.
  Vector J_tilde_eigenvalues;
  /// max |J_tilde - J_tilde_rank_one|.
  double construction_gap = 0.0;
  ContractionDiagnostics diagnostics;
};

/// Jacobian of g at x for the matrix A[x] with off-diagonal gamma.
ContractionAnalysis jacobian_J(const GammaVector& gamma, const Vector& x);

/// d vecl(C) / d vecl(log C) at a correlation matrix C (implicit-function
/// form with the diagonal of log C eliminated). n <= kDenseJacobianMaxDim.
Matrix drho_dgamma(const CorrelationMatrix& c);

/// Elimination matrices as index maps into column-major vec of an n x n
/// matrix: E_l selects vecl(M), E_u selects vecl(M'), E_d selects diag(M).
std::vector<Index> elimination_lower(Index n);
std::vector<Index> elimination_upper(Index n);
std::vector<Index> elimination_diag(Index n);

}  // namespace corrlog
