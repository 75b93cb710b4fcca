#pragma once

// Asymptotic covariance of empirical correlations and of their transforms:
//   Omega_rho   = E_l Omega E_l'
//   Omega_phi   = D_c Omega_rho D_c,            D_c = diag(1 / (1 - c_i^2))
//   Omega_gamma = E_l A^{-1} Omega A^{-1} E_l'   A = d vec(C) / d vec(log C)

#include <cstdint>

#include "corrlog/symmat.hpp"

namespace corrlog {

/// n^2 x n^2 asymptotic covariance of sqrt(T) vec(C_hat - C), indexed by
/// column-major vec positions. Rows and columns at diagonal positions are zero.
struct OmegaMatrix {
  Index n = 0;
  Matrix values;
};

/// Gaussian i.i.d. sampling: for pairs (i,j), (k,l)
///   1/2 r_ij r_kl (r_ik^2 + r_il^2 + r_jk^2 + r_jl^2) + r_ik r_jl + r_il r_jk
///   - r_ij (r_jk r_jl + r_ik r_il) - r_kl (r_ik r_jk + r_il r_jl).
/// Throws SizeGuardError above kDenseJacobianMaxDim.
OmegaMatrix omega_normal_iid(const CorrelationMatrix& c);

Matrix omega_rho(const OmegaMatrix& omega);

/// 1 / (1 - c_i^2) for c = vecl(C).
Vector dc_diagonal(const CorrelationMatrix& c);

Matrix omega_phi(const OmegaMatrix& omega, const CorrelationMatrix& c);

/// A^{-1} is applied in the eigenbasis of C as (Q (x) Q) Xi^{-1} (Q (x) Q)'.
Matrix omega_gamma(const OmegaMatrix& omega, const CorrelationMatrix& c);

/// D^{-1/2} M D^{-1/2}; DomainError unless diag(M) > 0.
Matrix acorr(const Matrix& m);

/// Empirical covariance of sqrt(T) vec(C_hat - C) over `reps` independent
/// panels of T draws from N(0, C). Replication r uses RNG stream r of `seed`,
/// so the result does not depend on `threads`.
OmegaMatrix omega_monte_carlo(const CorrelationMatrix& c, Index samples, Index reps,
                              std::uint64_t seed, unsigned threads = 1);

}  // namespace corrlog
