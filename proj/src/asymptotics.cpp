#include "corrlog/asymptotics.hpp"

#include <cmath>
#include <string>

#include "corrlog/jacobians.hpp"
#include "corrlog/parallel.hpp"
#include "corrlog/random.hpp"

namespace corrlog {

namespace {

void guard_omega(Index n) {
  if (n > kDenseJacobianMaxDim) {
    throw SizeGuardError("n^2 x n^2 Omega refused for n=" + std::to_string(n));
  }
}

Matrix select(const Matrix& m, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t a = 0; a < rows.size(); ++a) {
    for (std::size_t b = 0; b < cols.size(); ++b) {
      out(static_cast<Index>(a), static_cast<Index>(b)) = m(rows[a], cols[b]);
    }
  }
  return out;
}

Matrix symmetrized(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

OmegaMatrix omega_normal_iid(const CorrelationMatrix& c) {
  const Index n = c.n();
  guard_omega(n);
  const Matrix& r = c.matrix();
  Matrix omega = Matrix::Zero(n * n, n * n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j) continue;
      for (Index l = 0; l < n; ++l) {
        for (Index k = 0; k < n; ++k) {
          if (k == l) continue;
          const double ik = r(i, k), il = r(i, l), jk = r(j, k), jl = r(j, l);
          const double ij = r(i, j), kl = r(k, l);
          omega(vec_index(i, j, n), vec_index(k, l, n)) =
              0.5 * ij * kl * (ik * ik + il * il + jk * jk + jl * jl) + ik * jl + il * jk -
              ij * (jk * jl + ik * il) - kl * (ik * jk + il * jl);
        }
      }
    }
  }
  return {n, std::move(omega)};
}

Matrix omega_rho(const OmegaMatrix& omega) {
  const auto el = elimination_lower(omega.n);
  return symmetrized(select(omega.values, el, el));
}

Vector dc_diagonal(const CorrelationMatrix& c) {
  const Vector rho = vecl(c).values();
  return (1.0 - rho.array().square()).inverse();
}

Matrix omega_phi(const OmegaMatrix& omega, const CorrelationMatrix& c) {
  if (omega.n != c.n()) throw DimensionError("Omega and C dimensions differ");
  const Vector dc = dc_diagonal(c);
  return symmetrized(dc.asDiagonal() * omega_rho(omega) * dc.asDiagonal());
}

Matrix omega_gamma(const OmegaMatrix& omega, const CorrelationMatrix& c) {
  const Index n = c.n();
  if (omega.n != n) throw DimensionError("Omega and C dimensions differ");
  guard_omega(n);
  EigenDecomposition eig = sym_eig(c.sym());
  eig.lambda = eig.lambda.array().log();
  const JacobianOperator a(std::move(eig));

  // E_l A^{-1}: A^{-1} is symmetric, so row k is A^{-1} applied to unit vec E_l[k].
  const auto el = elimination_lower(n);
  Matrix rows(static_cast<Index>(el.size()), n * n);
  Vector unit = Vector::Zero(n * n);
  for (std::size_t k = 0; k < el.size(); ++k) {
    unit(el[k]) = 1.0;
    rows.row(static_cast<Index>(k)) = a.apply_inverse(unit).transpose();
    unit(el[k]) = 0.0;
  }
  return symmetrized(rows * omega.values * rows.transpose());
}

Matrix acorr(const Matrix& m) {
  if (m.rows() != m.cols()) throw DimensionError("acorr needs a square matrix");
  for (Index i = 0; i < m.rows(); ++i) {
    if (!(m(i, i) > 0.0)) {
      throw DomainError("acorr needs a strictly positive diagonal; entry " +
                        std::to_string(i + 1) + " is " + std::to_string(m(i, i)));
    }
  }
  const Vector inv_sd = m.diagonal().array().rsqrt();
  Matrix out = inv_sd.asDiagonal() * m * inv_sd.asDiagonal();
  out.diagonal().setOnes();
  return out;
}

OmegaMatrix omega_monte_carlo(const CorrelationMatrix& c, Index samples, Index reps,
                              std::uint64_t seed, unsigned threads) {
  const Index n = c.n();
  guard_omega(n);
  if (samples < 1000) throw DomainError("Monte Carlo needs at least 1000 samples per panel");
  if (reps < 2) throw DomainError("Monte Carlo needs at least 2 replications");

  const Eigen::LLT<Matrix> llt(c.matrix());
  if (llt.info() != Eigen::Success) throw EigenSolverError("Cholesky factorization of C failed");
  const Matrix lower = llt.matrixL();

  Matrix deviations(n * n, reps);
  parallel_for(static_cast<std::size_t>(reps), threads, [&](std::size_t r) {
    Philox4x32 rng(seed, r);
    Vector z(n);
    Vector sum = Vector::Zero(n);
    Matrix cross = Matrix::Zero(n, n);
    for (Index t = 0; t < samples; ++t) {
      for (Index i = 0; i < n; ++i) z(i) = standard_normal(rng);
      const Vector x = lower * z;
      sum += x;
      cross.selfadjointView<Eigen::Lower>().rankUpdate(x);
    }
    const double count = static_cast<double>(samples);
    const Vector mean = sum / count;
    Matrix cov = cross.selfadjointView<Eigen::Lower>();
    cov = cov / count - mean * mean.transpose();
    const Vector inv_sd = cov.diagonal().array().rsqrt();
    Matrix c_hat = inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
    Matrix dev = std::sqrt(count) * (c_hat - c.matrix());
    dev.diagonal().setZero();
    deviations.col(static_cast<Index>(r)) = Eigen::Map<const Vector>(dev.data(), n * n);
  });

  const Vector mean = deviations.rowwise().mean();
  const Matrix centered = deviations.colwise() - mean;
  Matrix omega = centered * centered.transpose() / static_cast<double>(reps - 1);
  return {n, symmetrized(omega)};
}

}  // namespace corrlog
