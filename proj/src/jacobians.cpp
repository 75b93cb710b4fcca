#include "corrlog/jacobians.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace corrlog {

namespace {

void guard_dense(Index n) {
  if (n > kDenseJacobianMaxDim) {
    throw SizeGuardError("dense n^2 x n^2 Jacobian refused for n=" + std::to_string(n) +
                         " (limit " + std::to_string(kDenseJacobianMaxDim) +
                         "); use JacobianOperator::apply()");
  }
}

// cosh(t) - sinh(t)/t = sum_{j>=1} 2j t^{2j} / (2j+1)!, summed directly near 0
// where the closed form cancels.
double cosh_minus_sinhc(double t) noexcept {
  if (std::abs(t) >= 0.5) return std::cosh(t) - sinhc(t);
  const double t2 = t * t;
  double power = 1.0;      // t^{2j}
  double factorial = 1.0;  // (2j+1)!
  double sum = 0.0;
  for (int j = 1; j <= 12; ++j) {
    power *= t2;
    factorial *= (2.0 * j) * (2.0 * j + 1.0);
    sum += 2.0 * j * power / factorial;
  }
  return sum;
}

Matrix unvec(const Vector& v, Index n) {
  if (v.size() != n * n) {
    throw DimensionError("vec has length " + std::to_string(v.size()) + ", expected " +
                         std::to_string(n * n));
  }
  return Eigen::Map<const Matrix>(v.data(), n, n);
}

Vector vec(const Matrix& m) { return Eigen::Map<const Vector>(m.data(), m.size()); }

}  // namespace

double phi_kl(double lk, double ll) noexcept {
  const double m = 0.5 * (lk + ll);
  const double t = 0.5 * (lk - ll);
  return 2.0 * std::exp(m) * cosh_minus_sinhc(t);
}

double sinhc(double t) noexcept {
  if (std::abs(t) < 1e-4) {
    const double t2 = t * t;
    return 1.0 + t2 / 6.0 * (1.0 + t2 / 20.0);
  }
  return std::sinh(t) / t;
}

Matrix xi_matrix(const Vector& lambda) {
  const Index n = lambda.size();
  Matrix xi(n, n);
  for (Index k = 0; k < n; ++k) {
    xi(k, k) = std::exp(lambda(k));
    for (Index l = k + 1; l < n; ++l) {
      const double value =
          std::exp(0.5 * (lambda(k) + lambda(l))) * sinhc(0.5 * (lambda(k) - lambda(l)));
      xi(k, l) = value;
      xi(l, k) = value;
    }
  }
  return xi;
}

// --- JacobianOperator --------------------------------------------------------

JacobianOperator::JacobianOperator(EigenDecomposition decomp)
    : decomp_(std::move(decomp)), xi_(xi_matrix(decomp_.lambda)) {}

Matrix JacobianOperator::apply(const Matrix& e) const {
  if (e.rows() != n() || e.cols() != n()) throw DimensionError("perturbation must be n x n");
  const Matrix& q = decomp_.Q;
  const Matrix inner = (q.transpose() * e * q).cwiseProduct(xi_);
  return q * inner * q.transpose();
}

Vector JacobianOperator::apply(const Vector& vec_e) const { return vec(apply(unvec(vec_e, n()))); }

Matrix JacobianOperator::apply_inverse(const Matrix& e) const {
  if (e.rows() != n() || e.cols() != n()) throw DimensionError("perturbation must be n x n");
  const Matrix& q = decomp_.Q;
  const Matrix inner = (q.transpose() * e * q).cwiseQuotient(xi_);
  return q * inner * q.transpose();
}

Vector JacobianOperator::apply_inverse(const Vector& vec_e) const {
  return vec(apply_inverse(unvec(vec_e, n())));
}

Matrix JacobianOperator::materialize(bool inverse) const {
  const Index n = this->n();
  guard_dense(n);
  Matrix out(n * n, n * n);
  Matrix unit = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      unit(i, j) = 1.0;
      const Matrix col = inverse ? apply_inverse(unit) : apply(unit);
      out.col(vec_index(i, j, n)) = vec(col);
      unit(i, j) = 0.0;
    }
  }
  return 0.5 * (out + out.transpose());
}

Matrix JacobianOperator::dense() const { return materialize(false); }

Matrix JacobianOperator::dense_inverse() const { return materialize(true); }

JacobianOperator jacobian_A(const EigenDecomposition& decomp) { return JacobianOperator(decomp); }

Matrix jacobian_H(const EigenDecomposition& decomp) {
  const Index n = decomp.n();
  const Matrix xi = xi_matrix(decomp.lambda);
  const Matrix& q = decomp.Q;
  Matrix h(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      const Vector w = q.row(i).cwiseProduct(q.row(j)).transpose();
      const double value = w.dot(xi * w);
      h(i, j) = value;
      h(j, i) = value;
    }
  }
  return h;
}

// --- contraction -------------------------------------------------------------

ContractionAnalysis jacobian_J(const GammaVector& gamma, const Vector& x) {
  const Index n = gamma.dim();
  const EigenDecomposition d = sym_eig(unvecl(gamma, x));
  const Matrix& q = d.Q;
  const Vector delta = q.array().square().matrix() * d.lambda.array().exp().matrix();
  const Matrix h = jacobian_H(d);
  const Vector inv_sqrt = delta.array().rsqrt();

  ContractionAnalysis out;
  out.J = Matrix::Identity(n, n) - delta.cwiseInverse().asDiagonal() * h;
  out.J_tilde = Matrix::Identity(n, n) - inv_sqrt.asDiagonal() * h * inv_sqrt.asDiagonal();

  out.J_tilde_rank_one = Matrix::Zero(n, n);
  for (Index k = 0; k < n; ++k) {
    for (Index l = k + 1; l < n; ++l) {
      const Vector u = inv_sqrt.cwiseProduct(q.col(k).cwiseProduct(q.col(l)));
      out.J_tilde_rank_one.noalias() += phi_kl(d.lambda(k), d.lambda(l)) * (u * u.transpose());
    }
  }
  out.construction_gap =
      n == 0 ? 0.0 : (out.J_tilde - out.J_tilde_rank_one).cwiseAbs().maxCoeff();

  const Matrix sym = 0.5 * (out.J_tilde + out.J_tilde.transpose());
  out.J_tilde_eigenvalues = sym_eig(SymMatrix(sym)).lambda;

  auto& diag = out.diagnostics;
  diag.nu_max = n == 0 ? 0.0 : out.J_tilde_eigenvalues.cwiseAbs().maxCoeff();
  diag.lipschitz_c = diag.nu_max > 0.0 ? -1.0 / std::log(diag.nu_max) : 0.0;
  diag.lambda_min_C = n == 0 ? 1.0 : std::exp(d.lambda(0));
  return out;
}

// --- elimination maps and d rho / d gamma -------------------------------------

std::vector<Index> elimination_lower(Index n) {
  std::vector<Index> idx;
  idx.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) idx.push_back(vec_index(i, j, n));
  }
  return idx;
}

std::vector<Index> elimination_upper(Index n) {
  std::vector<Index> idx;
  idx.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) idx.push_back(vec_index(j, i, n));
  }
  return idx;
}

std::vector<Index> elimination_diag(Index n) {
  std::vector<Index> idx;
  idx.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) idx.push_back(vec_index(i, i, n));
  return idx;
}

Matrix drho_dgamma(const CorrelationMatrix& c) {
  const Index n = c.n();
  guard_dense(n);
  const Index d = n * (n - 1) / 2;

  // A at G = log C: same eigenvectors, log eigenvalues.
  EigenDecomposition eig = sym_eig(c.sym());
  eig.lambda = eig.lambda.array().log();
  const JacobianOperator a(std::move(eig));

  const auto el = elimination_lower(n);
  const auto eu = elimination_upper(n);
  const auto ed = elimination_diag(n);

  // A E_d' (n^2 x n) and A (E_l + E_u)' (n^2 x d), one apply per column.
  Matrix a_ed(n * n, n);
  Vector unit = Vector::Zero(n * n);
  for (Index i = 0; i < n; ++i) {
    const Index pos = ed[static_cast<std::size_t>(i)];
    unit(pos) = 1.0;
    a_ed.col(i) = a.apply(unit);
    unit(pos) = 0.0;
  }
  Matrix a_sym(n * n, d);
  for (Index k = 0; k < d; ++k) {
    const Index lower = el[static_cast<std::size_t>(k)];
    const Index upper = eu[static_cast<std::size_t>(k)];
    unit(lower) = 1.0;
    unit(upper) = 1.0;
    a_sym.col(k) = a.apply(unit);
    unit(lower) = 0.0;
    unit(upper) = 0.0;
  }

  // H = E_d A E_d' and E_d A (E_l + E_u)'
  Matrix h(n, n);
  Matrix ed_a_sym(n, d);
  for (Index r = 0; r < n; ++r) {
    h.row(r) = a_ed.row(ed[static_cast<std::size_t>(r)]);
    ed_a_sym.row(r) = a_sym.row(ed[static_cast<std::size_t>(r)]);
  }
  const Eigen::LLT<Matrix> llt(0.5 * (h + h.transpose()));
  if (llt.info() != Eigen::Success) throw EigenSolverError("diagonal block of A is not SPD");
  const Matrix dx_dy = llt.solve(ed_a_sym);  // minus the implicit-function slope

  Matrix out(d, d);
  for (Index r = 0; r < d; ++r) {
    const Index row = el[static_cast<std::size_t>(r)];
    out.row(r) = a_sym.row(row) - a_ed.row(row) * dx_dy;
  }
  return out;
}

}  // namespace corrlog
