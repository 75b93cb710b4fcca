#include "corrlog/symmat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace corrlog {

// --- SymMatrix ---------------------------------------------------------------

SymMatrix::SymMatrix(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) {
    throw DimensionError("symmetric matrix must be square, got " + std::to_string(m_.rows()) +
                         "x" + std::to_string(m_.cols()));
  }
  const Index n = m_.rows();
  for (Index j = 0; j < n; ++j) {
    for (Index i = j; i < n; ++i) {
      if (!std::isfinite(m_(i, j))) {
        throw ValidationError({{ViolationKind::NonFinite, static_cast<std::size_t>(i),
                                static_cast<std::size_t>(j), m_(i, j)}},
                              std::nan(""));
      }
      m_(j, i) = m_(i, j);
    }
  }
}

SymMatrix SymMatrix::from_full(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) {
    throw DimensionError("symmetric matrix must be square, got " + std::to_string(m.rows()) +
                         "x" + std::to_string(m.cols()));
  }
  std::vector<Violation> bad;
  for (Index j = 0; j < m.cols(); ++j) {
    for (Index i = j + 1; i < m.rows(); ++i) {
      if (!(std::abs(m(i, j) - m(j, i)) <= tol)) {
        bad.push_back({ViolationKind::Symmetry, static_cast<std::size_t>(i),
                       static_cast<std::size_t>(j), m(i, j) - m(j, i)});
      }
    }
  }
  if (!bad.empty()) throw ValidationError(std::move(bad), std::nan(""));
  return SymMatrix(m);
}

SymMatrix SymMatrix::identity(Index n) { return SymMatrix(Matrix::Identity(n, n)); }

SymMatrix SymMatrix::zero(Index n) { return SymMatrix(Matrix::Zero(n, n)); }

SymMatrix SymMatrix::diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

// --- vecl ----------------------------------------------------------------------

std::optional<Index> VeclVector::dim_for_length(Index d) noexcept {
  if (d < 0) return std::nullopt;
  // n(n-1)/2 = d  =>  n = (1 + sqrt(1 + 8d)) / 2
  auto n = static_cast<Index>(std::llround((1.0 + std::sqrt(1.0 + 8.0 * static_cast<double>(d))) / 2.0));
  for (Index cand = std::max<Index>(1, n - 1); cand <= n + 1; ++cand) {
    if (cand * (cand - 1) / 2 == d) return cand;
  }
  return std::nullopt;
}

VeclVector::VeclVector(Vector values) : values_(std::move(values)) {
  auto n = dim_for_length(values_.size());
  if (!n) {
    throw DimensionError("vecl length " + std::to_string(values_.size()) +
                         " is not a triangular number n(n-1)/2");
  }
  n_ = *n;
}

VeclVector VeclVector::zero(Index n) {
  if (n < 1) throw DimensionError("dimension must be at least 1");
  return VeclVector(Vector::Zero(n * (n - 1) / 2));
}

std::pair<Index, Index> vecl_position(Index k, Index n) {
  Index col = 0;
  Index remaining = k;
  while (remaining >= n - 1 - col) {
    remaining -= n - 1 - col;
    ++col;
    if (col >= n) throw DimensionError("vecl index out of range");
  }
  return {col + 1 + remaining, col};
}

VeclVector vecl(const SymMatrix& m) {
  const Index n = m.n();
  Vector out(n * (n - 1) / 2);
  Index k = 0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) out(k++) = m(i, j);
  }
  return VeclVector(std::move(out));
}

VeclVector vecl(const CorrelationMatrix& c) { return vecl(c.sym()); }

SymMatrix unvecl(const VeclVector& v, const Vector& diag) {
  const Index n = v.dim();
  if (diag.size() != n) {
    throw DimensionError("diagonal has length " + std::to_string(diag.size()) + ", expected " +
                         std::to_string(n));
  }
  Matrix m(n, n);
  Index k = 0;
  for (Index j = 0; j < n; ++j) {
    m(j, j) = diag(j);
    for (Index i = j + 1; i < n; ++i) {
      m(i, j) = v[k];
      m(j, i) = v[k];
      ++k;
    }
  }
  return SymMatrix(std::move(m));
}

// --- spectral functions ------------------------------------------------------

double pd_threshold(double lambda_max) noexcept { return 1e-12 * std::max(1.0, lambda_max); }

EigenDecomposition sym_eig(const SymMatrix& m) {
  if (m.n() == 0) return {Matrix(0, 0), Vector(0)};
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(), Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw EigenSolverError("symmetric eigensolver failed to converge (n=" +
                           std::to_string(m.n()) + ")");
  }
  return {solver.eigenvectors(), solver.eigenvalues()};
}

SymMatrix sym_exp(const SymMatrix& m) {
  return sym_eig(m).apply([](double l) { return std::exp(l); });
}

SymMatrix sym_log(const EigenDecomposition& d) {
  if (d.n() == 0) return SymMatrix::zero(0);
  const double threshold = pd_threshold(d.lambda(d.n() - 1));
  // ascending order: the first offending eigenvalue is the smallest
  if (!(d.lambda(0) > threshold)) throw NotPositiveDefiniteError(0, d.lambda(0), threshold);
  return d.apply([](double l) { return std::log(l); });
}

SymMatrix sym_log(const SymMatrix& m) { return sym_log(sym_eig(m)); }

CorrelationMatrix validate_correlation(const SymMatrix& m, double tol) {
  const Index n = m.n();
  std::vector<Violation> bad;
  for (Index i = 0; i < n; ++i) {
    if (!(std::abs(m(i, i) - 1.0) <= tol)) {
      bad.push_back({ViolationKind::Diagonal, static_cast<std::size_t>(i),
                     static_cast<std::size_t>(i), m(i, i)});
    }
  }
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      if (!(std::abs(m(i, j)) < 1.0)) {
        bad.push_back({ViolationKind::Range, static_cast<std::size_t>(i),
                       static_cast<std::size_t>(j), m(i, j)});
      }
    }
  }
  double lambda_min = 1.0;
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
      throw EigenSolverError("symmetric eigensolver failed during validation");
    }
    lambda_min = solver.eigenvalues()(0);
    if (!(lambda_min > pd_threshold(solver.eigenvalues()(n - 1)))) {
      bad.push_back({ViolationKind::Definiteness, 0, 0, lambda_min});
    }
  }
  if (!bad.empty()) throw ValidationError(std::move(bad), lambda_min);
  return CorrelationMatrix(m, lambda_min);
}

}  // namespace corrlog
