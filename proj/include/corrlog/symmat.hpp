#pragma once

// Dense symmetric-matrix kernel: storage, vecl/unvecl, eigendecomposition,
// matrix exponential and logarithm, correlation-matrix validation.
//
// vecl ordering is column-major over the strict lower triangle:
//   (1,0), (2,0), ..., (n-1,0), (2,1), ..., (n-1,n-2)   (0-based)
// Every module in the library shares this convention.

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <utility>

#include "corrlog/error.hpp"

namespace corrlog {

using Index = Eigen::Index;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Dense real symmetric matrix. The lower triangle and diagonal are
/// authoritative; the upper triangle is always a mirror of the lower one.
class SymMatrix {
 public:
  SymMatrix() = default;

  /// Takes the lower triangle of `m` and mirrors it. Throws DimensionError
  /// for non-square input and ValidationError (NonFinite) for NaN/Inf.
  explicit SymMatrix(Matrix m);

  /// Like the constructor, but first checks |m(i,j) - m(j,i)| <= tol and
  /// reports a Symmetry violation otherwise.
  static SymMatrix from_full(const Matrix& m, double tol);

  static SymMatrix identity(Index n);
  static SymMatrix zero(Index n);
  static SymMatrix diagonal(const Vector& d);

  Index n() const noexcept { return m_.rows(); }
  double operator()(Index i, Index j) const { return m_(i, j); }
  const Matrix& matrix() const noexcept { return m_; }
  Vector diagonal() const { return m_.diagonal(); }

 private:
  Matrix m_;
};

/// A validated non-singular correlation matrix. Only validate_correlation
/// (and library code that has proven the invariants) can construct one.
class CorrelationMatrix {
 public:
  Index n() const noexcept { return sym_.n(); }
  double operator()(Index i, Index j) const { return sym_(i, j); }
  const SymMatrix& sym() const noexcept { return sym_; }
  const Matrix& matrix() const noexcept { return sym_.matrix(); }
  double lambda_min() const noexcept { return lambda_min_; }

 private:
  CorrelationMatrix(SymMatrix s, double lambda_min) : sym_(std::move(s)), lambda_min_(lambda_min) {}
  friend CorrelationMatrix validate_correlation(const SymMatrix& m, double tol);

  SymMatrix sym_;
  double lambda_min_ = 0.0;
};

/// M = Q diag(lambda) Q', eigenvalues ascending, Q orthonormal.
struct EigenDecomposition {
  Matrix Q;
  Vector lambda;

  Index n() const noexcept { return lambda.size(); }
  /// Q diag(f(lambda)) Q', re-symmetrized.
  template <typename F>
  SymMatrix apply(F&& f) const {
    Vector fl = lambda.unaryExpr(std::forward<F>(f));
    Matrix out = Q * fl.asDiagonal() * Q.transpose();
    return SymMatrix(0.5 * (out + out.transpose()));
  }
};

/// Vector of strict-lower-triangle entries of an n x n matrix.
class VeclVector {
 public:
  VeclVector() = default;
  /// Throws DimensionError unless values.size() is a triangular number.
  explicit VeclVector(Vector values);

  /// The n for which n(n-1)/2 == d, if any.
  static std::optional<Index> dim_for_length(Index d) noexcept;
  static VeclVector zero(Index n);

  Index dim() const noexcept { return n_; }
  Index size() const noexcept { return values_.size(); }
  double operator[](Index k) const { return values_(k); }
  const Vector& values() const noexcept { return values_; }

 private:
  Vector values_{Vector::Zero(0)};
  Index n_ = 1;
};

/// Position of (row, col), row > col, in the vecl ordering.
inline Index vecl_index(Index row, Index col, Index n) noexcept {
  return col * n - col * (col + 1) / 2 + (row - col - 1);
}

/// Inverse of vecl_index: (row, col) with row > col.
std::pair<Index, Index> vecl_position(Index k, Index n);

/// Position of (row, col) in column-major vec of an n x n matrix.
inline Index vec_index(Index row, Index col, Index n) noexcept { return col * n + row; }

VeclVector vecl(const SymMatrix& m);
VeclVector vecl(const CorrelationMatrix& c);

/// Symmetric matrix with strict triangles from v and diagonal from diag.
/// This is the A[x] operator.
SymMatrix unvecl(const VeclVector& v, const Vector& diag);

/// Threshold below which an eigenvalue counts as singular:
/// 1e-12 * max(1, lambda_max).
double pd_threshold(double lambda_max) noexcept;

EigenDecomposition sym_eig(const SymMatrix& m);
SymMatrix sym_exp(const SymMatrix& m);
SymMatrix sym_log(const SymMatrix& m);
/// log of a decomposed SPD matrix; throws NotPositiveDefiniteError.
SymMatrix sym_log(const EigenDecomposition& d);

/// Checks unit diagonal (|diag-1| <= tol), off-diagonal range (-1,1) and
/// lambda_min > pd_threshold. All violations are collected in one
/// ValidationError.
CorrelationMatrix validate_correlation(const SymMatrix& m, double tol);

}  // namespace corrlog
