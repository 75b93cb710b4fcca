#pragma once

// Reference implementations used only by the tests. None of them touches an
// eigensolver, so they check the library along a separate route.

#include <Eigen/Dense>

#include <cmath>
#include <functional>

namespace oracle {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Taylor series with scaling and squaring.
inline Matrix expm(const Matrix& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int s = 0;
  if (norm > 0.25) s = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  const Matrix x = a / std::ldexp(1.0, s);
  const Index n = a.rows();
  Matrix term = Matrix::Identity(n, n);
  Matrix sum = term;
  for (int k = 1; k <= 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int i = 0; i < s; ++i) sum = sum * sum;
  return sum;
}

// Denman-Beavers square root.
inline Matrix sqrtm(const Matrix& a) {
  Matrix y = a;
  Matrix z = Matrix::Identity(a.rows(), a.cols());
  for (int k = 0; k < 100; ++k) {
    const Matrix y_next = 0.5 * (y + z.inverse());
    const Matrix z_next = 0.5 * (z + y.inverse());
    const double change = (y_next - y).norm();
    y = y_next;
    z = z_next;
    if (change <= 1e-15 * y.norm()) break;
  }
  return y;
}

// Inverse scaling and squaring: square roots until close to I, then the
// series for atanh: log(A) = 2 atanh((A - I)(A + I)^{-1}).
inline Matrix logm(const Matrix& a) {
  const Index n = a.rows();
  const Matrix eye = Matrix::Identity(n, n);
  Matrix r = a;
  int s = 0;
  while ((r - eye).norm() > 0.05 && s < 60) {
    r = sqrtm(r);
    ++s;
  }
  const Matrix z = (r - eye) * (r + eye).inverse();
  const Matrix z2 = z * z;
  Matrix power = z;
  Matrix sum = z;
  for (int k = 1; k <= 25; ++k) {
    power = power * z2;
    sum += power / static_cast<double>(2 * k + 1);
  }
  Matrix out = std::ldexp(2.0, s) * sum;
  return 0.5 * (out + out.transpose());
}

// d f / d x by central differences, column per coordinate.
inline Matrix central_difference(const std::function<Vector(const Vector&)>& f, const Vector& x,
                                 double h) {
  const Vector f0 = f(x);
  Matrix jac(f0.size(), x.size());
  for (Index j = 0; j < x.size(); ++j) {
    Vector up = x, down = x;
    up(j) += h;
    down(j) -= h;
    jac.col(j) = (f(up) - f(down)) / (2.0 * h);
  }
  return jac;
}

// Strict lower triangle, column-major, written out longhand.
inline Vector lower_entries(const Matrix& m) {
  const Index n = m.rows();
  Vector out(n * (n - 1) / 2);
  Index k = 0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) out(k++) = m(i, j);
  }
  return out;
}

// Asymptotic covariance of the sample correlations (strict lower triangle,
// column-major) for i.i.d. N(0, C): Isserlis covariance of the sample
// covariances, pushed through the gradient of s_ij / sqrt(s_ii s_jj) at S = C.
inline Matrix gaussian_correlation_avar(const Matrix& c) {
  const Index n = c.rows();
  auto pos = [n](Index i, Index j) { return j * n + i; };
  Matrix gamma(n * n, n * n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i)
      for (Index l = 0; l < n; ++l)
        for (Index k = 0; k < n; ++k)
          gamma(pos(i, j), pos(k, l)) = c(i, k) * c(j, l) + c(i, l) * c(j, k);

  const Index d = n * (n - 1) / 2;
  Matrix grad = Matrix::Zero(d, n * n);
  Index row = 0;
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      grad(row, pos(i, j)) = 1.0;
      grad(row, pos(i, i)) = -0.5 * c(i, j);
      grad(row, pos(j, j)) = -0.5 * c(i, j);
      ++row;
    }
  }
  return grad * gamma * grad.transpose();
}

// d vecl(log C) / d vecl(C) by central differences on logm.
inline Matrix dgamma_drho(const Matrix& c, double h = 1e-6) {
  const Index n = c.rows();
  const Vector rho = lower_entries(c);
  auto f = [n](const Vector& r) {
    Matrix m = Matrix::Identity(n, n);
    Index k = 0;
    for (Index j = 0; j < n; ++j) {
      for (Index i = j + 1; i < n; ++i) {
        m(i, j) = r(k);
        m(j, i) = r(k);
        ++k;
      }
    }
    return Vector(lower_entries(logm(m)));
  };
  return central_difference(f, rho, h);
}

}  // namespace oracle
