#include "corrlog/structures.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "corrlog/csv.hpp"

namespace corrlog {

namespace {

constexpr double kBuildTol = 1e-12;

void require_dim(Index n) {
  if (n < 2) throw DimensionError("structured matrices need n >= 2, got " + std::to_string(n));
}

}  // namespace

double equi_gamma(double rho, Index n) {
  require_dim(n);
  const double lower = -1.0 / static_cast<double>(n - 1);
  if (!(rho > lower && rho < 1.0)) {
    std::ostringstream msg;
    msg << "equicorrelation rho=" << rho << " outside (" << lower << ", 1) for n=" << n;
    throw DomainError(msg.str());
  }
  const double nd = static_cast<double>(n);
  return std::log1p(nd * rho / (1.0 - rho)) / nd;
}

double equi_rho(double gamma_c, Index n) {
  require_dim(n);
  if (!std::isfinite(gamma_c)) throw DomainError("equi_rho needs a finite gamma");
  const double nd = static_cast<double>(n);
  if (gamma_c >= 0.0) {
    const double e = std::exp(-nd * gamma_c);
    return -std::expm1(-nd * gamma_c) / (1.0 + (nd - 1.0) * e);
  }
  return std::expm1(nd * gamma_c) / (std::exp(nd * gamma_c) + nd - 1.0);
}

CorrelationMatrix make_equicorrelation(double rho, Index n) {
  require_dim(n);
  Matrix c = Matrix::Constant(n, n, rho);
  c.diagonal().setOnes();
  return validate_correlation(SymMatrix(std::move(c)), kBuildTol);
}

CorrelationMatrix make_toeplitz(double rho, Index n) {
  require_dim(n);
  Matrix c(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) c(i, j) = std::pow(rho, static_cast<double>(std::abs(i - j)));
  }
  return validate_correlation(SymMatrix(std::move(c)), kBuildTol);
}

Index BlockPartition::n() const {
  Index total = 0;
  for (Index s : sizes) total += s;
  return total;
}

std::vector<Index> BlockPartition::labels() const {
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(n()));
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    for (Index i = 0; i < sizes[k]; ++i) out.push_back(static_cast<Index>(k));
  }
  return out;
}

namespace {

void check_partition(const BlockPartition& p) {
  const auto k = static_cast<Index>(p.sizes.size());
  if (k == 0) throw DimensionError("block partition has no blocks");
  for (Index s : p.sizes) {
    if (s < 1) throw DimensionError("block sizes must be >= 1, got " + std::to_string(s));
  }
  if (p.block_corr.rows() != k || p.block_corr.cols() != k) {
    throw DimensionError("block correlation matrix must be " + std::to_string(k) + " x " +
                         std::to_string(k));
  }
}

double block_value(const BlockPartition& p, Index a, Index b) {
  return a >= b ? p.block_corr(a, b) : p.block_corr(b, a);
}

}  // namespace

CorrelationMatrix make_block(const BlockPartition& p) {
  check_partition(p);
  const auto lab = p.labels();
  const Index n = p.n();
  Matrix c(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      c(i, j) = i == j ? 1.0 : block_value(p, lab[i], lab[j]);
    }
  }
  return validate_correlation(SymMatrix(std::move(c)), kBuildTol);
}

BlockPartition read_block_partition(const std::string& text) {
  std::istringstream in(text);
  const Matrix m = csv::read_matrix(in);
  const Index k = m.cols();
  if (m.rows() != k + 1) {
    throw ParseError("block file needs a size line followed by " + std::to_string(k) +
                         " correlation lines, found " + std::to_string(m.rows() - 1),
                     static_cast<std::size_t>(m.rows()), 0);
  }
  BlockPartition p;
  for (Index b = 0; b < k; ++b) {
    const double s = m(0, b);
    if (s < 1.0 || s != std::floor(s)) {
      throw ParseError("block size must be a positive integer", 1, static_cast<std::size_t>(b + 1));
    }
    p.sizes.push_back(static_cast<Index>(s));
  }
  p.block_corr = m.bottomRows(k);
  return p;
}

BlockPartition read_block_partition_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path, 0, 0);
  std::ostringstream buf;
  buf << in.rdbuf();
  return read_block_partition(buf.str());
}

StructureReport check_block_preservation(const CorrelationMatrix& c, const BlockPartition& p,
                                         double tol) {
  check_partition(p);
  const Index n = c.n();
  if (p.n() != n) throw DimensionError("partition size does not match C");
  const Matrix logc = sym_log(c.sym()).matrix();
  const auto lab = p.labels();
  const auto k = static_cast<Index>(p.sizes.size());

  Matrix off_sum = Matrix::Zero(k, k);
  Matrix off_count = Matrix::Zero(k, k);
  Vector diag_sum = Vector::Zero(k);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      if (i == j) {
        diag_sum(lab[i]) += logc(i, i);
      } else {
        off_sum(lab[i], lab[j]) += logc(i, j);
        off_count(lab[i], lab[j]) += 1.0;
      }
    }
  }

  StructureReport r;
  r.tolerance = tol;
  r.region_offdiag = Matrix::Constant(k, k, std::nan(""));
  r.region_diag.resize(k);
  for (Index a = 0; a < k; ++a) {
    r.region_diag(a) = diag_sum(a) / static_cast<double>(p.sizes[a]);
    for (Index b = 0; b < k; ++b) {
      if (off_count(a, b) > 0) r.region_offdiag(a, b) = off_sum(a, b) / off_count(a, b);
    }
  }
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double target = i == j ? r.region_diag(lab[i]) : r.region_offdiag(lab[i], lab[j]);
      const double dev = std::abs(logc(i, j) - target);
      if (r.row < 0 || dev > r.max_deviation) {
        r.max_deviation = dev;
        r.row = i;
        r.col = j;
      }
    }
  }
  r.pass = r.max_deviation <= tol;
  return r;
}

StructureReport check_bisymmetry(const SymMatrix& m, double tol) {
  const Index n = m.n();
  StructureReport r;
  r.tolerance = tol;
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double dev = std::abs(m(i, j) - m(n - 1 - j, n - 1 - i));
      if (r.row < 0 || dev > r.max_deviation) {
        r.max_deviation = dev;
        r.row = i;
        r.col = j;
      }
    }
  }
  r.pass = r.max_deviation <= tol;
  return r;
}

}  // namespace corrlog
