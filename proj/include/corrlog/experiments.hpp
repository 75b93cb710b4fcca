#pragma once

// Numerical experiments behind the corrlog CLI: asymptotic covariance table
// for 3 x 3 Toeplitz matrices, iteration counts from random starting values
// (fig1) and from random gamma vectors (fig2). Every writer produces the
// same bytes for the same configuration.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "corrlog/symmat.hpp"

namespace corrlog {

// ---- table1 -------------------------------------------------------------

struct Table1Entry {
  double rho = 0.0;
  /// avar_rho, avar_phi, avar_gamma or acorr_gamma.
  std::string quantity;
  /// 1-based position in the 3 x 3 matrix over (rho_21, rho_31, rho_32); row >= col.
  int row = 0;
  int col = 0;
  /// Displayed value = exact / scale.
  double scale = 1.0;
  double exact = 0.0;

  double displayed() const { return exact / scale; }
};

inline const std::vector<double> kTable1Rhos{0.0, 0.5, 0.9, 0.99};

/// Closed-form Gaussian Omega for C_ij = rho^|i-j|, n = 3.
std::vector<Table1Entry> table1(const std::vector<double>& rhos = kTable1Rhos);

/// Columns: rho,quantity,row,col,scale,value,exact. value has 3 decimals.
void write_table1_csv(std::ostream& out, const std::vector<Table1Entry>& rows);

// ---- fig1 ---------------------------------------------------------------

struct Fig1Config {
  std::vector<Index> ns;
  std::vector<double> rhos{0.5, 0.9, 0.99};
  int trials = 100;
  /// Starting values x0_i = -|N(0, scale^2)|.
  double scale = 10.0;
  int max_iter = 500;
  /// Defaults to 1e-8 sqrt(n).
  std::optional<double> delta;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

struct Fig1Cell {
  Index n = 0;
  double rho = 0.0;
  /// One entry per trial; -1 marks a trial that hit max_iter.
  std::vector<int> iterations;
  /// Over converged trials only.
  double mean_iters = 0.0;
  double sd_iters = 0.0;
  int failed = 0;
};

/// Cells ordered by (n, rho) in the order given. RNG stream of a trial is a
/// function of (n, rho position, trial) only.
std::vector<Fig1Cell> run_fig1(const Fig1Config& cfg);

/// Columns: n,rho,mean_iters,sd_iters,failed.
void write_fig1_csv(std::ostream& out, const std::vector<Fig1Cell>& cells);

// ---- fig2 ---------------------------------------------------------------

struct Fig2Config {
  std::vector<Index> ns{5, 10, 25};
  int count = 2000;
  /// Per-n bounds; when unset, default_fig2_bound(n).
  std::vector<double> bounds;
  int max_iter = 500;
  std::optional<double> delta;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

/// 1.2, 0.8 and 0.5 for n = 5, 10, 25; 2.5 / sqrt(n) otherwise.
double default_fig2_bound(Index n);

struct Fig2Row {
  Index n = 0;
  int index = 0;
  int iterations = 0;
  bool converged = false;
  double nu_max = 0.0;
  double c_l = 0.0;
  double lambda_min = 0.0;
  double gamma_max = 0.0;
};

/// Random gamma with i.i.d. U[-b_n, b_n] entries, solved from x0 = 0;
/// contraction diagnostics at the final iterate.
std::vector<Fig2Row> run_fig2(const Fig2Config& cfg);

/// Columns: n,index,iterations,converged,nu_max,c_l,lambda_min,gamma_max.
void write_fig2_csv(std::ostream& out, const std::vector<Fig2Row>& rows);

/// Pearson correlation; NaN when either input has zero variance.
double pearson(const std::vector<double>& a, const std::vector<double>& b);

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares of y on x.
LinearFit ols(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace corrlog
