#include "corrlog/experiments.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "corrlog/asymptotics.hpp"
#include "corrlog/csv.hpp"
#include "corrlog/gamma_transform.hpp"
#include "corrlog/jacobians.hpp"
#include "corrlog/parallel.hpp"
#include "corrlog/random.hpp"
#include "corrlog/structures.hpp"

namespace corrlog {

namespace {

using csv::format_double;

// Display scales are powers of ten, so six significant digits are exact.
std::string short_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

std::string fixed3(double x) {
  if (std::abs(x) < 5e-4) x = 0.0;  // no "-0.000"
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", x);
  return buf;
}

// Smallest power of ten that brings the largest entry to at least 0.01.
double display_scale(const Matrix& m) {
  double scale = 1.0;
  const double top = m.cwiseAbs().maxCoeff();
  while (top > 0.0 && top / scale < 0.01) scale /= 10.0;
  return scale;
}

void push_matrix(std::vector<Table1Entry>& out, double rho, const std::string& name,
                 const Matrix& m, bool rescale) {
  const double scale = rescale ? display_scale(m) : 1.0;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j <= i; ++j) {
      out.push_back({rho, name, static_cast<int>(i + 1), static_cast<int>(j + 1), scale, m(i, j)});
    }
  }
}

void mean_sd(const std::vector<int>& xs, double& mean, double& sd) {
  double sum = 0.0;
  int count = 0;
  for (int x : xs) {
    if (x < 0) continue;
    sum += x;
    ++count;
  }
  if (count == 0) {
    mean = sd = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  mean = sum / count;
  double ss = 0.0;
  for (int x : xs) {
    if (x >= 0) ss += (x - mean) * (x - mean);
  }
  sd = count > 1 ? std::sqrt(ss / (count - 1)) : 0.0;
}

}  // namespace

std::vector<Table1Entry> table1(const std::vector<double>& rhos) {
  std::vector<Table1Entry> out;
  for (double rho : rhos) {
    const CorrelationMatrix c = make_toeplitz(rho, 3);
    const OmegaMatrix omega = omega_normal_iid(c);
    const Matrix og = omega_gamma(omega, c);
    push_matrix(out, rho, "avar_rho", omega_rho(omega), true);
    push_matrix(out, rho, "avar_phi", omega_phi(omega, c), false);
    push_matrix(out, rho, "avar_gamma", og, false);
    push_matrix(out, rho, "acorr_gamma", acorr(og), false);
  }
  return out;
}

void write_table1_csv(std::ostream& out, const std::vector<Table1Entry>& rows) {
  out << "rho,quantity,row,col,scale,value,exact\n";
  for (const auto& r : rows) {
    out << short_number(r.rho) << ',' << r.quantity << ',' << r.row << ',' << r.col << ','
        << short_number(r.scale) << ',' << fixed3(r.displayed()) << ','
        << format_double(r.exact) << '\n';
  }
}

std::vector<Fig1Cell> run_fig1(const Fig1Config& cfg) {
  if (cfg.trials < 2) throw DomainError("fig1 needs at least 2 trials");
  if (!(cfg.scale > 0.0)) throw DomainError("fig1 start scale must be positive");
  std::vector<Fig1Cell> cells;
  for (Index n : cfg.ns) {
    for (std::size_t r = 0; r < cfg.rhos.size(); ++r) {
      Fig1Cell cell;
      cell.n = n;
      cell.rho = cfg.rhos[r];
      cell.iterations.assign(static_cast<std::size_t>(cfg.trials), -1);

      const GammaVector gamma = gamma_of_corr(make_toeplitz(cell.rho, n));
      SolverOptions base;
      base.delta = cfg.delta;
      base.max_iter = cfg.max_iter;
      const std::uint64_t stream_base =
          (static_cast<std::uint64_t>(n) << 40) | (static_cast<std::uint64_t>(r) << 32);

      parallel_for(static_cast<std::size_t>(cfg.trials), cfg.threads, [&](std::size_t t) {
        Philox4x32 rng(cfg.seed, stream_base | t);
        Vector x0(n);
        for (Index i = 0; i < n; ++i) x0(i) = -cfg.scale * std::abs(standard_normal(rng));
        SolverOptions opts = base;
        opts.x0 = std::move(x0);
        try {
          cell.iterations[t] = corr_of_gamma(gamma, opts).report.iterations;
        } catch (const NonConvergenceError&) {
          cell.iterations[t] = -1;
        }
      });

      for (int it : cell.iterations) cell.failed += it < 0 ? 1 : 0;
      mean_sd(cell.iterations, cell.mean_iters, cell.sd_iters);
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

void write_fig1_csv(std::ostream& out, const std::vector<Fig1Cell>& cells) {
  out << "n,rho,mean_iters,sd_iters,failed\n";
  for (const auto& c : cells) {
    out << c.n << ',' << format_double(c.rho) << ',' << format_double(c.mean_iters) << ','
        << format_double(c.sd_iters) << ',' << c.failed << '\n';
  }
}

double default_fig2_bound(Index n) {
  switch (n) {
    case 5: return 1.2;
    case 10: return 0.8;
    case 25: return 0.5;
    default: return 2.5 / std::sqrt(static_cast<double>(n));
  }
}

std::vector<Fig2Row> run_fig2(const Fig2Config& cfg) {
  if (cfg.count < 1) throw DomainError("fig2 needs count >= 1");
  if (!cfg.bounds.empty() && cfg.bounds.size() != cfg.ns.size()) {
    throw DimensionError("fig2 needs one bound per dimension");
  }
  std::vector<Fig2Row> rows;
  for (std::size_t k = 0; k < cfg.ns.size(); ++k) {
    const Index n = cfg.ns[k];
    if (n < 2) throw DimensionError("fig2 dimensions must be >= 2");
    const double b = cfg.bounds.empty() ? default_fig2_bound(n) : cfg.bounds[k];
    if (!(b >= 0.0)) throw DomainError("fig2 bound must be non-negative");
    SolverOptions opts;
    opts.delta = cfg.delta;
    opts.max_iter = cfg.max_iter;

    std::vector<Fig2Row> block(static_cast<std::size_t>(cfg.count));
    parallel_for(block.size(), cfg.threads, [&](std::size_t i) {
      Philox4x32 rng(cfg.seed, (static_cast<std::uint64_t>(n) << 32) | i);
      const GammaVector gamma(random_gamma(n, b, rng));
      Fig2Row& row = block[i];
      row.n = n;
      row.index = static_cast<int>(i);
      row.gamma_max = gamma.size() == 0 ? 0.0 : gamma.values().cwiseAbs().maxCoeff();
      Vector x;
      try {
        CorrelationSolve s = corr_of_gamma(gamma, opts);
        row.iterations = s.report.iterations;
        row.converged = true;
        x = std::move(s.report.x_star);
      } catch (const NonConvergenceError& e) {
        row.iterations = e.report().iterations;
        x = e.report().x_star;
      }
      const ContractionDiagnostics d = jacobian_J(gamma, x).diagnostics;
      row.nu_max = d.nu_max;
      row.c_l = d.lipschitz_c;
      row.lambda_min = d.lambda_min_C;
    });
    rows.insert(rows.end(), block.begin(), block.end());
  }
  return rows;
}

void write_fig2_csv(std::ostream& out, const std::vector<Fig2Row>& rows) {
  out << "n,index,iterations,converged,nu_max,c_l,lambda_min,gamma_max\n";
  for (const auto& r : rows) {
    out << r.n << ',' << r.index << ',' << r.iterations << ',' << (r.converged ? 1 : 0) << ','
        << format_double(r.nu_max) << ',' << format_double(r.c_l) << ','
        << format_double(r.lambda_min) << ',' << format_double(r.gamma_max) << '\n';
  }
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size() || a.empty()) throw DimensionError("pearson needs equal non-empty inputs");
  const auto n = static_cast<double>(a.size());
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa == 0.0 || sbb == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return sab / std::sqrt(saa * sbb);
}

LinearFit ols(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw DimensionError("ols needs >= 2 paired points");
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("ols needs x with non-zero variance");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

}  // namespace corrlog
