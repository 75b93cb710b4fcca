// corrlog: transform correlation matrices to gamma = vecl(log C) and back,
// and run the numerical experiments.
//
// Exit codes: 0 success, 2 parse/validation, 3 non-convergence,
// 4 dimension guard, 1 anything else.

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "corrlog/csv.hpp"
#include "corrlog/experiments.hpp"
#include "corrlog/gamma_transform.hpp"
#include "corrlog/jacobians.hpp"
#include "corrlog/random.hpp"
#include "corrlog/structures.hpp"

namespace {

using namespace corrlog;
using json = nlohmann::json;

enum ExitCode { kOk = 0, kFailure = 1, kInvalid = 2, kNoConvergence = 3, kTooLarge = 4 };

struct Options {
  std::string input;
  std::string output;
  std::string report;
  std::string x0 = "zero";
  std::string mode;
  std::optional<double> delta;
  int max_iter = 200;
  std::optional<std::uint64_t> seed;
  Index n = 0;
  Index n_min = 3;
  Index n_max = 100;
  std::vector<double> rhos{0.5, 0.9, 0.99};
  std::vector<Index> dims{5, 10, 25};
  std::vector<double> bounds;
  int trials = 100;
  int count = 2000;
  double scale = 10.0;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

// Writes to the named file, or to stdout when the name is empty or "-".
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw ParseError("cannot open " + path + " for writing", 0, 0);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void finish() {
    stream().flush();
    if (!stream()) throw Error("write failed");
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

void emit_report(const Options& o, const json& record) {
  if (o.report.empty()) {
    std::cerr << record.dump() << '\n';
    return;
  }
  std::ofstream out(o.report, std::ios::app);
  if (!out) throw ParseError("cannot open " + o.report + " for writing", 0, 0);
  out << record.dump() << '\n';
}

json report_json(const ConvergenceReport& r, const GammaVector& gamma) {
  const ContractionDiagnostics d = jacobian_J(gamma, r.x_star).diagnostics;
  return {{"iterations", r.iterations},   {"final_residual", r.final_residual()},
          {"converged", r.converged},     {"nu_max", d.nu_max},
          {"lambda_min", d.lambda_min_C}, {"delta", r.delta}};
}

double parse_number(const std::string& text, const std::string& what) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) throw ParseError("bad number in " + what + ": '" + text + "'", 0, 0);
  return v;
}

// A matrix file, or one of the generators equi:<rho>, toeplitz:<rho>, block:<file>.
Matrix load_matrix(const Options& o) {
  const auto colon = o.input.find(':');
  if (colon != std::string::npos) {
    const std::string kind = o.input.substr(0, colon);
    const std::string arg = o.input.substr(colon + 1);
    if (kind == "block") return make_block(read_block_partition_file(arg)).matrix();
    if (kind == "equi" || kind == "toeplitz") {
      if (o.n < 2) throw DimensionError("generator " + kind + " needs --n >= 2");
      const double rho = parse_number(arg, o.input);
      return kind == "equi" ? make_equicorrelation(rho, o.n).matrix()
                            : make_toeplitz(rho, o.n).matrix();
    }
  }
  return csv::read_matrix_file(o.input);
}

Vector start_vector(const Options& o, Index n) {
  if (o.x0 == "zero") return Vector::Zero(n);
  const std::string prefix = "half-normal:";
  if (o.x0.rfind(prefix, 0) != 0) {
    throw ParseError("--x0 must be 'zero' or 'half-normal:<scale>'", 0, 0);
  }
  const double scale = parse_number(o.x0.substr(prefix.size()), "--x0");
  if (!(scale > 0.0)) throw DomainError("--x0 scale must be positive");
  if (!o.seed) throw DomainError("--x0 half-normal needs --seed");
  Philox4x32 rng(*o.seed, 0);
  Vector x(n);
  for (Index i = 0; i < n; ++i) x(i) = -scale * std::abs(standard_normal(rng));
  return x;
}

SolverOptions solver_options(const Options& o) {
  SolverOptions s;
  s.delta = o.delta;
  s.max_iter = o.max_iter;
  return s;
}

void cmd_gamma(const Options& o) {
  const CorrelationMatrix c = validate_correlation(SymMatrix::from_full(load_matrix(o), 1e-12), 1e-10);
  const GammaVector g = gamma_of_corr(c);
  Sink sink(o.output);
  csv::write_vector(sink.stream(), g.values());
  sink.finish();
  std::cerr << "n=" << c.n() << " d=" << g.size() << '\n';
}

void cmd_corr(const Options& o) {
  const GammaVector gamma(csv::read_vector_file(o.input));
  SolverOptions s = solver_options(o);
  s.x0 = start_vector(o, gamma.dim());
  try {
    const CorrelationSolve r = corr_of_gamma(gamma, s);
    Sink sink(o.output);
    csv::write_matrix(sink.stream(), r.corr.matrix());
    sink.finish();
    emit_report(o, report_json(r.report, gamma));
  } catch (const NonConvergenceError& e) {
    emit_report(o, report_json(e.report(), gamma));
    throw;
  }
}

void cmd_cov(const Options& o) {
  if (o.mode == "compress") {
    const CovarianceVector v = cov_compress(SymMatrix::from_full(csv::read_matrix_file(o.input), 1e-12));
    Sink sink(o.output);
    csv::write_vector(sink.stream(), v.flatten());
    sink.finish();
    return;
  }
  const CovarianceVector v = CovarianceVector::unflatten(csv::read_vector_file(o.input));
  const SymMatrix sigma = cov_expand(v, solver_options(o));
  Sink sink(o.output);
  csv::write_matrix(sink.stream(), sigma.matrix());
  sink.finish();
}

void cmd_table1(const Options& o) {
  Sink sink(o.output);
  write_table1_csv(sink.stream(), table1());
  sink.finish();
}

void cmd_fig1(const Options& o) {
  if (!o.seed) throw DomainError("fig1 needs --seed");
  if (o.n_min < 2 || o.n_max < o.n_min) throw DomainError("fig1 needs 2 <= n-min <= n-max");
  Fig1Config cfg;
  for (Index n = o.n_min; n <= o.n_max; ++n) cfg.ns.push_back(n);
  cfg.rhos = o.rhos;
  cfg.trials = o.trials;
  cfg.scale = o.scale;
  cfg.max_iter = o.max_iter;
  cfg.delta = o.delta;
  cfg.seed = *o.seed;
  cfg.threads = o.threads;
  const auto cells = run_fig1(cfg);
  Sink sink(o.output);
  write_fig1_csv(sink.stream(), cells);
  sink.finish();
}

void cmd_fig2(const Options& o) {
  if (!o.seed) throw DomainError("fig2 needs --seed");
  Fig2Config cfg;
  cfg.ns = o.dims;
  cfg.count = o.count;
  cfg.bounds = o.bounds;
  cfg.max_iter = o.max_iter;
  cfg.delta = o.delta;
  cfg.seed = *o.seed;
  cfg.threads = o.threads;
  const auto rows = run_fig2(cfg);
  Sink sink(o.output);
  write_fig2_csv(sink.stream(), rows);
  sink.finish();
}

std::string env_name(const std::string& long_name) {
  std::string out = "CORRLOG_";
  for (char ch : long_name) {
    out += ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  }
  return out;
}

void bind_environment(CLI::App& app) {
  for (CLI::Option* opt : app.get_options()) {
    if (opt->get_lnames().empty() || opt->get_lnames().front() == "help") continue;
    opt->envname(env_name(opt->get_lnames().front()));
  }
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Matrix-logarithm parametrization of correlation matrices"};
  app.require_subcommand(1);

  auto add_solver = [&](CLI::App* sub) {
    sub->add_option("--delta", o.delta, "Step threshold (default 1e-8*sqrt(n))")
        ->check(CLI::PositiveNumber);
    sub->add_option("--max-iter", o.max_iter, "Iteration limit")->check(CLI::PositiveNumber);
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("-o,--output", o.output, "Output file (default stdout)");
  };

  auto* gamma = app.add_subcommand("gamma", "Correlation matrix CSV -> gamma vector");
  gamma->add_option("input", o.input, "Matrix file or equi:<rho>, toeplitz:<rho>, block:<file>")
      ->required();
  gamma->add_option("--n", o.n, "Dimension for equi/toeplitz generators");
  add_output(gamma);

  auto* corr = app.add_subcommand("corr", "Gamma vector -> correlation matrix");
  corr->add_option("input", o.input, "Gamma vector file")->required();
  corr->add_option("--x0", o.x0, "Starting diagonal: zero | half-normal:<scale>");
  corr->add_option("--seed", o.seed, "Seed for random starting values");
  corr->add_option("--report", o.report, "Append the JSON report line here (default stderr)");
  add_solver(corr);
  add_output(corr);

  auto* cov = app.add_subcommand("cov", "Covariance matrix <-> (log sd, gamma)");
  cov->add_option("mode", o.mode, "compress | expand")
      ->required()
      ->check(CLI::IsMember({"compress", "expand"}));
  cov->add_option("input", o.input, "Input file")->required();
  add_solver(cov);
  add_output(cov);

  auto* t1 = app.add_subcommand("table1", "Asymptotic covariance table for 3x3 Toeplitz matrices");
  add_output(t1);

  auto* f1 = app.add_subcommand("fig1", "Iteration counts from random starting values");
  f1->add_option("--seed", o.seed, "RNG seed")->required();
  f1->add_option("--n-min", o.n_min, "Smallest dimension");
  f1->add_option("--n-max", o.n_max, "Largest dimension");
  f1->add_option("--rhos", o.rhos, "Toeplitz parameters")->delimiter(',');
  f1->add_option("--trials", o.trials, "Starting values per (n, rho)")->check(CLI::Range(2, 1 << 24));
  f1->add_option("--scale", o.scale, "Half-normal scale of the starting values")
      ->check(CLI::PositiveNumber);
  f1->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  add_solver(f1);
  add_output(f1);

  auto* f2 = app.add_subcommand("fig2", "Iteration counts for random gamma vectors");
  f2->add_option("--seed", o.seed, "RNG seed")->required();
  f2->add_option("--n", o.dims, "Dimensions")->delimiter(',');
  f2->add_option("--count", o.count, "Instances per dimension")->check(CLI::PositiveNumber);
  f2->add_option("--b", o.bounds, "Bound b_n per dimension")->delimiter(',');
  f2->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
  add_solver(f2);
  add_output(f2);

  for (CLI::App* sub : app.get_subcommands({})) bind_environment(*sub);

  // Experiments iterate longer by default than single solves.
  f1->preparse_callback([&](std::size_t) { o.max_iter = 500; });
  f2->preparse_callback([&](std::size_t) { o.max_iter = 500; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    if (*gamma) cmd_gamma(o);
    else if (*corr) cmd_corr(o);
    else if (*cov) cmd_cov(o);
    else if (*t1) cmd_table1(o);
    else if (*f1) cmd_fig1(o);
    else if (*f2) cmd_fig2(o);
    return kOk;
  } catch (const NonConvergenceError& e) {
    std::cerr << "corrlog: " << e.what() << '\n';
    return kNoConvergence;
  } catch (const SizeGuardError& e) {
    std::cerr << "corrlog: " << e.what() << '\n';
    return kTooLarge;
  } catch (const ParseError& e) {
    std::cerr << "corrlog: " << e.what() << '\n';
    return kInvalid;
  } catch (const ValidationError& e) {
    std::cerr << "corrlog: " << e.what() << '\n';
    return kInvalid;
  } catch (const NotPositiveDefiniteError& e) {
    std::cerr << "corrlog: " << e.what() << '\n';
    return kInvalid;
  } catch (const DimensionError& e) {
    std::cerr << "corrlog: " << e.what() << '\n';
    return kInvalid;
  } catch (const DomainError& e) {
    std::cerr << "corrlog: " << e.what() << '\n';
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "corrlog: " << e.what() << '\n';
    return kFailure;
  }
}
