#pragma once

// Structured correlation matrices (equicorrelation, block equicorrelation,
// Toeplitz) and numerical checks on the structure of log C.

#include <string>
#include <vector>

#include "corrlog/symmat.hpp"

namespace corrlog {

/// Off-diagonal value of log C for the n x n equicorrelation matrix:
/// log(1 + n rho / (1 - rho)) / n. DomainError unless rho in (-1/(n-1), 1).
double equi_gamma(double rho, Index n);

/// Inverse of equi_gamma: (1 - e^{-n g}) / (1 + (n-1) e^{-n g}).
double equi_rho(double gamma_c, Index n);

/// (1 - rho) I + rho 11'.
CorrelationMatrix make_equicorrelation(double rho, Index n);

/// C_ij = rho^|i-j|.
CorrelationMatrix make_toeplitz(double rho, Index n);

struct BlockPartition {
  std::vector<Index> sizes;
  /// K x K: diagonal holds within-block correlations, off-diagonal the
  /// between-block ones. Only the lower triangle is read.
  Matrix block_corr;

  Index n() const;
  /// Block index of every row, length n().
  std::vector<Index> labels() const;
};

/// Throws DimensionError for empty or zero-sized blocks and ValidationError
/// when the result is not a correlation matrix.
CorrelationMatrix make_block(const BlockPartition& p);

/// Reads a block description: first line holds the block sizes, the
/// following K lines the K x K block correlation matrix (comma separated).
BlockPartition read_block_partition(const std::string& text);
BlockPartition read_block_partition_file(const std::string& path);

struct StructureReport {
  bool pass = false;
  double tolerance = 0.0;
  double max_deviation = 0.0;
  /// Entry at which max_deviation occurs (-1 when the matrix is empty).
  Index row = -1;
  Index col = -1;
  /// Region averages for the block check: K x K off-diagonal values
  /// (diagonal of this matrix = within-block) and one diagonal value per block.
  Matrix region_offdiag;
  Vector region_diag;
};

inline constexpr double kStructureTolerance = 1e-9;

/// Checks that log C is constant on every within-block off-diagonal region,
/// every between-block region and the diagonal of every block.
/// Region values are estimated by averaging.
StructureReport check_block_preservation(const CorrelationMatrix& c, const BlockPartition& p,
                                         double tol = kStructureTolerance);

/// M_ij == M_{n-1-j, n-1-i} for all i, j.
StructureReport check_bisymmetry(const SymMatrix& m, double tol = kStructureTolerance);

}  // namespace corrlog
