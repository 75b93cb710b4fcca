#pragma once

// Plain-text matrix and vector files.
//
// Matrix: one row per line, comma-separated decimal literals, no header,
// dimension inferred from the data. Vector: one value per line.
// Blank lines are ignored. Values are written with 17 significant digits
// so a write/read cycle is exact.

#include <iosfwd>
#include <string>

#include "corrlog/symmat.hpp"

namespace corrlog::csv {

Matrix read_matrix(std::istream& in);
Matrix read_matrix_file(const std::string& path);
Vector read_vector(std::istream& in);
Vector read_vector_file(const std::string& path);

void write_matrix(std::ostream& out, const Matrix& m);
void write_matrix_file(const std::string& path, const Matrix& m);
void write_vector(std::ostream& out, const Vector& v);
void write_vector_file(const std::string& path, const Vector& v);

/// Shortest round-trip decimal representation ("%.17g").
std::string format_double(double x);

}  // namespace corrlog::csv
