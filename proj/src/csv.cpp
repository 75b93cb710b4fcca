#include "corrlog/csv.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace corrlog::csv {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_number(const std::string& field, std::size_t line, std::size_t column) {
  const std::string text = trim(field);
  if (text.empty()) throw ParseError("empty field", line, column);
  char* end = nullptr;
  errno = 0;
  const double value = std::strtod(text.c_str(), &end);
  if (end != text.c_str() + text.size() || errno == ERANGE) {
    throw ParseError("cannot parse '" + text + "' as a number", line, column);
  }
  if (!std::isfinite(value)) throw ParseError("non-finite value '" + text + "'", line, column);
  return value;
}

std::string where(std::size_t line, std::size_t column) {
  return " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")";
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "' for reading", 0, 0);
  return in;
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Matrix read_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (trim(raw).empty()) continue;
    std::vector<double> row;
    std::size_t start = 0;
    std::size_t column = 1;
    while (true) {
      const auto comma = raw.find(',', start);
      const std::string field = raw.substr(start, comma == std::string::npos ? std::string::npos
                                                                                : comma - start);
      try {
        row.push_back(parse_number(field, line, column));
      } catch (const ParseError& e) {
        throw ParseError(std::string(e.what()) + where(line, column), line, column);
      }
      if (comma == std::string::npos) break;
      start = comma + 1;
      ++column;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError("row has " + std::to_string(row.size()) + " columns, expected " +
                           std::to_string(rows.front().size()) + where(line, row.size()),
                       line, row.size());
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("matrix file is empty", 0, 0);
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    }
  }
  return m;
}

Matrix read_matrix_file(const std::string& path) {
  auto in = open_in(path);
  return read_matrix(in);
}

Vector read_vector(std::istream& in) {
  std::vector<double> values;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (trim(raw).empty()) continue;
    if (raw.find(',') != std::string::npos) {
      throw ParseError("vector files hold one value per line" + where(line, 2), line, 2);
    }
    try {
      values.push_back(parse_number(raw, line, 1));
    } catch (const ParseError& e) {
      throw ParseError(std::string(e.what()) + where(line, 1), line, 1);
    }
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
}

Vector read_vector_file(const std::string& path) {
  auto in = open_in(path);
  return read_vector(in);
}

void write_matrix(std::ostream& out, const Matrix& m) {
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << format_double(m(i, j));
    }
    out << '\n';
  }
}

void write_matrix_file(const std::string& path, const Matrix& m) {
  auto out = open_out(path);
  write_matrix(out, m);
}

void write_vector(std::ostream& out, const Vector& v) {
  for (Index i = 0; i < v.size(); ++i) out << format_double(v(i)) << '\n';
}

void write_vector_file(const std::string& path, const Vector& v) {
  auto out = open_out(path);
  write_vector(out, v);
}

}  // namespace corrlog::csv
