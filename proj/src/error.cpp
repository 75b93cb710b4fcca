#include "corrlog/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace corrlog {

NotPositiveDefiniteError::NotPositiveDefiniteError(std::size_t index, double eigenvalue,
                                                   double threshold)
    : Error([&] {
        std::ostringstream os;
        os << "matrix is not positive definite: eigenvalue " << index << " = " << eigenvalue
           << " is not above " << threshold;
        return os.str();
      }()),
      index_(index),
      eigenvalue_(eigenvalue),
      threshold_(threshold) {}

const char* to_string(ViolationKind kind) noexcept {
  switch (kind) {
    case ViolationKind::NonFinite:
      return "non-finite";
    case ViolationKind::Symmetry:
      return "symmetry";
    case ViolationKind::Diagonal:
      return "diagonal";
    case ViolationKind::Range:
      return "range";
    case ViolationKind::Definiteness:
      return "definiteness";
  }
  return "unknown";
}

namespace {

std::string describe(const std::vector<Violation>& violations, double lambda_min) {
  std::ostringstream os;
  os << "validation failed:";
  for (const auto& v : violations) {
    os << ' ' << to_string(v.kind);
    if (v.kind == ViolationKind::Definiteness) {
      os << " (lambda_min=" << v.value << ')';
    } else {
      os << " at (" << v.row + 1 << ',' << v.col + 1 << ")=" << v.value;
    }
    os << ';';
  }
  if (!std::isnan(lambda_min)) os << " lambda_min=" << lambda_min;
  return os.str();
}

}  // namespace

ValidationError::ValidationError(std::vector<Violation> violations, double lambda_min)
    : Error(describe(violations, lambda_min)),
      violations_(std::move(violations)),
      lambda_min_(lambda_min) {}

bool ValidationError::has(ViolationKind kind) const noexcept {
  return std::any_of(violations_.begin(), violations_.end(),
                     [kind](const Violation& v) { return v.kind == kind; });
}

ParseError::ParseError(const std::string& what, std::size_t line, std::size_t column)
    : Error(what), line_(line), column_(column) {}

}  // namespace corrlog
