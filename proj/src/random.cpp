#include "corrlog/random.hpp"

#include <cmath>
#include <numbers>

namespace corrlog {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

Philox4x32::Philox4x32(std::uint64_t seed, std::uint64_t stream) noexcept
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      stream_(stream) {}

Philox4x32::Block Philox4x32::encrypt(Block ctr, Key key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

Philox4x32::result_type Philox4x32::operator()() noexcept {
  if (used_ == 4) {
    buffer_ = encrypt({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                       static_cast<std::uint32_t>(stream_),
                       static_cast<std::uint32_t>(stream_ >> 32)},
                      key_);
    ++block_;
    used_ = 0;
  }
  return buffer_[used_++];
}

double uniform01(Philox4x32& rng) noexcept {
  const std::uint64_t hi = rng() >> 5;  // 27 bits
  const std::uint64_t lo = rng() >> 6;  // 26 bits
  return static_cast<double>((hi << 26) | lo) * 0x1.0p-53;
}

double standard_normal(Philox4x32& rng) noexcept {
  const double u1 = 1.0 - uniform01(rng);  // (0, 1]
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Vector random_gamma(Index n, double bound, Philox4x32& rng) {
  Vector g(n * (n - 1) / 2);
  for (Index k = 0; k < g.size(); ++k) g(k) = bound * (2.0 * uniform01(rng) - 1.0);
  return g;
}

CorrelationMatrix random_correlation(Index n, Philox4x32& rng, Index extra_dof) {
  Matrix w(n, n + extra_dof);
  for (Index j = 0; j < w.cols(); ++j) {
    for (Index i = 0; i < n; ++i) w(i, j) = standard_normal(rng);
  }
  const Matrix s = w * w.transpose();
  const Vector inv_sd = s.diagonal().array().rsqrt();
  Matrix c = inv_sd.asDiagonal() * s * inv_sd.asDiagonal();
  c.diagonal().setOnes();
  return validate_correlation(SymMatrix(std::move(c)), 1e-12);
}

}  // namespace corrlog
