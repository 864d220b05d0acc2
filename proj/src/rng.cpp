#include "levyfock/rng.hpp"

#include <cmath>
#include <numbers>

namespace levyfock::rng {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ull;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ull;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ull;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73Bull;

inline std::uint64_t mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi) {
  const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
  hi = static_cast<std::uint64_t>(prod >> 64);
  return static_cast<std::uint64_t>(prod);
}

}  // namespace

std::array<std::uint64_t, 4> Philox4x64::block(std::array<std::uint64_t, 4> ctr,
                                               std::array<std::uint64_t, 2> k) {
  for (int round = 0; round < 10; ++round) {
    std::uint64_t hi0, hi1;
    const std::uint64_t lo0 = mulhilo(kMul0, ctr[0], hi0);
    const std::uint64_t lo1 = mulhilo(kMul1, ctr[2], hi1);
    ctr = {hi1 ^ ctr[1] ^ k[0], lo1, hi0 ^ ctr[3] ^ k[1], lo0};
    k[0] += kWeyl0;
    k[1] += kWeyl1;
  }
  return ctr;
}

void Philox4x64::refill() {
  // NumPy semantics: the 256-bit little-endian counter is incremented
  // before each block, so the first block after seeding uses counter + 1.
  for (int i = 0; i < 4; ++i)
    if (++counter[i] != 0) break;
  buffer_ = block(counter, key);
  buffered_ = 4;
}

std::uint64_t Philox4x64::next_u64() {
  if (buffered_ == 0) refill();
  return buffer_[4 - buffered_--];
}

double Philox4x64::next_double() {
  return double(next_u64() >> 11) * 0x1.0p-53;
}

double Philox4x64::next_normal() {
  // u1 in (0, 1]: avoids log(0)
  const double u1 = 1.0 - next_double();
  const double u2 = next_double();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Philox4x64::next_poisson(double lambda) {
  std::uint64_t count = 0;
  while (lambda > 0.0) {
    const double chunk = std::min(lambda, 30.0);
    const double limit = std::exp(-chunk);
    double prod = 1.0;
    std::uint64_t k = 0;
    do {
      prod *= next_double();
      ++k;
    } while (prod > limit);
    count += k - 1;
    lambda -= chunk;
  }
  return count;
}

}  // namespace levyfock::rng
