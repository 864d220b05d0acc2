#pragma once

#include <array>
#include <cstdint>

namespace levyfock::rng {

// Philox4x64-10 counter-based generator, bit-compatible with NumPy's
// np.random.Philox: same round constants, same counter increment (256-bit
// little-endian), same emission order of the four lanes. Streams are cheap:
// any (key, counter) pair is an independent position in the sequence, so
// per-path substreams are just distinct keys.
struct Philox4x64 {
  std::array<std::uint64_t, 4> counter{0, 0, 0, 0};
  std::array<std::uint64_t, 2> key{0, 0};

  Philox4x64() = default;
  Philox4x64(std::uint64_t key0, std::uint64_t key1) : key{key0, key1} {}

  static std::array<std::uint64_t, 4> block(std::array<std::uint64_t, 4> ctr,
                                            std::array<std::uint64_t, 2> k);

  std::uint64_t next_u64();

  // uniform on [0, 1): 53-bit mantissa
  double next_double();

  // standard normal via Box-Muller (two uniforms per draw)
  double next_normal();

  // Poisson by chunked Knuth products; exact for any finite lambda
  std::uint64_t next_poisson(double lambda);

private:
  std::array<std::uint64_t, 4> buffer_{};
  int buffered_ = 0;
  void refill();
};

}  // namespace levyfock::rng
