#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace bsabr {

/// Philox4x64-10 counter-based generator. Stateless: every 256-bit output
/// block is a pure function of (counter, key), so path i / step-block j can
/// be drawn as block(ctr = {i, j, 0, 0}, key = {seed, stream}) from any
/// thread in any order. Verified against the reference implementation's
/// published output sequences.
struct Philox4x64 {
  static constexpr std::uint64_t mult0 = 0xD2E7470EE14C6C93ULL;
  static constexpr std::uint64_t mult1 = 0xCA5A826395121157ULL;
  static constexpr std::uint64_t weyl0 = 0x9E3779B97F4A7C15ULL;
  static constexpr std::uint64_t weyl1 = 0xBB67AE8584CAA73BULL;

  using Block = std::array<std::uint64_t, 4>;

  static Block block(std::uint64_t c0, std::uint64_t c1, std::uint64_t c2, std::uint64_t c3,
                     std::uint64_t k0, std::uint64_t k1) {
    std::uint64_t x0 = c0, x1 = c1, x2 = c2, x3 = c3;
    for (int round = 0; round < 10; ++round) {
      const unsigned __int128 p0 = static_cast<unsigned __int128>(mult0) * x0;
      const unsigned __int128 p1 = static_cast<unsigned __int128>(mult1) * x2;
      const std::uint64_t hi0 = static_cast<std::uint64_t>(p0 >> 64);
      const std::uint64_t lo0 = static_cast<std::uint64_t>(p0);
      const std::uint64_t hi1 = static_cast<std::uint64_t>(p1 >> 64);
      const std::uint64_t lo1 = static_cast<std::uint64_t>(p1);
      const std::uint64_t n0 = hi1 ^ x1 ^ k0;
      const std::uint64_t n1 = lo1;
      const std::uint64_t n2 = hi0 ^ x3 ^ k1;
      const std::uint64_t n3 = lo0;
      x0 = n0;
      x1 = n1;
      x2 = n2;
      x3 = n3;
      k0 += weyl0;
      k1 += weyl1;
    }
    return {x0, x1, x2, x3};
  }
};

/// Box-Muller pair from two raw words: u1 mapped into (0, 1] (so log is
/// finite), u2 into [0, 1). Deterministic counter -> sample map with no
/// rejection loop, which keeps parallel streams reproducible.
inline void box_muller(std::uint64_t a, std::uint64_t b, double& z1, double& z2) {
  constexpr double two53 = 0x1.0p-53;
  const double u1 = static_cast<double>((a >> 11) + 1) * two53;
  const double u2 = static_cast<double>(b >> 11) * two53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 6.283185307179586476925286766559 * u2;
  z1 = r * std::cos(theta);
  z2 = r * std::sin(theta);
}

}  // namespace bsabr
