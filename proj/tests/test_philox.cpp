#include "bsabr/philox.hpp"

#include <cmath>
#include <cstdint>

#include "doctest.h"

using bsabr::Philox4x64;
using Block = Philox4x64::Block;

// known-answer vectors cross-checked against the reference implementation
TEST_CASE("known answers") {
  CHECK(Philox4x64::block(0, 0, 0, 0, 0, 0)
        == Block{0x16554d9eca36314cULL, 0xdb20fe9d672d0fdcULL, 0xd7e772cee186176bULL,
                 0x7e68b68aec7ba23bULL});
  CHECK(Philox4x64::block(1, 0, 0, 0, 0, 0)
        == Block{0x02f4ba6408e4d89bULL, 0x3dd62b0b9ca8c5b2ULL, 0x1c8667a55d902e79ULL,
                 0x907d7a052fd5b4dcULL});
  CHECK(Philox4x64::block(0, 1, 0, 0, 0, 0)
        == Block{0xe85facf8b3b067d6ULL, 0xfdbc6a61c123b5f8ULL, 0x349bde9a4b8d60c1ULL,
                 0x39212690df8b178aULL});
  CHECK(Philox4x64::block(1, 2, 3, 4, 5, 6)
        == Block{0xa39b5519339fe354ULL, 0xaceb1228efc25196ULL, 0xa0a2e3c25aa5f4fcULL,
                 0x08d0cfa9332720dfULL});
  CHECK(Philox4x64::block(0, 0, 1, 0, 7, 9)
        == Block{0xc0b4a21f0704ba53ULL, 0xa1e7c7ac975cc11bULL, 0x1a8ae7bd0b6dd923ULL,
                 0x7e6b07844329b5f7ULL});
  CHECK(Philox4x64::block(12345, 67890, 0, 0, 42, 0x5eed5eed5eed5eedULL)
        == Block{0x7b75ad8973f7fb77ULL, 0xefe0a51f8d762e73ULL, 0x4b45abef4b36ee8fULL,
                 0x4c7fc3cffbfe17e3ULL});
}

TEST_CASE("counter and key sensitivity") {
  const Block a = Philox4x64::block(0, 0, 0, 0, 1, 0);
  const Block b = Philox4x64::block(0, 0, 0, 0, 2, 0);
  CHECK(a != b);
  CHECK(Philox4x64::block(5, 0, 0, 0, 1, 0) != Philox4x64::block(6, 0, 0, 0, 1, 0));
}

TEST_CASE("statelessness: same inputs, same block") {
  const Block a = Philox4x64::block(3, 1, 4, 1, 5, 9);
  const Block b = Philox4x64::block(3, 1, 4, 1, 5, 9);
  CHECK(a == b);
}

TEST_CASE("box_muller maps words to finite standard normals") {
  double z1 = 0.0, z2 = 0.0;

  // u1 is mapped into (0, 1]: the all-zero word must not produce log(0)
  bsabr::box_muller(0, 0, z1, z2);
  CHECK(std::isfinite(z1));
  CHECK(std::isfinite(z2));

  // extreme words stay finite as well
  bsabr::box_muller(~0ULL, ~0ULL, z1, z2);
  CHECK(std::isfinite(z1));
  CHECK(std::isfinite(z2));

  // moment sanity over a bulk sample
  double sum = 0.0, sum2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const Block blk = Philox4x64::block(i, 0, 0, 0, 2024, 0);
    bsabr::box_muller(blk[0], blk[1], z1, z2);
    sum += z1 + z2;
    sum2 += z1 * z1 + z2 * z2;
  }
  const double mean = sum / (2.0 * n);
  const double var = sum2 / (2.0 * n) - mean * mean;
  CHECK(std::abs(mean) < 5.0 / std::sqrt(2.0 * n));
  CHECK(std::abs(var - 1.0) < 0.01);
}
