#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pfvc/transform.hpp"
#include "test_support.hpp"

namespace pfvc {
namespace {

// Textbook double sum, no separability.
std::vector<double> dct_direct(const std::vector<double>& in, int n) {
  std::vector<double> out(in.size());
  auto alpha = [n](int k) { return k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n); };
  for (int u = 0; u < n; ++u) {
    for (int v = 0; v < n; ++v) {
      double s = 0.0;
      for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
          s += in[static_cast<std::size_t>(y) * n + x] * std::cos(std::numbers::pi * (2 * y + 1) * u / (2.0 * n)) *
               std::cos(std::numbers::pi * (2 * x + 1) * v / (2.0 * n));
        }
      }
      out[static_cast<std::size_t>(u) * n + v] = alpha(u) * alpha(v) * s;
    }
  }
  return out;
}

TEST(Dct, MatchesDirectSummation) {
  CounterRng rng(17);
  for (int n : {4, 8, 16}) {
    const OrthoDct2d dct(n);
    const auto in = testing::random_coeffs(n * n, rng);
    std::vector<double> out(in.size());
    dct.forward(in, out);
    const auto ref = dct_direct(in, n);
    for (std::size_t i = 0; i < in.size(); ++i) EXPECT_NEAR(out[i], ref[i], 1e-12) << n << " " << i;
  }
}

TEST(Dct, InverseRecoversInput) {
  CounterRng rng(5);
  const OrthoDct2d dct(16);
  for (int trial = 0; trial < 20; ++trial) {
    const auto in = testing::random_coeffs(256, rng);
    std::vector<double> c(256), back(256);
    dct.forward(in, c);
    dct.inverse(c, back);
    for (int i = 0; i < 256; ++i) EXPECT_NEAR(back[i], in[i], 1e-12);
  }
}

TEST(Dct, BasisIsOrthonormal) {
  const OrthoDct2d dct(16);
  for (int a = 0; a < 16; ++a) {
    for (int b = 0; b < 16; ++b) {
      double dot = 0.0;
      for (int i = 0; i < 16; ++i) dot += dct.basis(a, i) * dct.basis(b, i);
      EXPECT_NEAR(dot, a == b ? 1.0 : 0.0, 1e-13);
    }
  }
}

TEST(Zigzag, JpegEightByEight) {
  const std::vector<int> jpeg{0,  1,  8,  16, 9,  2,  3,  10, 17, 24, 32, 25, 18, 11, 4,  5,
                              12, 19, 26, 33, 40, 48, 41, 34, 27, 20, 13, 6,  7,  14, 21, 28,
                              35, 42, 49, 56, 57, 50, 43, 36, 29, 22, 15, 23, 30, 37, 44, 51,
                              58, 59, 52, 45, 38, 31, 39, 46, 53, 60, 61, 54, 47, 55, 62, 63};
  EXPECT_EQ(zigzag_scan(8), jpeg);
}

TEST(Zigzag, SixteenIsPermutationOrderedByDiagonal) {
  const auto z = zigzag_scan(16);
  ASSERT_EQ(z.size(), 256u);
  auto sorted = z;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 256; ++i) EXPECT_EQ(sorted[i], i);
  for (std::size_t i = 1; i < z.size(); ++i) {
    EXPECT_LE(z[i - 1] / 16 + z[i - 1] % 16, z[i] / 16 + z[i] % 16);
  }
  EXPECT_EQ(z.back(), 255);
}

}  // namespace
}  // namespace pfvc
