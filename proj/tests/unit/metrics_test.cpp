#include <gtest/gtest.h>

#include <cmath>

#include "pfvc/errors.hpp"
#include "pfvc/metrics.hpp"
#include "test_support.hpp"

namespace pfvc {
namespace {

Frame offset(const Frame& f, int d) {
  Frame out = f;
  for (auto& p : out.luma()) p = static_cast<std::uint8_t>(p + d);
  return out;
}

// Window-by-window evaluation, no separable filtering or running sums.
double ssim_direct(const Frame& a, const Frame& b) {
  double w[11][11], norm = 0.0;
  for (int i = 0; i < 11; ++i) {
    for (int j = 0; j < 11; ++j) {
      w[i][j] = std::exp(-((i - 5) * (i - 5) + (j - 5) * (j - 5)) / (2 * 1.5 * 1.5));
      norm += w[i][j];
    }
  }
  const double c1 = (0.01 * 255) * (0.01 * 255), c2 = (0.03 * 255) * (0.03 * 255);
  double total = 0.0;
  int n = 0;
  for (int y = 0; y + 11 <= a.height(); ++y) {
    for (int x = 0; x + 11 <= a.width(); ++x) {
      double ma = 0, mb = 0, saa = 0, sbb = 0, sab = 0;
      for (int i = 0; i < 11; ++i) {
        for (int j = 0; j < 11; ++j) {
          const double k = w[i][j] / norm, pa = a.at(x + j, y + i), pb = b.at(x + j, y + i);
          ma += k * pa;
          mb += k * pb;
          saa += k * pa * pa;
          sbb += k * pb * pb;
          sab += k * pa * pb;
        }
      }
      const double va = saa - ma * ma, vb = sbb - mb * mb, cov = sab - ma * mb;
      total += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
      ++n;
    }
  }
  return total / n;
}

TEST(Psnr, UniformOffsets) {
  const Frame zero = Frame::filled(32, 32, 0);
  EXPECT_NEAR(psnr(zero, offset(zero, 1)), 48.1308036086791, 1e-6);
  EXPECT_NEAR(psnr(zero, offset(zero, 1)), 20 * std::log10(255.0), 1e-9);
  EXPECT_NEAR(psnr(zero, Frame::filled(32, 32, 255)), 0.0, 1e-12);
  EXPECT_EQ(psnr(zero, zero), kPsnrIdentical);
  EXPECT_TRUE(std::isinf(kPsnrIdentical));
}

TEST(Psnr, DimensionMismatch) {
  EXPECT_THROW(psnr(Frame::filled(16, 16, 0), Frame::filled(32, 16, 0)), InvalidArgument);
  EXPECT_THROW(mse(Frame::filled(16, 16, 0), Frame::filled(16, 32, 0)), InvalidArgument);
}

TEST(Ssim, IdentityIsExactlyOne) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Frame f = testing::random_frame(48, 40, seed);
    EXPECT_EQ(ssim(f, f), 1.0);
  }
  EXPECT_EQ(ssim(Frame::filled(16, 16, 9), Frame::filled(16, 16, 9)), 1.0);
}

TEST(Ssim, SymmetricBitwise) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Frame a = testing::random_frame(40, 40, seed);
    const Frame b = testing::random_frame(40, 40, seed + 50);
    EXPECT_EQ(ssim(a, b), ssim(b, a));
  }
}

TEST(Ssim, MatchesDirectEvaluation) {
  const Sequence s = synth_sequence(SynthKind::kTranslatingTexture, 4, 32, 32, 3);
  const Frame noisy = testing::random_frame(32, 32, 4);
  EXPECT_NEAR(ssim(s[0], s[3]), ssim_direct(s[0], s[3]), 1e-9);
  EXPECT_NEAR(ssim(s[0], noisy), ssim_direct(s[0], noisy), 1e-9);
}

TEST(Ssim, InvertedTextureIsDissimilar) {
  const Frame f = testing::random_frame(64, 64, 8);
  Frame inv = f;
  for (auto& p : inv.luma()) p = static_cast<std::uint8_t>(255 - p);
  EXPECT_LT(ssim(f, inv), 0.3);
  EXPECT_GE(ssim(f, inv), -1.0);
}

TEST(Ssim, Preconditions) {
  EXPECT_THROW(ssim(Frame::filled(10, 16, 0), Frame::filled(10, 16, 0)), InvalidArgument);
  EXPECT_THROW(ssim(Frame::filled(16, 16, 0), Frame::filled(32, 16, 0)), InvalidArgument);
}

TEST(SequenceMetrics, PooledPsnr) {
  const Frame z = Frame::filled(16, 16, 0);
  const Sequence a({z, z}, 25.0);
  const Sequence b({z, offset(z, 2)}, 25.0);
  // Pooled MSE is 2, not the mean of +inf and 42.1 dB.
  EXPECT_NEAR(sequence_psnr(a, b), 10 * std::log10(255.0 * 255.0 / 2.0), 1e-12);
  EXPECT_EQ(sequence_psnr(a, a), kPsnrIdentical);
  EXPECT_EQ(sequence_ssim(a, a), 1.0);
  EXPECT_THROW(sequence_psnr(a, Sequence({z}, 25.0)), InvalidArgument);
}

}  // namespace
}  // namespace pfvc
