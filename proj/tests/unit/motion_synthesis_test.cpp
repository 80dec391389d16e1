#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "pfvc/errors.hpp"
#include "pfvc/metrics.hpp"
#include "pfvc/motion_synthesis.hpp"
#include "test_support.hpp"

namespace pfvc {
namespace {

TokenVector key_tokens(const Frame& key) {
  return tokenize(frame_to_feature(key, kWorkingScale), 256);
}

TokenVector inter_tokens(const Frame& f, int g) { return tokenize(frame_to_feature(f, kWorkingScale), g); }

RealGrid random_grid(int w, int h, CounterRng& rng) {
  RealGrid g(w, h);
  for (double& v : g.values) v = rng.next_unit();
  return g;
}

TEST(Resample, ConstantsAndIdentity) {
  CounterRng rng(1);
  const RealGrid c(16, 16, 0.37);
  for (auto [w, h] : {std::pair{64, 64}, std::pair{256, 128}, std::pair{7, 33}}) {
    const RealGrid up = resample_bilinear(c, w, h);
    for (double v : up.values) EXPECT_EQ(v, 0.37);
  }
  const RealGrid r = random_grid(16, 16, rng);
  EXPECT_EQ(resample_bilinear(r, 16, 16), r);
}

TEST(Resample, BoundedByInputRange) {
  CounterRng rng(2);
  const RealGrid r = random_grid(16, 16, rng);
  const auto [lo, hi] = std::minmax_element(r.values.begin(), r.values.end());
  const RealGrid up = resample_bilinear(r, 100, 64);
  for (double v : up.values) {
    EXPECT_GE(v, *lo);
    EXPECT_LE(v, *hi);
  }
}

TEST(Resample, PixelCentreOracle) {
  // 2x upsampling of a 2-sample ramp: output centres sit at source
  // coordinates -0.25, 0.25, 0.75, 1.25, clamped to [0, 1].
  const RealGrid src(2, 1, std::vector<double>{0.0, 1.0});
  const RealGrid up = resample_bilinear(src, 4, 1);
  EXPECT_DOUBLE_EQ(up.values[0], 0.0);
  EXPECT_DOUBLE_EQ(up.values[1], 0.25);
  EXPECT_DOUBLE_EQ(up.values[2], 0.75);
  EXPECT_DOUBLE_EQ(up.values[3], 1.0);
}

TEST(UpsampleFeature, ConstantAndIdentity) {
  const RealGrid up = upsample_feature(MotionFeature::constant(0.6), 64, 64);
  for (double v : up.values) EXPECT_EQ(v, 0.6);
  CounterRng rng(3);
  const MotionFeature f = testing::random_feature(rng);
  const RealGrid same = upsample_feature(f, 16, 16);
  for (int i = 0; i < kFeatureSize; ++i) EXPECT_EQ(same.values[i], f.values()[i]);
}

TEST(FeatureDiff, IdentityAntisymmetryOffset) {
  CounterRng rng(4);
  const MotionFeature a = testing::random_feature(rng);
  const MotionFeature b = testing::random_feature(rng);
  for (double v : feature_diff(a, a, 64, 64).grid.values) EXPECT_EQ(v, 0.0);
  const auto ab = feature_diff(a, b, 64, 64).grid.values;
  const auto ba = feature_diff(b, a, 64, 64).grid.values;
  for (std::size_t i = 0; i < ab.size(); ++i) EXPECT_EQ(ab[i], -ba[i]);
  MotionFeature shifted = a;
  for (double& v : shifted.values()) v += 0.125;
  for (double v : feature_diff(shifted, a, 64, 64).grid.values) EXPECT_NEAR(v, 0.125, 1e-12);
}

TEST(PredictMotion, ZeroDiffGivesZeroFieldAndUnitMask) {
  const Frame key_small = testing::random_frame(64, 64, 5);
  const FeatureDiff zero{RealGrid(64, 64, 0.0)};
  const DenseMotionField d = predict_motion(key_small, zero);
  EXPECT_EQ(d.width, 64);
  for (double v : d.dx) EXPECT_EQ(v, 0.0);
  for (double v : d.dy) EXPECT_EQ(v, 0.0);
  const OcclusionMap m = predict_occlusion(key_small, zero);
  for (double v : m.weights) EXPECT_EQ(v, 1.0);
}

TEST(PredictMotion, FlatKeyGivesZeroField) {
  CounterRng rng(6);
  const FeatureDiff diff{random_grid(64, 64, rng)};
  const DenseMotionField d = predict_motion(Frame::filled(64, 64, 100), diff);
  for (double v : d.dx) EXPECT_EQ(v, 0.0);
  for (double v : d.dy) EXPECT_EQ(v, 0.0);
}

TEST(PredictMotion, SizeMismatchRejected) {
  EXPECT_THROW(predict_motion(Frame::filled(64, 64, 0), FeatureDiff{RealGrid(32, 32)}), InvalidArgument);
}

TEST(PredictMotion, CorrelatesWithTrueTranslation) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Sequence seq = synth_sequence(SynthKind::kTranslatingTexture, 2, 256, 256, seed);
    const Frame key_small = downsample(seq[0], kWorkingScale);
    const int w = key_small.width(), h = key_small.height();
    const FeatureDiff diff = feature_diff(frame_to_feature(seq[1]), frame_to_feature(seq[0]), w, h);
    const DenseMotionField d = predict_motion(key_small, diff);
    // Texture regions: horizontal gradient magnitude above its median.
    std::vector<double> gx(static_cast<std::size_t>(w) * h);
    for (int y = 0; y < h; ++y) {
      for (int x = 0; x < w; ++x) {
        gx[static_cast<std::size_t>(y) * w + x] =
            std::abs(key_small.at(std::min(x + 1, w - 1), y) - key_small.at(std::max(x - 1, 0), y));
      }
    }
    auto sorted = gx;
    std::nth_element(sorted.begin(), sorted.begin() + static_cast<std::ptrdiff_t>(sorted.size() / 2), sorted.end());
    const double median = sorted[sorted.size() / 2];
    // Cosine similarity between predicted and true (1, 0) vectors.
    double dot = 0.0, norm = 0.0;
    std::size_t n = 0;
    for (std::size_t i = 0; i < gx.size(); ++i) {
      if (gx[i] <= median) continue;
      dot += d.dx[i];
      norm += d.dx[i] * d.dx[i] + d.dy[i] * d.dy[i];
      ++n;
    }
    EXPECT_GT(dot / std::sqrt(norm * static_cast<double>(n)), 0.3) << seed;
  }
}

TEST(PredictOcclusion, RangeAndLimit) {
  RealGrid diff(32, 32);
  CounterRng rng(7);
  for (double& v : diff.values) v = 4.0 * (rng.next_unit() - 0.5);
  diff.values[0] = 1e6;
  const OcclusionMap m = predict_occlusion(Frame::filled(32, 32, 0), FeatureDiff{diff});
  EXPECT_EQ(m.weights[0], 0.0);
  for (std::size_t i = 1; i < m.weights.size(); ++i) {
    EXPECT_GT(m.weights[i], 0.0);
    EXPECT_LE(m.weights[i], 1.0);
    EXPECT_NEAR(m.weights[i], std::exp(-std::abs(diff.values[i]) / kOcclusionSigma), 1e-15);
  }
}

TEST(Warp, ZeroFieldIsExactIdentity) {
  const Frame f = testing::random_frame(64, 48, 8);
  DenseMotionField zero{64, 48, std::vector<double>(64 * 48, 0.0), std::vector<double>(64 * 48, 0.0)};
  EXPECT_EQ(warp(f, zero), f);
  const RealGrid s = warp_samples(f, zero);
  for (std::size_t i = 0; i < s.values.size(); ++i) EXPECT_EQ(s.values[i], f.luma()[i]);
}

TEST(Warp, UnitShiftMatchesNextSyntheticFrame) {
  const Sequence seq = synth_sequence(SynthKind::kTranslatingTexture, 2, 64, 64, 9);
  DenseMotionField shift{64, 64, std::vector<double>(64 * 64, 1.0), std::vector<double>(64 * 64, 0.0)};
  const Frame out = warp(seq[0], shift);
  for (int y = 0; y < 64; ++y) {
    for (int x = 0; x < 63; ++x) ASSERT_EQ(out.at(x, y), seq[1].at(x, y)) << x << " " << y;
    EXPECT_EQ(out.at(63, y), seq[0].at(63, y));  // clamped border column
  }
}

TEST(Warp, IntegerShiftOracle) {
  const Frame f = testing::random_frame(32, 32, 10);
  DenseMotionField field{32, 32, std::vector<double>(32 * 32, -2.0), std::vector<double>(32 * 32, 3.0)};
  const Frame out = warp(f, field);
  for (int y = 0; y < 32; ++y) {
    for (int x = 0; x < 32; ++x) EXPECT_EQ(out.at(x, y), f.at(std::clamp(x - 2, 0, 31), std::clamp(y + 3, 0, 31)));
  }
}

TEST(Warp, OutputWithinInputRange) {
  CounterRng rng(11);
  Frame f = testing::random_frame(32, 32, 11);
  for (auto& p : f.luma()) p = static_cast<std::uint8_t>(50 + p % 100);
  DenseMotionField field{32, 32, {}, {}};
  for (int i = 0; i < 32 * 32; ++i) {
    field.dx.push_back(10.0 * (rng.next_unit() - 0.5));
    field.dy.push_back(10.0 * (rng.next_unit() - 0.5));
  }
  for (double v : warp_samples(f, field).values) {
    EXPECT_GE(v, 50.0);
    EXPECT_LE(v, 149.0);
  }
}

TEST(Refine, PassesThroughWhenVisible) {
  CounterRng rng(12);
  const RealGrid m = random_grid(64, 64, rng);
  EXPECT_EQ(refine_occluded(m, std::vector<double>(64 * 64, 1.0)), m);
}

TEST(Refine, FillsWithConstantFromConstantSurroundings) {
  // A constant frame masked by any weights is restored: the fill estimate
  // S(m)/S(w) equals the constant wherever S(w) > 0.
  CounterRng rng(13);
  const double c = 120.0;
  std::vector<double> w(64 * 64);
  for (double& v : w) v = 0.05 + 0.95 * rng.next_unit();
  RealGrid masked(64, 64);
  for (std::size_t i = 0; i < w.size(); ++i) masked.values[i] = c * w[i];
  const RealGrid out = refine_occluded(masked, w);
  for (double v : out.values) EXPECT_NEAR(v, c, 1e-9);
}

TEST(Refine, Preconditions) {
  EXPECT_THROW(refine_occluded(RealGrid(64, 64), std::vector<double>(10)), InvalidArgument);
  EXPECT_THROW(refine_occluded(RealGrid(62, 64), std::vector<double>(62 * 64, 0.5)), InvalidArgument);
}

TEST(Reconstruct, IdenticalTokensReproduceKey) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Frame key = testing::random_frame(128, 128, seed);
    const TokenVector kt = key_tokens(key);
    for (int g : {16, 64, 144, 256}) {
      EXPECT_EQ(reconstruct_frame(key, kt, truncate_tokens(kt, g)), key) << g;
    }
  }
}

TEST(Reconstruct, StaticSequence) {
  const Sequence seq = synth_sequence(SynthKind::kStatic, 3, 256, 256, 4);
  const KeyReference ref(seq[0], key_tokens(seq[0]));
  for (std::size_t t = 1; t < seq.size(); ++t) EXPECT_EQ(reconstruct_frame(ref, inter_tokens(seq[t], 64)), seq[0]);
}

TEST(Reconstruct, FusedChainMatchesComposition) {
  const Sequence seq = synth_sequence(SynthKind::kMovingBlob, 6, 128, 128, 14);
  const Frame& key = seq[0];
  const TokenVector kt = key_tokens(key);
  const KeyReference ref(key, kt);
  for (int g : {16, 144, 256}) {
    const TokenVector it = inter_tokens(seq[5], g);
    const Frame fused = reconstruct_frame(ref, it);

    const Frame key_small = downsample(key, kWorkingScale);
    const int w = key_small.width(), h = key_small.height();
    const FeatureDiff diff = feature_diff(detokenize(it), detokenize(truncate_tokens(kt, g)), w, h);
    const DenseMotionField small = predict_motion(key_small, diff);
    const OcclusionMap occ = predict_occlusion(key_small, diff);
    RealGrid dx = resample_bilinear(RealGrid(w, h, small.dx), 128, 128);
    RealGrid dy = resample_bilinear(RealGrid(w, h, small.dy), 128, 128);
    const RealGrid mask = resample_bilinear(RealGrid(w, h, occ.weights), 128, 128);
    for (double& v : dx.values) v *= kWorkingScale;
    for (double& v : dy.values) v *= kWorkingScale;
    RealGrid masked = warp_samples(key, DenseMotionField{128, 128, dx.values, dy.values});
    for (std::size_t i = 0; i < masked.values.size(); ++i) masked.values[i] *= mask.values[i];
    const RealGrid refined = refine_occluded(masked, mask.values);

    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < refined.values.size(); ++i) {
      const int expect = static_cast<int>(std::clamp(refined.values[i], 0.0, 255.0) + 0.5);
      const int got = fused.luma()[i];
      EXPECT_LE(std::abs(got - expect), 1);
      mismatches += got != expect;
    }
    EXPECT_LT(mismatches, refined.values.size() / 100) << g;
  }
}

TEST(Reconstruct, FinerTokensReduceError) {
  std::size_t better = 0, total = 0;
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const Sequence seq = synth_sequence(SynthKind::kTranslatingTexture, 9, 256, 256, seed);
    const KeyReference ref(seq[0], key_tokens(seq[0]));
    for (std::size_t t = 1; t < seq.size(); ++t) {
      const double coarse = mse(reconstruct_frame(ref, inter_tokens(seq[t], 16)), seq[t]);
      const double fine = mse(reconstruct_frame(ref, inter_tokens(seq[t], 256)), seq[t]);
      better += fine <= coarse;
      ++total;
    }
  }
  EXPECT_GE(static_cast<double>(better), 0.95 * static_cast<double>(total));
}

TEST(KeyReferenceType, Preconditions) {
  const Frame key = Frame::filled(64, 64, 0);
  EXPECT_THROW(KeyReference(key, TokenVector(16, std::vector<double>(16))), InvalidArgument);
  EXPECT_THROW(KeyReference(Frame::filled(32, 32, 0), TokenVector(256, std::vector<double>(256))), InvalidArgument);
  const KeyReference ref(key, key_tokens(key));
  EXPECT_EQ(ref.padded().size(), 65u * 65u);
  EXPECT_EQ(ref.key_feature_at(16).width, 16);
}

}  // namespace
}  // namespace pfvc
