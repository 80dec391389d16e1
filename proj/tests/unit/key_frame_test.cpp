#include <gtest/gtest.h>

#include <cmath>

#include "pfvc/errors.hpp"
#include "pfvc/key_frame.hpp"
#include "pfvc/metrics.hpp"
#include "test_support.hpp"

namespace pfvc {
namespace {

TEST(KeyFrame, PresetSteps) {
  for (int p = 0; p < kKeyPresetCount; ++p) {
    EXPECT_DOUBLE_EQ(key_preset_step(p), std::pow(2.0, (kKeyPresetQp[p] - 4) / 6.0));
  }
  EXPECT_THROW(key_preset_step(6), InvalidArgument);
  EXPECT_THROW(key_preset_step(-1), InvalidArgument);
}

TEST(KeyFrame, RawIsLossless) {
  const Frame f = testing::random_frame(64, 64, 3);
  const auto payload = encode_key_frame(f, std::nullopt);
  EXPECT_EQ(payload[0], static_cast<std::uint8_t>(KeyMode::kRaw));
  EXPECT_EQ(decode_key_frame(payload, 64, 64), f);
}

TEST(KeyFrame, RawCarriesChroma) {
  const Frame luma = testing::random_frame(32, 32, 4);
  ChromaPlanes c{std::vector<std::uint8_t>(256, 90), std::vector<std::uint8_t>(256, 170)};
  const Frame f(32, 32, std::vector<std::uint8_t>(luma.luma().begin(), luma.luma().end()), c);
  EXPECT_EQ(decode_key_frame(encode_key_frame(f, std::nullopt), 32, 32), f);
}

TEST(KeyFrame, PresetsTradeSizeForQuality) {
  const Frame f = synth_sequence(SynthKind::kTranslatingTexture, 1, 128, 128, 6)[0];
  std::size_t prev_size = std::numeric_limits<std::size_t>::max();
  double prev_psnr = std::numeric_limits<double>::infinity();
  for (int p = 0; p < kKeyPresetCount; ++p) {
    const auto payload = encode_key_frame(f, p);
    const Frame back = decode_key_frame(payload, 128, 128);
    const double q = psnr(f, back);
    EXPECT_LT(payload.size(), prev_size) << p;
    EXPECT_LE(q, prev_psnr) << p;
    prev_size = payload.size();
    prev_psnr = q;
  }
  EXPECT_GT(psnr(f, decode_key_frame(encode_key_frame(f, 0), 128, 128)), 45.0);
}

TEST(KeyFrame, TransformNeedsMultipleOfEight) {
  EXPECT_THROW(encode_key_frame(Frame::filled(20, 16, 0), 3), InvalidArgument);
  EXPECT_THROW(encode_key_frame(Frame::filled(16, 16, 0), 6), InvalidArgument);
}

TEST(KeyFrame, CorruptPayloads) {
  const Frame f = testing::random_frame(64, 64, 8);
  const auto payload = encode_key_frame(f, 2);
  EXPECT_THROW(decode_key_frame(std::vector<std::uint8_t>{1}, 64, 64), CorruptStream);
  auto bad = payload;
  bad[0] = 9;
  EXPECT_THROW(decode_key_frame(bad, 64, 64), CorruptStream);
  bad = payload;
  bad[1] = 6;
  EXPECT_THROW(decode_key_frame(bad, 64, 64), CorruptStream);
  bad = payload;
  bad.resize(bad.size() / 2);
  EXPECT_THROW(decode_key_frame(bad, 64, 64), CorruptStream);
  const auto raw = encode_key_frame(f, std::nullopt);
  EXPECT_THROW(decode_key_frame(raw, 32, 64), CorruptStream);
}

TEST(KeyFrame, RandomPayloadsNeverCrash) {
  CounterRng rng(21);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<std::uint8_t> p(2 + rng.next_below(200));
    for (auto& b : p) b = static_cast<std::uint8_t>(rng.next_below(256));
    p[0] = static_cast<std::uint8_t>(rng.next_below(2));
    if (p[0] == 1) p[1] = static_cast<std::uint8_t>(rng.next_below(6));
    if (p.size() > 2 && rng.next_unit() < 0.5) p[2] = 0;
    try {
      decode_key_frame(p, 64, 64);
    } catch (const CorruptStream&) {
    }
  }
}

}  // namespace
}  // namespace pfvc
