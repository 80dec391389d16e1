#include <gtest/gtest.h>

#include <cmath>

#include "pfvc/entropy.hpp"
#include "pfvc/errors.hpp"
#include "test_support.hpp"

namespace pfvc {
namespace {

using testing::adaptive_entropy_bits;
using testing::code_stream;
using testing::decode_stream;

ResidualSymbols random_symbols(CounterRng& rng, int g, int spread, double escape_rate) {
  ResidualSymbols s{g, {}};
  for (int i = 0; i < g; ++i) {
    if (rng.next_unit() < escape_rate) {
      const auto raw = static_cast<std::int32_t>(static_cast<std::uint32_t>(rng.next_u64()));
      s.symbols.push_back(raw);
    } else {
      s.symbols.push_back(static_cast<std::int32_t>(rng.next_below(2 * spread + 1)) - spread);
    }
  }
  return s;
}

TEST(Zigzag, MapsSignedToInterleaved) {
  EXPECT_EQ(zigzag_map(0), 0u);
  EXPECT_EQ(zigzag_map(-1), 1u);
  EXPECT_EQ(zigzag_map(1), 2u);
  EXPECT_EQ(zigzag_map(-2), 3u);
  for (int r = -300; r <= 300; ++r) EXPECT_EQ(zigzag_unmap(zigzag_map(r)), r);
}

TEST(AdaptiveModel, CountsAndRescale) {
  AdaptiveModel m(4);
  EXPECT_EQ(m.total(), 4u);
  m.update(2);
  EXPECT_EQ(m.count(2), 2u);
  EXPECT_EQ(m.cumulative(3), 4u);
  std::uint32_t cum = 0;
  EXPECT_EQ(m.find(2, cum), 2);
  EXPECT_EQ(cum, 2u);
  for (std::uint32_t i = 0; i < AdaptiveModel::kMaxTotal; ++i) m.update(0);
  EXPECT_LE(m.total(), AdaptiveModel::kMaxTotal);
  std::uint32_t sum = 0;
  for (auto c : m.counts()) {
    EXPECT_GE(c, 1u);
    sum += c;
  }
  EXPECT_EQ(sum, m.total());
}

TEST(ContextSet, BandsFollowLadder) {
  const ContextSet cs;
  EXPECT_EQ(cs.band_count(), 4u);
  EXPECT_EQ(cs.band_of(0), 0u);
  EXPECT_EQ(cs.band_of(15), 0u);
  EXPECT_EQ(cs.band_of(16), 1u);
  EXPECT_EQ(cs.band_of(143), 2u);
  EXPECT_EQ(cs.band_of(255), 3u);
  EXPECT_EQ(cs.band_range(2), std::make_pair(64, 144));
  EXPECT_EQ(cs.escape_symbol(), 511);
  EXPECT_EQ(cs.model(0).alphabet_size(), 512);
  const ContextSet partial(GranularityLadder{32, 100});
  EXPECT_EQ(partial.band_count(), 3u);
  EXPECT_EQ(partial.band_range(2), std::make_pair(100, 256));
}

TEST(EncodeSymbols, EmptyListRoundTrip) {
  ContextSet enc, dec;
  const auto bytes = encode_symbols(ResidualSymbols{0, {}}, enc);
  EXPECT_TRUE(bytes.empty());
  EXPECT_TRUE(decode_symbols(bytes, 0, dec).symbols.empty());
  EXPECT_THROW(decode_symbols(std::vector<std::uint8_t>{0}, 0, dec), CorruptStream);
}

TEST(EncodeSymbols, RandomRoundTripAndModelEquivalence) {
  CounterRng rng(2024);
  ContextSet enc, dec;
  const GranularityLadder ladder;
  for (int frame = 0; frame < 300; ++frame) {
    const int g = ladder[rng.next_below(ladder.size())];
    const auto sym = random_symbols(rng, g, 1 + static_cast<int>(rng.next_below(300)), 0.02);
    const auto bytes = encode_symbols(sym, enc);
    ASSERT_EQ(decode_symbols(bytes, g, dec), sym) << frame;
    ASSERT_EQ(enc, dec);
  }
}

TEST(EncodeSymbols, EscapeExtremes) {
  ContextSet enc, dec;
  ResidualSymbols s{16, std::vector<std::int32_t>(16, 0)};
  s.symbols[0] = std::numeric_limits<std::int32_t>::min();
  s.symbols[1] = std::numeric_limits<std::int32_t>::max();
  s.symbols[2] = 256;
  s.symbols[3] = -256;
  s.symbols[4] = 255;
  s.symbols[5] = -255;
  EXPECT_EQ(decode_symbols(encode_symbols(s, enc), 16, dec), s);
}

TEST(EncodeSymbols, Deterministic) {
  CounterRng rng(9);
  const auto sym = random_symbols(rng, 256, 40, 0.01);
  ContextSet a, b;
  EXPECT_EQ(encode_symbols(sym, a), encode_symbols(sym, b));
}

TEST(DecodeSymbols, TruncationIsCorrupt) {
  CounterRng rng(10);
  ContextSet enc;
  const auto sym = random_symbols(rng, 144, 20, 0.0);
  const auto bytes = encode_symbols(sym, enc);
  for (std::size_t cut : {std::size_t{0}, std::size_t{3}, bytes.size() / 2, bytes.size() - 1}) {
    ContextSet dec;
    const std::vector<std::uint8_t> part(bytes.begin(), bytes.begin() + static_cast<std::ptrdiff_t>(cut));
    EXPECT_THROW(decode_symbols(part, 144, dec), CorruptStream) << cut;
  }
  ContextSet dec;
  auto extra = bytes;
  extra.push_back(0);
  EXPECT_THROW(decode_symbols(extra, 144, dec), CorruptStream);
}

TEST(DecodeSymbols, RandomBytesNeverCrash) {
  CounterRng rng(11);
  int rejected = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    std::vector<std::uint8_t> bytes(rng.next_below(64));
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng.next_below(256));
    if (!bytes.empty() && rng.next_unit() < 0.5) bytes[0] = 0;
    ContextSet dec;
    try {
      decode_symbols(bytes, 1 + static_cast<int>(rng.next_below(256)), dec);
    } catch (const CorruptStream&) {
      ++rejected;
    }
  }
  EXPECT_GT(rejected, 1000);
}

TEST(RangeCoder, IdenticalSymbolsAfterAdaptation) {
  const ContextSet cs;
  const std::vector<int> ones(10000, 0);
  const std::vector<int> head(9000, 0);
  const double tail_bits = 8.0 * (static_cast<double>(code_stream(ones, cs.model(0)).size()) -
                                  static_cast<double>(code_stream(head, cs.model(0)).size()));
  EXPECT_LT(tail_bits / 1000.0, 0.1);
  // Oracle for the whole stream, flush included.
  const double total_bits = 8.0 * static_cast<double>(code_stream(ones, cs.model(0)).size());
  EXPECT_LT(total_bits, adaptive_entropy_bits(ones, 512) + 48.0);
}

TEST(RangeCoder, UniformFourLetterNearTwoBits) {
  CounterRng rng(12);
  std::vector<int> s(100000);
  for (int& v : s) v = static_cast<int>(zigzag_map(static_cast<std::int32_t>(rng.next_below(4)) - 2));
  const ContextSet cs;
  const double bits = 8.0 * static_cast<double>(code_stream(s, cs.model(1)).size());
  EXPECT_GE(bits / 1e5, 2.0);
  EXPECT_LE(bits / 1e5, 2.0 * 1.05);
}

TEST(RangeCoder, WithinFivePercentOfAdaptiveEntropy) {
  CounterRng rng(13);
  const ContextSet cs;
  for (std::size_t band = 0; band < cs.band_count(); ++band) {
    const double scale = 8.0 / static_cast<double>(band + 1);
    std::vector<int> s(100000);
    for (int& v : s) {
      const double u = rng.next_unit() - 0.5;
      const double lap = -scale * std::copysign(std::log(1.0 - 2.0 * std::abs(u)), u);
      v = static_cast<int>(zigzag_map(static_cast<std::int32_t>(std::clamp(std::lround(lap), -255L, 255L))));
    }
    const auto bytes = code_stream(s, cs.model(band));
    const double oracle = adaptive_entropy_bits(s, cs.model(band).alphabet_size());
    EXPECT_LE(8.0 * static_cast<double>(bytes.size()), oracle * 1.05) << band;
    EXPECT_GE(8.0 * static_cast<double>(bytes.size()), oracle - 1.0) << band;
    EXPECT_EQ(decode_stream(bytes, s.size(), cs.model(band)), s);
  }
}

TEST(RangeCoder, FirstByteIsZeroAndShortStreamsRejected) {
  RangeEncoder enc;
  enc.encode(3, 1, 10);
  const auto bytes = enc.finish();
  ASSERT_GE(bytes.size(), 5u);
  EXPECT_EQ(bytes[0], 0);
  EXPECT_THROW(RangeDecoder(std::span(bytes).first(4)), CorruptStream);
  auto bad = bytes;
  bad[0] = 1;
  EXPECT_THROW(RangeDecoder{bad}, CorruptStream);
}

TEST(RangeCoder, CarryPropagation) {
  // Symbols at the top of the interval push low towards 2^32 and force
  // carries through runs of 0xFF.
  CounterRng rng(14);
  std::vector<int> s(50000);
  for (int& v : s) v = rng.next_unit() < 0.999 ? 3 : static_cast<int>(rng.next_below(3));
  AdaptiveModel m(4);
  const auto bytes = code_stream(s, m);
  EXPECT_EQ(decode_stream(bytes, s.size(), m), s);
}

}  // namespace
}  // namespace pfvc
