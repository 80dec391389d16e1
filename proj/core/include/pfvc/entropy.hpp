#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "pfvc/token_codec.hpp"
#include "pfvc/tokenizer.hpp"

namespace pfvc {

// Order-0 frequency table with Laplace-style adaptation: every count
// starts at 1 and gains 1 per coded symbol; once the total exceeds 2^16
// all counts are halved (floor 1).
class AdaptiveModel {
 public:
  static constexpr std::uint32_t kMaxTotal = 1u << 16;

  explicit AdaptiveModel(int alphabet_size);

  int alphabet_size() const noexcept { return static_cast<int>(counts_.size()); }
  std::uint32_t total() const noexcept { return total_; }
  std::uint32_t count(int symbol) const noexcept { return counts_[static_cast<std::size_t>(symbol)]; }
  std::span<const std::uint32_t> counts() const noexcept { return counts_; }

  // Sum of the counts of all symbols below `symbol`.
  std::uint32_t cumulative(int symbol) const noexcept;
  // Symbol whose cumulative interval contains target (< total()).
  int find(std::uint32_t target, std::uint32_t& cum_out) const noexcept;
  void update(int symbol) noexcept;

  friend bool operator==(const AdaptiveModel&, const AdaptiveModel&) = default;

 private:
  std::vector<std::uint32_t> counts_;
  std::uint32_t total_;
};

// One model per coefficient band. Band edges follow the ladder: with the
// default ladder the bands are [0,16) [16,64) [64,144) [144,256).
class ContextSet {
 public:
  explicit ContextSet(const GranularityLadder& ladder = GranularityLadder(),
                      int symbol_bound = QuantConfig::kDefaultSymbolBound);

  int symbol_bound() const noexcept { return symbol_bound_; }
  // Alphabet: zigzag-mapped residuals 0 .. 2*bound, then the escape symbol.
  int escape_symbol() const noexcept { return 2 * symbol_bound_ + 1; }
  std::size_t band_count() const noexcept { return models_.size(); }
  std::size_t band_of(int coeff_index) const noexcept { return band_of_[static_cast<std::size_t>(coeff_index)]; }
  // [begin, end) coefficient range of a band.
  std::pair<int, int> band_range(std::size_t band) const noexcept { return {edges_[band], edges_[band + 1]}; }

  AdaptiveModel& model_for(int coeff_index) noexcept { return models_[band_of(coeff_index)]; }
  const AdaptiveModel& model(std::size_t band) const noexcept { return models_[band]; }

  friend bool operator==(const ContextSet&, const ContextSet&) = default;

 private:
  int symbol_bound_;
  std::vector<int> edges_;
  std::array<std::uint8_t, kFeatureSize> band_of_{};
  std::vector<AdaptiveModel> models_;
};

// 0 -> 0, -1 -> 1, 1 -> 2, -2 -> 3, ...
constexpr std::uint32_t zigzag_map(std::int32_t r) noexcept {
  return r >= 0 ? 2u * static_cast<std::uint32_t>(r) : 2u * static_cast<std::uint32_t>(-(r + 1)) + 1u;
}
constexpr std::int32_t zigzag_unmap(std::uint32_t m) noexcept {
  return (m & 1u) ? -static_cast<std::int32_t>(m >> 1) - 1 : static_cast<std::int32_t>(m >> 1);
}

// Multi-symbol range coder: 32-bit range, low kept with one carry bit,
// renormalised a byte at a time whenever range < 2^24. Output is most
// significant byte first; pending 0xFF bytes absorb carries (the LZMA
// cache scheme). finish() flushes 5 bytes, the first byte of any stream
// is 0x00.
class RangeEncoder {
 public:
  void encode(std::uint32_t cum, std::uint32_t freq, std::uint32_t total);
  void encode_raw_byte(std::uint8_t b) { encode(b, 1, 256); }
  std::vector<std::uint8_t> finish();

 private:
  void shift_low();

  std::uint64_t low_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint8_t cache_ = 0;
  std::uint64_t cache_size_ = 1;
  std::vector<std::uint8_t> out_;
};

class RangeDecoder {
 public:
  // Throws CorruptStream when fewer than 5 bytes are available or the
  // leading byte is not 0x00.
  explicit RangeDecoder(std::span<const std::uint8_t> bytes);

  // Scaled target in [0, total); call consume() with the matching interval.
  std::uint32_t decode_target(std::uint32_t total);
  void consume(std::uint32_t cum, std::uint32_t freq);
  std::uint8_t decode_raw_byte();

  std::size_t position() const noexcept { return pos_; }
  bool at_end() const noexcept { return pos_ == bytes_.size(); }

 private:
  std::uint8_t next_byte();
  void normalize();

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
  std::uint32_t range_ = 0xFFFFFFFFu;
  std::uint32_t code_ = 0;
  std::uint32_t scale_ = 1;
};

// Codes symbols[i] with the model of coefficient band i; out-of-bound
// residuals become the escape symbol followed by the 32-bit two's
// complement value as 4 equiprobable bytes, MSB first. An empty symbol
// list codes to an empty byte string.
std::vector<std::uint8_t> encode_symbols(const ResidualSymbols& symbols, ContextSet& contexts);

// Exact inverse of encode_symbols. The stream must be consumed exactly;
// running out of bytes or leaving bytes over raises CorruptStream.
ResidualSymbols decode_symbols(std::span<const std::uint8_t> bytes, int n_symbols, ContextSet& contexts);

}  // namespace pfvc
