#include "pfvc/entropy.hpp"

#include <algorithm>
#include <numeric>

#include "pfvc/errors.hpp"

namespace pfvc {

namespace {

constexpr std::uint32_t kTopValue = 1u << 24;

}  // namespace

AdaptiveModel::AdaptiveModel(int alphabet_size) {
  if (alphabet_size < 2 || static_cast<std::uint32_t>(alphabet_size) > kMaxTotal / 2) {
    throw InvalidArgument("alphabet size outside [2, 32768]");
  }
  counts_.assign(static_cast<std::size_t>(alphabet_size), 1u);
  total_ = static_cast<std::uint32_t>(alphabet_size);
}

std::uint32_t AdaptiveModel::cumulative(int symbol) const noexcept {
  std::uint32_t cum = 0;
  for (int s = 0; s < symbol; ++s) cum += counts_[static_cast<std::size_t>(s)];
  return cum;
}

int AdaptiveModel::find(std::uint32_t target, std::uint32_t& cum_out) const noexcept {
  std::uint32_t cum = 0;
  const int n = alphabet_size();
  for (int s = 0; s < n - 1; ++s) {
    const std::uint32_t next = cum + counts_[static_cast<std::size_t>(s)];
    if (target < next) {
      cum_out = cum;
      return s;
    }
    cum = next;
  }
  cum_out = cum;
  return n - 1;
}

void AdaptiveModel::update(int symbol) noexcept {
  ++counts_[static_cast<std::size_t>(symbol)];
  if (++total_ > kMaxTotal) {
    total_ = 0;
    for (auto& c : counts_) {
      c = std::max<std::uint32_t>(1u, c >> 1);
      total_ += c;
    }
  }
}

ContextSet::ContextSet(const GranularityLadder& ladder, int symbol_bound) : symbol_bound_(symbol_bound) {
  if (symbol_bound < 1 || symbol_bound > (1 << 14)) throw InvalidArgument("symbol bound outside [1, 16384]");
  edges_.push_back(0);
  for (int level : ladder.levels()) edges_.push_back(level);
  if (edges_.back() != kFeatureSize) edges_.push_back(kFeatureSize);
  for (std::size_t b = 0; b + 1 < edges_.size(); ++b) {
    for (int i = edges_[b]; i < edges_[b + 1]; ++i) band_of_[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(b);
  }
  models_.assign(edges_.size() - 1, AdaptiveModel(2 * symbol_bound + 2));
}

void RangeEncoder::shift_low() {
  if (static_cast<std::uint32_t>(low_) < 0xFF000000u || (low_ >> 32) != 0) {
    const auto carry = static_cast<std::uint8_t>(low_ >> 32);
    std::uint8_t pending = cache_;
    do {
      out_.push_back(static_cast<std::uint8_t>(pending + carry));
      pending = 0xFF;
    } while (--cache_size_ != 0);
    cache_ = static_cast<std::uint8_t>(static_cast<std::uint32_t>(low_) >> 24);
  }
  ++cache_size_;
  low_ = (low_ & 0x00FFFFFFu) << 8;
}

void RangeEncoder::encode(std::uint32_t cum, std::uint32_t freq, std::uint32_t total) {
  const std::uint32_t r = range_ / total;
  low_ += static_cast<std::uint64_t>(r) * cum;
  range_ = r * freq;
  while (range_ < kTopValue) {
    range_ <<= 8;
    shift_low();
  }
}

std::vector<std::uint8_t> RangeEncoder::finish() {
  for (int i = 0; i < 5; ++i) shift_low();
  return std::move(out_);
}

RangeDecoder::RangeDecoder(std::span<const std::uint8_t> bytes) : bytes_(bytes) {
  if (bytes_.size() < 5) throw CorruptStream("range-coded stream shorter than 5 bytes", bytes_.size());
  if (bytes_[0] != 0) throw CorruptStream("range-coded stream does not start with 0x00", 0);
  pos_ = 1;
  for (int i = 0; i < 4; ++i) code_ = (code_ << 8) | bytes_[pos_++];
}

std::uint8_t RangeDecoder::next_byte() {
  if (pos_ >= bytes_.size()) throw CorruptStream("range-coded stream exhausted", pos_);
  return bytes_[pos_++];
}

void RangeDecoder::normalize() {
  while (range_ < kTopValue) {
    code_ = (code_ << 8) | next_byte();
    range_ <<= 8;
  }
}

std::uint32_t RangeDecoder::decode_target(std::uint32_t total) {
  scale_ = range_ / total;
  const std::uint32_t target = code_ / scale_;
  if (target >= total) throw CorruptStream("range decoder left the coding interval", pos_);
  return target;
}

void RangeDecoder::consume(std::uint32_t cum, std::uint32_t freq) {
  code_ -= scale_ * cum;
  range_ = scale_ * freq;
  normalize();
}

std::uint8_t RangeDecoder::decode_raw_byte() {
  const std::uint32_t b = decode_target(256);
  consume(b, 1);
  return static_cast<std::uint8_t>(b);
}

std::vector<std::uint8_t> encode_symbols(const ResidualSymbols& symbols, ContextSet& contexts) {
  if (symbols.symbols.size() > static_cast<std::size_t>(kFeatureSize)) {
    throw InvalidArgument("at most 256 symbols per frame");
  }
  if (symbols.symbols.empty()) return {};
  RangeEncoder enc;
  const int bound = contexts.symbol_bound();
  const int escape = contexts.escape_symbol();
  for (std::size_t i = 0; i < symbols.symbols.size(); ++i) {
    AdaptiveModel& model = contexts.model_for(static_cast<int>(i));
    const std::int32_t s = symbols.symbols[i];
    const bool in_alphabet = s >= -bound && s <= bound;
    const int m = in_alphabet ? static_cast<int>(zigzag_map(s)) : escape;
    enc.encode(model.cumulative(m), model.count(m), model.total());
    model.update(m);
    if (!in_alphabet) {
      const auto raw = static_cast<std::uint32_t>(s);
      for (int shift = 24; shift >= 0; shift -= 8) enc.encode_raw_byte(static_cast<std::uint8_t>(raw >> shift));
    }
  }
  return enc.finish();
}

ResidualSymbols decode_symbols(std::span<const std::uint8_t> bytes, int n_symbols, ContextSet& contexts) {
  if (n_symbols < 0 || n_symbols > kFeatureSize) throw InvalidArgument("symbol count outside [0, 256]");
  ResidualSymbols out{n_symbols, {}};
  if (n_symbols == 0) {
    if (!bytes.empty()) throw CorruptStream("bytes present for an empty symbol list", 0);
    return out;
  }
  out.symbols.resize(static_cast<std::size_t>(n_symbols));
  RangeDecoder dec(bytes);
  const int escape = contexts.escape_symbol();
  for (int i = 0; i < n_symbols; ++i) {
    AdaptiveModel& model = contexts.model_for(i);
    std::uint32_t cum = 0;
    const int m = model.find(dec.decode_target(model.total()), cum);
    dec.consume(cum, model.count(m));
    model.update(m);
    if (m == escape) {
      std::uint32_t raw = 0;
      for (int k = 0; k < 4; ++k) raw = (raw << 8) | dec.decode_raw_byte();
      out.symbols[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(raw);
    } else {
      out.symbols[static_cast<std::size_t>(i)] = zigzag_unmap(static_cast<std::uint32_t>(m));
    }
  }
  if (!dec.at_end()) throw CorruptStream("trailing bytes after the last symbol", dec.position());
  return out;
}

}  // namespace pfvc
