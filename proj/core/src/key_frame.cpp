#include "pfvc/key_frame.hpp"

#include <algorithm>
#include <cmath>

#include "pfvc/entropy.hpp"
#include "pfvc/errors.hpp"
#include "pfvc/transform.hpp"

namespace pfvc {

namespace {

constexpr int kBlock = 8;
constexpr int kBlockArea = kBlock * kBlock;
constexpr int kLevelBound = 255;

const OrthoDct2d& block_dct() {
  static const OrthoDct2d dct(kBlock);
  return dct;
}

const std::vector<int>& block_scan() {
  static const std::vector<int> scan = zigzag_scan(kBlock);
  return scan;
}

// DC, then three AC bands along the scan.
int level_context(int scan_pos) {
  if (scan_pos == 0) return 0;
  if (scan_pos < 6) return 1;
  if (scan_pos < 21) return 2;
  return 3;
}

struct LevelModels {
  std::array<AdaptiveModel, 4> models{AdaptiveModel(2 * kLevelBound + 2), AdaptiveModel(2 * kLevelBound + 2),
                                      AdaptiveModel(2 * kLevelBound + 2), AdaptiveModel(2 * kLevelBound + 2)};
  static constexpr int kEscape = 2 * kLevelBound + 1;
};

void put_level(RangeEncoder& enc, AdaptiveModel& m, std::int32_t v) {
  const bool in_alphabet = v >= -kLevelBound && v <= kLevelBound;
  const int s = in_alphabet ? static_cast<int>(zigzag_map(v)) : LevelModels::kEscape;
  enc.encode(m.cumulative(s), m.count(s), m.total());
  m.update(s);
  if (!in_alphabet) {
    const auto raw = static_cast<std::uint32_t>(v);
    for (int shift = 24; shift >= 0; shift -= 8) enc.encode_raw_byte(static_cast<std::uint8_t>(raw >> shift));
  }
}

std::int32_t get_level(RangeDecoder& dec, AdaptiveModel& m) {
  std::uint32_t cum = 0;
  const int s = m.find(dec.decode_target(m.total()), cum);
  dec.consume(cum, m.count(s));
  m.update(s);
  if (s != LevelModels::kEscape) return zigzag_unmap(static_cast<std::uint32_t>(s));
  std::uint32_t raw = 0;
  for (int k = 0; k < 4; ++k) raw = (raw << 8) | dec.decode_raw_byte();
  return static_cast<std::int32_t>(raw);
}

void check_block_grid(int width, int height) {
  if (width % kBlock != 0 || height % kBlock != 0) {
    throw InvalidArgument("transform key frames need dimensions divisible by 8");
  }
}

}  // namespace

double key_preset_step(int preset) {
  if (preset < 0 || preset >= kKeyPresetCount) throw InvalidArgument("key budget preset outside [0, 6)");
  return std::exp2((kKeyPresetQp[static_cast<std::size_t>(preset)] - 4) / 6.0);
}

std::vector<std::uint8_t> encode_key_frame(const Frame& frame, std::optional<int> preset) {
  if (!preset) {
    std::vector<std::uint8_t> out{static_cast<std::uint8_t>(KeyMode::kRaw),
                                  static_cast<std::uint8_t>(frame.chroma() ? 1 : 0)};
    out.insert(out.end(), frame.luma().begin(), frame.luma().end());
    if (frame.chroma()) {
      out.insert(out.end(), frame.chroma()->cb.begin(), frame.chroma()->cb.end());
      out.insert(out.end(), frame.chroma()->cr.begin(), frame.chroma()->cr.end());
    }
    return out;
  }
  const double step = key_preset_step(*preset);
  check_block_grid(frame.width(), frame.height());

  RangeEncoder enc;
  LevelModels lm;
  const auto& scan = block_scan();
  std::array<double, kBlockArea> block{}, coeffs{};
  std::int32_t prev_dc = 0;
  for (int by = 0; by < frame.height(); by += kBlock) {
    for (int bx = 0; bx < frame.width(); bx += kBlock) {
      for (int y = 0; y < kBlock; ++y)
        for (int x = 0; x < kBlock; ++x) block[y * kBlock + x] = frame.at(bx + x, by + y) - 128.0;
      block_dct().forward(block, coeffs);
      for (int k = 0; k < kBlockArea; ++k) {
        const auto level = static_cast<std::int32_t>(std::lround(coeffs[scan[k]] / step));
        if (k == 0) {
          put_level(enc, lm.models[0], level - prev_dc);
          prev_dc = level;
        } else {
          put_level(enc, lm.models[level_context(k)], level);
        }
      }
    }
  }
  std::vector<std::uint8_t> out{static_cast<std::uint8_t>(KeyMode::kTransform), static_cast<std::uint8_t>(*preset)};
  const auto body = enc.finish();
  out.insert(out.end(), body.begin(), body.end());
  return out;
}

Frame decode_key_frame(std::span<const std::uint8_t> payload, int width, int height) {
  if (payload.size() < 2) throw CorruptStream("key payload shorter than its 2-byte preamble", payload.size());
  const std::size_t luma_size = static_cast<std::size_t>(width) * height;
  switch (static_cast<KeyMode>(payload[0])) {
    case KeyMode::kRaw: {
      const bool chroma = payload[1] & 1;
      const std::size_t cplane = chroma ? static_cast<std::size_t>(width / 2) * (height / 2) : 0;
      if (payload.size() != 2 + luma_size + 2 * cplane) {
        throw CorruptStream("raw key payload size does not match the frame dimensions", payload.size());
      }
      auto it = payload.begin() + 2;
      std::vector<std::uint8_t> luma(it, it + static_cast<std::ptrdiff_t>(luma_size));
      std::optional<ChromaPlanes> planes;
      if (chroma) {
        it += static_cast<std::ptrdiff_t>(luma_size);
        planes = ChromaPlanes{{it, it + static_cast<std::ptrdiff_t>(cplane)},
                              {it + static_cast<std::ptrdiff_t>(cplane), it + static_cast<std::ptrdiff_t>(2 * cplane)}};
      }
      return Frame(width, height, std::move(luma), std::move(planes));
    }
    case KeyMode::kTransform: {
      if (payload[1] >= kKeyPresetCount) throw CorruptStream("unknown key preset", 1);
      const double step = key_preset_step(payload[1]);
      check_block_grid(width, height);
      RangeDecoder dec(payload.subspan(2));
      LevelModels lm;
      const auto& scan = block_scan();
      std::array<double, kBlockArea> coeffs{}, block{};
      std::vector<std::uint8_t> luma(luma_size);
      std::int32_t prev_dc = 0;
      for (int by = 0; by < height; by += kBlock) {
        for (int bx = 0; bx < width; bx += kBlock) {
          for (int k = 0; k < kBlockArea; ++k) {
            std::int32_t level = 0;
            if (k == 0) {
              // wraps instead of overflowing on corrupt input
              level = static_cast<std::int32_t>(static_cast<std::uint32_t>(prev_dc) +
                                                static_cast<std::uint32_t>(get_level(dec, lm.models[0])));
              prev_dc = level;
            } else {
              level = get_level(dec, lm.models[level_context(k)]);
            }
            coeffs[scan[k]] = level * step;
          }
          block_dct().inverse(coeffs, block);
          for (int y = 0; y < kBlock; ++y)
            for (int x = 0; x < kBlock; ++x) {
              const double v = std::clamp(std::round(block[y * kBlock + x] + 128.0), 0.0, 255.0);
              luma[static_cast<std::size_t>(by + y) * width + bx + x] = static_cast<std::uint8_t>(v);
            }
        }
      }
      if (!dec.at_end()) throw CorruptStream("trailing bytes in key payload", 2 + dec.position());
      return Frame(width, height, std::move(luma));
    }
  }
  throw CorruptStream("unknown key payload mode", 0);
}

}  // namespace pfvc
