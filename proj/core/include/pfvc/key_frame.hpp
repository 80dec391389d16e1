#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "pfvc/media.hpp"

namespace pfvc {

// Key-frame payloads. The first byte selects the mode:
//   0x00 raw:       flags:u8 (bit 0 = 4:2:0 chroma follows), luma, [cb, cr]
//   0x01 transform: preset:u8, then a range-coded 8x8 DCT of the luma
//
// The six transform presets stand in for intra coding at QP
// 2/12/22/32/42/52; preset p quantizes with step 2^((QP_p - 4) / 6).
inline constexpr std::array<int, 6> kKeyPresetQp{2, 12, 22, 32, 42, 52};
inline constexpr int kKeyPresetCount = static_cast<int>(kKeyPresetQp.size());

enum class KeyMode : std::uint8_t { kRaw = 0, kTransform = 1 };

double key_preset_step(int preset);

// preset = nullopt stores the frame losslessly (chroma included).
std::vector<std::uint8_t> encode_key_frame(const Frame& frame, std::optional<int> preset);

Frame decode_key_frame(std::span<const std::uint8_t> payload, int width, int height);

}  // namespace pfvc
