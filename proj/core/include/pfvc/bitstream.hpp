#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace pfvc {

// Fixed-width little-endian container ("PFVC", version 1):
//
//   header   magic[4] version:u8 width:u16 height:u16 fps:u8
//            ladder_len:u8 ladder:u16[ladder_len] quant_step:u16 (Q8.8)
//            frame_count:u32
//   key      length:u32 bytes[length]               (opaque)
//   records  frame_count - 1 times:
//            gran_index:u8 payload_len:u24 payload[payload_len]
struct ContainerHeader {
  static constexpr std::array<std::uint8_t, 4> kMagic{'P', 'F', 'V', 'C'};
  static constexpr std::uint8_t kVersion = 1;

  std::uint16_t width = 0;
  std::uint16_t height = 0;
  std::uint8_t fps = 0;
  std::vector<std::uint16_t> ladder;
  std::uint16_t quant_step_q88 = 0;
  std::uint32_t frame_count = 0;

  std::size_t serialized_size() const noexcept { return 4 + 1 + 2 + 2 + 1 + 1 + 2 * ladder.size() + 2 + 4; }

  friend bool operator==(const ContainerHeader&, const ContainerHeader&) = default;
};

struct InterFrameRecord {
  static constexpr std::size_t kMaxPayload = (1u << 24) - 1;

  std::uint8_t gran_index = 0;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const InterFrameRecord&, const InterFrameRecord&) = default;
};

struct Container {
  ContainerHeader header;
  std::vector<std::uint8_t> key_payload;
  std::vector<InterFrameRecord> records;

  friend bool operator==(const Container&, const Container&) = default;
};

// Throws InvalidArgument when the record count is not frame_count - 1, the
// ladder is not strictly increasing, or a field does not fit its width.
std::vector<std::uint8_t> write_container(const Container& c);

// Strict parser; every failure is a CorruptStream carrying the byte offset
// and, inside the record section, the record index.
Container read_container(std::span<const std::uint8_t> bytes);

// total_bits * fps / frame_count / 1000
double measure_bitrate(std::size_t container_bytes, double fps, std::uint32_t frame_count);

}  // namespace pfvc
