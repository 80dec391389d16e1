#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace pfvc {

inline constexpr int kMinFrameSide = 16;

// 4:2:0 chroma, each plane (width/2)x(height/2). Only carried through the
// raw key-frame payload; the codec core works on luma.
struct ChromaPlanes {
  std::vector<std::uint8_t> cb;
  std::vector<std::uint8_t> cr;

  friend bool operator==(const ChromaPlanes&, const ChromaPlanes&) = default;
};

// 8-bit luma raster, row-major.
class Frame {
 public:
  Frame(int width, int height, std::vector<std::uint8_t> luma,
        std::optional<ChromaPlanes> chroma = std::nullopt);

  static Frame filled(int width, int height, std::uint8_t value);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t pixel_count() const noexcept { return luma_.size(); }

  std::span<const std::uint8_t> luma() const noexcept { return luma_; }
  std::span<std::uint8_t> luma() noexcept { return luma_; }

  std::uint8_t at(int x, int y) const noexcept { return luma_[static_cast<std::size_t>(y) * width_ + x]; }
  std::uint8_t& at(int x, int y) noexcept { return luma_[static_cast<std::size_t>(y) * width_ + x]; }

  const std::optional<ChromaPlanes>& chroma() const noexcept { return chroma_; }
  Frame luma_only() const { return Frame(width_, height_, luma_); }

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  int width_;
  int height_;
  std::vector<std::uint8_t> luma_;
  std::optional<ChromaPlanes> chroma_;
};

class Sequence {
 public:
  Sequence(std::vector<Frame> frames, double fps);

  const std::vector<Frame>& frames() const noexcept { return frames_; }
  const Frame& operator[](std::size_t i) const { return frames_[i]; }
  std::size_t size() const noexcept { return frames_.size(); }
  double fps() const noexcept { return fps_; }
  int width() const noexcept { return frames_.front().width(); }
  int height() const noexcept { return frames_.front().height(); }

  friend bool operator==(const Sequence&, const Sequence&) = default;

 private:
  std::vector<Frame> frames_;
  double fps_;
};

enum class RawLayout { kLuma, kYuv420 };

// Planar 8-bit input: frames back to back, luma plane first, then Cb and
// Cr when the layout is 4:2:0.
Sequence load_raw_sequence(std::span<const std::uint8_t> bytes, int width, int height,
                           double fps, RawLayout layout = RawLayout::kLuma);

// Writes chroma only for kYuv420, which requires every frame to carry it.
std::vector<std::uint8_t> save_raw_sequence(const Sequence& seq,
                                            RawLayout layout = RawLayout::kLuma);

// JSON sidecar {width, height, fps, frames} describing a raw file.
struct RawDescriptor {
  int width = 0;
  int height = 0;
  double fps = 0.0;
  int frames = 0;

  friend bool operator==(const RawDescriptor&, const RawDescriptor&) = default;
};

std::string descriptor_to_json(const RawDescriptor& d);
RawDescriptor descriptor_from_json(const std::string& text);

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);

enum class SynthKind { kTranslatingTexture, kMovingBlob, kStatic };

std::optional<SynthKind> parse_synth_kind(std::string_view name);

// Deterministic test material. translating-texture: frame t samples a
// smooth, horizontally periodic random texture at (x + t) mod width, i.e.
// content moves one pixel left per frame and frame t+1 equals frame t
// cyclically shifted by (1, 0). moving-blob: Gaussian bump on a straight
// (toroidally wrapped) path over a flat background. static: frame 0
// repeated.
Sequence synth_sequence(SynthKind kind, int n_frames, int width, int height,
                        std::uint64_t seed, double fps = 25.0);

}  // namespace pfvc
