#include "pfvc/media.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>

#include "json.hpp"
#include "pfvc/errors.hpp"
#include "pfvc/rng.hpp"

namespace pfvc {

namespace {

void check_dimensions(int width, int height) {
  if (width < kMinFrameSide || height < kMinFrameSide) {
    throw InvalidArgument("frame dimensions " + std::to_string(width) + "x" +
                          std::to_string(height) + " below minimum of 16x16");
  }
}

std::size_t chroma_plane_size(int width, int height) {
  return static_cast<std::size_t>(width / 2) * static_cast<std::size_t>(height / 2);
}

}  // namespace

Frame::Frame(int width, int height, std::vector<std::uint8_t> luma,
             std::optional<ChromaPlanes> chroma)
    : width_(width), height_(height), luma_(std::move(luma)), chroma_(std::move(chroma)) {
  check_dimensions(width, height);
  if (luma_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw InvalidArgument("luma plane holds " + std::to_string(luma_.size()) +
                          " samples, expected " + std::to_string(width * height));
  }
  if (chroma_) {
    const std::size_t n = chroma_plane_size(width, height);
    if (chroma_->cb.size() != n || chroma_->cr.size() != n) {
      throw InvalidArgument("chroma planes must be (width/2)x(height/2)");
    }
  }
}

Frame Frame::filled(int width, int height, std::uint8_t value) {
  check_dimensions(width, height);
  return Frame(width, height,
               std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height, value));
}

Sequence::Sequence(std::vector<Frame> frames, double fps) : frames_(std::move(frames)), fps_(fps) {
  if (frames_.empty()) throw InvalidArgument("sequence needs at least one frame");
  if (!(fps_ > 0.0) || !std::isfinite(fps_)) throw InvalidArgument("fps must be positive");
  for (const Frame& f : frames_) {
    if (f.width() != frames_.front().width() || f.height() != frames_.front().height()) {
      throw InvalidArgument("all frames of a sequence must share dimensions");
    }
  }
}

Sequence load_raw_sequence(std::span<const std::uint8_t> bytes, int width, int height,
                           double fps, RawLayout layout) {
  if (width <= 0 || height <= 0) throw InvalidArgument("zero frame dimension");
  check_dimensions(width, height);
  const std::size_t luma_size = static_cast<std::size_t>(width) * height;
  const std::size_t cplane = layout == RawLayout::kYuv420 ? chroma_plane_size(width, height) : 0;
  const std::size_t frame_size = luma_size + 2 * cplane;
  if (bytes.empty()) throw CorruptStream("empty raw stream", 0);
  if (bytes.size() % frame_size != 0) {
    throw CorruptStream("truncated raw stream: " + std::to_string(bytes.size()) +
                            " bytes is not a multiple of the " + std::to_string(frame_size) +
                            "-byte frame size",
                        bytes.size() - bytes.size() % frame_size);
  }
  std::vector<Frame> frames;
  frames.reserve(bytes.size() / frame_size);
  for (std::size_t off = 0; off < bytes.size(); off += frame_size) {
    auto plane = [&](std::size_t begin, std::size_t n) {
      return std::vector<std::uint8_t>(bytes.begin() + static_cast<std::ptrdiff_t>(begin),
                                       bytes.begin() + static_cast<std::ptrdiff_t>(begin + n));
    };
    std::optional<ChromaPlanes> chroma;
    if (cplane) chroma = ChromaPlanes{plane(off + luma_size, cplane), plane(off + luma_size + cplane, cplane)};
    frames.emplace_back(width, height, plane(off, luma_size), std::move(chroma));
  }
  return Sequence(std::move(frames), fps);
}

std::vector<std::uint8_t> save_raw_sequence(const Sequence& seq, RawLayout layout) {
  std::vector<std::uint8_t> out;
  for (const Frame& f : seq.frames()) {
    out.insert(out.end(), f.luma().begin(), f.luma().end());
    if (layout == RawLayout::kYuv420) {
      if (!f.chroma()) throw InvalidArgument("4:2:0 output requested but a frame has no chroma");
      out.insert(out.end(), f.chroma()->cb.begin(), f.chroma()->cb.end());
      out.insert(out.end(), f.chroma()->cr.begin(), f.chroma()->cr.end());
    }
  }
  return out;
}

std::string descriptor_to_json(const RawDescriptor& d) {
  nlohmann::json j = {{"width", d.width}, {"height", d.height}, {"fps", d.fps}, {"frames", d.frames}};
  return j.dump(2) + "\n";
}

RawDescriptor descriptor_from_json(const std::string& text) {
  try {
    const auto j = nlohmann::json::parse(text);
    RawDescriptor d;
    d.width = j.at("width").get<int>();
    d.height = j.at("height").get<int>();
    d.fps = j.at("fps").get<double>();
    d.frames = j.value("frames", 0);
    return d;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("bad sidecar: ") + e.what());
  }
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot create " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw InvalidArgument("write failed for " + path.string());
}

std::optional<SynthKind> parse_synth_kind(std::string_view name) {
  if (name == "translating-texture") return SynthKind::kTranslatingTexture;
  if (name == "moving-blob") return SynthKind::kMovingBlob;
  if (name == "static") return SynthKind::kStatic;
  return std::nullopt;
}

namespace {

// Sum of low-frequency plane waves with integer cycle counts, so the
// texture tiles seamlessly in both directions.
std::vector<std::uint8_t> periodic_texture(int width, int height, CounterRng& rng) {
  constexpr int kModes = 12;
  constexpr int kMaxCycles = 4;
  struct Mode {
    int kx, ky;
    double amplitude, phase;
  };
  std::vector<Mode> modes;
  while (static_cast<int>(modes.size()) < kModes) {
    const int kx = static_cast<int>(rng.next_below(2 * kMaxCycles + 1)) - kMaxCycles;
    const int ky = static_cast<int>(rng.next_below(2 * kMaxCycles + 1)) - kMaxCycles;
    const double a = 0.5 + 0.5 * rng.next_unit();
    const double phase = 2.0 * std::numbers::pi * rng.next_unit();
    if (kx == 0 && ky == 0) continue;
    modes.push_back({kx, ky, a / std::hypot(kx, ky), phase});
  }
  std::vector<double> t(static_cast<std::size_t>(width) * height, 0.0);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double v = 0.0;
      for (const Mode& m : modes) {
        v += m.amplitude * std::cos(2.0 * std::numbers::pi *
                                        (static_cast<double>(m.kx) * x / width +
                                         static_cast<double>(m.ky) * y / height) +
                                    m.phase);
      }
      t[static_cast<std::size_t>(y) * width + x] = v;
    }
  }
  const auto [lo, hi] = std::minmax_element(t.begin(), t.end());
  const double lo_v = *lo, span = std::max(*hi - *lo, 1e-12);
  std::vector<std::uint8_t> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    out[i] = static_cast<std::uint8_t>(std::lround(30.0 + 195.0 * (t[i] - lo_v) / span));
  }
  return out;
}

Frame shifted_texture(const std::vector<std::uint8_t>& tex, int width, int height, int shift) {
  std::vector<std::uint8_t> luma(tex.size());
  const int s = ((shift % width) + width) % width;
  for (int y = 0; y < height; ++y) {
    const std::uint8_t* row = tex.data() + static_cast<std::size_t>(y) * width;
    std::uint8_t* dst = luma.data() + static_cast<std::size_t>(y) * width;
    for (int x = 0; x < width; ++x) dst[x] = row[(x + s) % width];
  }
  return Frame(width, height, std::move(luma));
}

Frame blob_frame(int width, int height, double cx, double cy, double sigma) {
  constexpr double kBackground = 48.0;
  constexpr double kPeak = 160.0;
  std::vector<std::uint8_t> luma(static_cast<std::size_t>(width) * height);
  cx = std::fmod(std::fmod(cx, width) + width, width);
  cy = std::fmod(std::fmod(cy, height) + height, height);
  for (int y = 0; y < height; ++y) {
    double dy = std::abs(y - cy);
    dy = std::min(dy, height - dy);
    for (int x = 0; x < width; ++x) {
      double dx = std::abs(x - cx);
      dx = std::min(dx, width - dx);
      const double v = kBackground + kPeak * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
      luma[static_cast<std::size_t>(y) * width + x] = static_cast<std::uint8_t>(std::lround(v));
    }
  }
  return Frame(width, height, std::move(luma));
}

}  // namespace

Sequence synth_sequence(SynthKind kind, int n_frames, int width, int height, std::uint64_t seed,
                        double fps) {
  if (n_frames < 1) throw InvalidArgument("n_frames must be >= 1");
  check_dimensions(width, height);
  CounterRng rng(seed);
  std::vector<Frame> frames;
  frames.reserve(static_cast<std::size_t>(n_frames));
  switch (kind) {
    case SynthKind::kTranslatingTexture: {
      const auto tex = periodic_texture(width, height, rng);
      for (int t = 0; t < n_frames; ++t) frames.push_back(shifted_texture(tex, width, height, t));
      break;
    }
    case SynthKind::kStatic: {
      const auto tex = periodic_texture(width, height, rng);
      frames.assign(static_cast<std::size_t>(n_frames), Frame(width, height, tex));
      break;
    }
    case SynthKind::kMovingBlob: {
      const double x0 = rng.next_unit() * width;
      const double y0 = rng.next_unit() * height;
      const double angle = 2.0 * std::numbers::pi * rng.next_unit();
      const double speed = 0.5 + 1.5 * rng.next_unit();
      const double sigma = std::min(width, height) / 10.0;
      for (int t = 0; t < n_frames; ++t) {
        frames.push_back(blob_frame(width, height, x0 + speed * std::cos(angle) * t,
                                    y0 + speed * std::sin(angle) * t, sigma));
      }
      break;
    }
  }
  return Sequence(std::move(frames), fps);
}

}  // namespace pfvc
