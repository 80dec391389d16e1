#include "pfvc/bitstream.hpp"

#include <algorithm>
#include <string>

#include "pfvc/errors.hpp"

namespace pfvc {

namespace {

class ByteWriter {
 public:
  explicit ByteWriter(std::size_t reserve) { out_.reserve(reserve); }
  void u8(std::uint8_t v) { out_.push_back(v); }
  void le(std::uint32_t v, int n) {
    for (int i = 0; i < n; ++i) out_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
  void bytes(std::span<const std::uint8_t> b) { out_.insert(out_.end(), b.begin(), b.end()); }
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> b) : b_(b) {}

  void set_record(std::optional<std::size_t> r) { record_ = r; }
  std::size_t offset() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return b_.size() - pos_; }

  [[noreturn]] void fail(const std::string& what) const { throw CorruptStream(what, pos_, record_); }

  void need(std::size_t n, const char* field) const {
    if (remaining() < n) fail(std::string("truncated stream while reading ") + field);
  }
  std::uint32_t le(int n, const char* field) {
    need(static_cast<std::size_t>(n), field);
    std::uint32_t v = 0;
    for (int i = 0; i < n; ++i) v |= static_cast<std::uint32_t>(b_[pos_ + i]) << (8 * i);
    pos_ += static_cast<std::size_t>(n);
    return v;
  }
  std::vector<std::uint8_t> bytes(std::size_t n, const char* field) {
    need(n, field);
    std::vector<std::uint8_t> v(b_.begin() + static_cast<std::ptrdiff_t>(pos_),
                                b_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return v;
  }

 private:
  std::span<const std::uint8_t> b_;
  std::size_t pos_ = 0;
  std::optional<std::size_t> record_;
};

bool ladder_valid(const std::vector<std::uint16_t>& ladder) {
  if (ladder.empty() || ladder.size() > 255 || ladder.front() == 0) return false;
  for (std::size_t i = 1; i < ladder.size(); ++i) {
    if (ladder[i] <= ladder[i - 1]) return false;
  }
  return true;
}

}  // namespace

std::vector<std::uint8_t> write_container(const Container& c) {
  const ContainerHeader& h = c.header;
  if (!ladder_valid(h.ladder)) throw InvalidArgument("container ladder must be non-empty and strictly increasing");
  if (h.frame_count < 1) throw InvalidArgument("frame_count must be >= 1");
  if (c.records.size() != static_cast<std::size_t>(h.frame_count) - 1) {
    throw InvalidArgument("record count " + std::to_string(c.records.size()) + " does not match frame_count - 1 = " +
                          std::to_string(h.frame_count - 1));
  }
  if (c.key_payload.size() > 0xFFFFFFFFu) throw InvalidArgument("key payload too large");

  std::size_t total = h.serialized_size() + 4 + c.key_payload.size();
  for (const auto& r : c.records) total += 4 + r.payload.size();

  ByteWriter w(total);
  w.bytes(ContainerHeader::kMagic);
  w.u8(ContainerHeader::kVersion);
  w.le(h.width, 2);
  w.le(h.height, 2);
  w.u8(h.fps);
  w.u8(static_cast<std::uint8_t>(h.ladder.size()));
  for (auto g : h.ladder) w.le(g, 2);
  w.le(h.quant_step_q88, 2);
  w.le(h.frame_count, 4);
  w.le(static_cast<std::uint32_t>(c.key_payload.size()), 4);
  w.bytes(c.key_payload);
  for (std::size_t i = 0; i < c.records.size(); ++i) {
    const auto& r = c.records[i];
    if (r.gran_index >= h.ladder.size()) {
      throw InvalidArgument("record " + std::to_string(i) + " references granularity index " +
                            std::to_string(r.gran_index) + " outside the ladder");
    }
    if (r.payload.size() > InterFrameRecord::kMaxPayload) {
      throw InvalidArgument("record " + std::to_string(i) + " payload exceeds 16 MiB");
    }
    w.u8(r.gran_index);
    w.le(static_cast<std::uint32_t>(r.payload.size()), 3);
    w.bytes(r.payload);
  }
  return w.take();
}

Container read_container(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  Container c;
  ContainerHeader& h = c.header;

  r.need(4, "magic");
  if (!std::equal(ContainerHeader::kMagic.begin(), ContainerHeader::kMagic.end(), bytes.begin())) {
    r.fail("bad magic");
  }
  r.bytes(4, "magic");
  const auto version = r.le(1, "version");
  if (version != ContainerHeader::kVersion) r.fail("unsupported version " + std::to_string(version));
  h.width = static_cast<std::uint16_t>(r.le(2, "width"));
  h.height = static_cast<std::uint16_t>(r.le(2, "height"));
  h.fps = static_cast<std::uint8_t>(r.le(1, "fps"));
  const auto ladder_len = r.le(1, "ladder_len");
  for (std::uint32_t i = 0; i < ladder_len; ++i) h.ladder.push_back(static_cast<std::uint16_t>(r.le(2, "ladder")));
  if (!ladder_valid(h.ladder)) r.fail("invalid granularity ladder");
  h.quant_step_q88 = static_cast<std::uint16_t>(r.le(2, "quant_step"));
  h.frame_count = r.le(4, "frame_count");
  if (h.frame_count < 1) r.fail("frame_count must be >= 1");

  const auto key_len = r.le(4, "key payload length");
  c.key_payload = r.bytes(key_len, "key payload");

  // Reserve only what the remaining bytes could possibly hold.
  c.records.reserve(std::min<std::size_t>(h.frame_count - 1, r.remaining() / 4));
  for (std::uint32_t i = 0; i + 1 < h.frame_count; ++i) {
    r.set_record(i);
    InterFrameRecord rec;
    rec.gran_index = static_cast<std::uint8_t>(r.le(1, "gran_index"));
    if (rec.gran_index >= h.ladder.size()) r.fail("gran_index out of range");
    const auto len = r.le(3, "payload_len");
    rec.payload = r.bytes(len, "payload");
    c.records.push_back(std::move(rec));
  }
  r.set_record(std::nullopt);
  if (r.remaining() != 0) r.fail("trailing bytes after the last record");
  return c;
}

double measure_bitrate(std::size_t container_bytes, double fps, std::uint32_t frame_count) {
  if (frame_count < 1) throw InvalidArgument("frame_count must be >= 1");
  const double bits = 8.0 * static_cast<double>(container_bytes);
  return bits * fps / static_cast<double>(frame_count) / 1000.0;
}

}  // namespace pfvc
