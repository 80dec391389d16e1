#include "pfvc/tokenizer.hpp"

#include <algorithm>
#include <cmath>

#include "pfvc/errors.hpp"
#include "pfvc/transform.hpp"

namespace pfvc {

namespace {

const OrthoDct2d& feature_dct() {
  static const OrthoDct2d dct(kFeatureSide);
  return dct;
}

const std::array<int, kFeatureSize>& zigzag_table() {
  static const std::array<int, kFeatureSize> table = [] {
    std::array<int, kFeatureSize> t{};
    const auto scan = zigzag_scan(kFeatureSide);
    std::copy(scan.begin(), scan.end(), t.begin());
    return t;
  }();
  return table;
}

void require_finite(std::span<const double> v, const char* what) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidArgument(std::string(what) + " contains a non-finite value");
  }
}

}  // namespace

MotionFeature::MotionFeature(std::span<const double> values) {
  if (values.size() != kFeatureSize) throw InvalidArgument("motion feature needs exactly 256 values");
  require_finite(values, "motion feature");
  std::copy(values.begin(), values.end(), grid_.begin());
}

MotionFeature MotionFeature::constant(double c) {
  MotionFeature f;
  f.grid_.fill(c);
  return f;
}

GranularityLadder::GranularityLadder() : levels_{16, 64, 144, 256} {}

GranularityLadder::GranularityLadder(std::initializer_list<int> levels)
    : GranularityLadder(std::vector<int>(levels)) {}

GranularityLadder::GranularityLadder(std::vector<int> levels) : levels_(std::move(levels)) {
  if (levels_.empty()) throw InvalidArgument("granularity ladder is empty");
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (levels_[i] < 1 || levels_[i] > kFeatureSize) {
      throw InvalidArgument("granularity " + std::to_string(levels_[i]) + " outside [1, 256]");
    }
    if (i > 0 && levels_[i] <= levels_[i - 1]) {
      throw InvalidArgument("granularity ladder must be strictly increasing");
    }
  }
}

bool GranularityLadder::contains(int g) const noexcept {
  return std::binary_search(levels_.begin(), levels_.end(), g);
}

std::size_t GranularityLadder::index_of(int g) const {
  const auto it = std::lower_bound(levels_.begin(), levels_.end(), g);
  if (it == levels_.end() || *it != g) {
    throw InvalidArgument("granularity " + std::to_string(g) + " is not on the ladder");
  }
  return static_cast<std::size_t>(it - levels_.begin());
}

TokenVector::TokenVector(int g_, std::vector<double> coeffs_) : g(g_), coeffs(std::move(coeffs_)) {
  if (g < 1 || g > kFeatureSize) throw InvalidArgument("token granularity outside [1, 256]");
  if (coeffs.size() != static_cast<std::size_t>(g)) {
    throw InvalidArgument("token vector length " + std::to_string(coeffs.size()) +
                          " does not match granularity " + std::to_string(g));
  }
  require_finite(coeffs, "token vector");
}

Frame downsample(const Frame& frame, int s) {
  if (s < 1) throw InvalidArgument("downsample factor must be >= 1");
  if (frame.width() % s != 0 || frame.height() % s != 0) {
    throw InvalidArgument("frame dimensions not divisible by downsample factor " + std::to_string(s));
  }
  if (s == 1) return frame.luma_only();
  const int ow = frame.width() / s;
  const int oh = frame.height() / s;
  const unsigned area = static_cast<unsigned>(s * s);
  std::vector<unsigned> acc(static_cast<std::size_t>(ow) * oh, 0);
  const auto src = frame.luma();
  for (int y = 0; y < frame.height(); ++y) {
    unsigned* row = acc.data() + static_cast<std::size_t>(y / s) * ow;
    const std::uint8_t* in = src.data() + static_cast<std::size_t>(y) * frame.width();
    for (int x = 0; x < frame.width(); ++x) row[x / s] += in[x];
  }
  std::vector<std::uint8_t> out(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) {
    out[i] = static_cast<std::uint8_t>((acc[i] + area / 2) / area);
  }
  return Frame(ow, oh, std::move(out));
}

MotionFeature extract_motion_feature(const Frame& frame) {
  if (frame.width() % kFeatureSide != 0 || frame.height() % kFeatureSide != 0) {
    throw InvalidArgument("frame dimensions must be multiples of 16 for feature extraction");
  }
  const int bw = frame.width() / kFeatureSide;
  const int bh = frame.height() / kFeatureSide;
  std::array<std::uint64_t, kFeatureSize> sums{};
  const auto src = frame.luma();
  for (int y = 0; y < frame.height(); ++y) {
    const std::uint8_t* in = src.data() + static_cast<std::size_t>(y) * frame.width();
    std::uint64_t* row = sums.data() + static_cast<std::size_t>(y / bh) * kFeatureSide;
    for (int x = 0; x < frame.width(); ++x) row[x / bw] += in[x];
  }
  MotionFeature f;
  const double norm = 255.0 * bw * bh;
  for (int i = 0; i < kFeatureSize; ++i) f.values()[i] = static_cast<double>(sums[i]) / norm;
  return f;
}

MotionFeature frame_to_feature(const Frame& frame, int scale) {
  return extract_motion_feature(downsample(frame, scale));
}

TokenVector tokenize(const MotionFeature& feature, int g, const GranularityLadder& ladder) {
  if (!ladder.contains(g)) throw InvalidArgument("granularity " + std::to_string(g) + " is not on the ladder");
  std::array<double, kFeatureSize> coeffs{};
  feature_dct().forward(feature.values(), coeffs);
  const auto& zz = zigzag_table();
  std::vector<double> out(static_cast<std::size_t>(g));
  for (int i = 0; i < g; ++i) out[i] = coeffs[zz[i]];
  return TokenVector(g, std::move(out));
}

MotionFeature detokenize(const TokenVector& tokens) {
  std::array<double, kFeatureSize> coeffs{};
  const auto& zz = zigzag_table();
  for (int i = 0; i < tokens.g; ++i) coeffs[zz[i]] = tokens.coeffs[i];
  MotionFeature f;
  feature_dct().inverse(coeffs, f.values());
  return f;
}

TokenVector truncate_tokens(const TokenVector& tokens, int g) {
  if (g < 1 || g > tokens.g) {
    throw InvalidArgument("cannot truncate granularity " + std::to_string(tokens.g) + " to " +
                          std::to_string(g));
  }
  return TokenVector(g, std::vector<double>(tokens.coeffs.begin(), tokens.coeffs.begin() + g));
}

std::span<const int, kFeatureSize> feature_zigzag() { return zigzag_table(); }

}  // namespace pfvc
