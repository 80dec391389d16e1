#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "pfvc/media.hpp"

namespace pfvc {

inline constexpr int kFeatureSide = 16;
inline constexpr int kFeatureSize = kFeatureSide * kFeatureSide;
inline constexpr int kFeatureScale = 4;

// 16x16 motion feature, row-major, values nominally in [0, 1].
class MotionFeature {
 public:
  MotionFeature() { grid_.fill(0.0); }
  explicit MotionFeature(std::span<const double> values);

  static MotionFeature constant(double c);

  double at(int row, int col) const noexcept { return grid_[static_cast<std::size_t>(row) * kFeatureSide + col]; }
  double& at(int row, int col) noexcept { return grid_[static_cast<std::size_t>(row) * kFeatureSide + col]; }
  std::span<const double, kFeatureSize> values() const noexcept { return grid_; }
  std::span<double, kFeatureSize> values() noexcept { return grid_; }

  friend bool operator==(const MotionFeature&, const MotionFeature&) = default;

 private:
  std::array<double, kFeatureSize> grid_;
};

// Token dimensions a stream may switch between. Strictly increasing,
// positive, at most 256.
class GranularityLadder {
 public:
  GranularityLadder();  // {16, 64, 144, 256}
  GranularityLadder(std::initializer_list<int> levels);
  explicit GranularityLadder(std::vector<int> levels);

  std::span<const int> levels() const noexcept { return levels_; }
  std::size_t size() const noexcept { return levels_.size(); }
  int operator[](std::size_t i) const { return levels_[i]; }
  int smallest() const noexcept { return levels_.front(); }
  int largest() const noexcept { return levels_.back(); }
  bool contains(int g) const noexcept;
  // Throws InvalidArgument when g is not a level.
  std::size_t index_of(int g) const;

  friend bool operator==(const GranularityLadder&, const GranularityLadder&) = default;

 private:
  std::vector<int> levels_;
};

struct TokenVector {
  TokenVector(int g, std::vector<double> coeffs);

  int g;
  std::vector<double> coeffs;

  friend bool operator==(const TokenVector&, const TokenVector&) = default;
};

// Mean of each s x s block, rounded half up.
Frame downsample(const Frame& frame, int s);

// Block-mean pooling onto a 16x16 grid, scaled by 1/255. Dimensions must
// be multiples of 16.
MotionFeature extract_motion_feature(const Frame& frame);

// Codec feature path: downsample by `scale`, then pool to 16x16.
MotionFeature frame_to_feature(const Frame& frame, int scale = kFeatureScale);

// Orthonormal 2-D DCT of the grid read out in zigzag order and cut to the
// first g coefficients, so every level is a prefix of the 256-level vector.
TokenVector tokenize(const MotionFeature& feature, int g,
                     const GranularityLadder& ladder = GranularityLadder());

// Zero-pads to 256 coefficients and inverts the transform.
MotionFeature detokenize(const TokenVector& tokens);

TokenVector truncate_tokens(const TokenVector& tokens, int g);

// Zigzag position -> row-major index in the 16x16 grid.
std::span<const int, kFeatureSize> feature_zigzag();

}  // namespace pfvc
