#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pfvc/media.hpp"
#include "pfvc/tokenizer.hpp"

namespace pfvc {

inline constexpr double kFlowEpsilon = 1e-3;
inline constexpr double kOcclusionSigma = 0.1;
// Motion is estimated at key resolution / kWorkingScale.
inline constexpr int kWorkingScale = 4;

// Row-major real-valued plane.
struct RealGrid {
  RealGrid() = default;
  RealGrid(int w, int h, double fill = 0.0)
      : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {}
  // v must hold w * h samples.
  RealGrid(int w, int h, std::vector<double> v) : width(w), height(h), values(std::move(v)) {}

  double at(int x, int y) const noexcept { return values[static_cast<std::size_t>(y) * width + x]; }
  double& at(int x, int y) noexcept { return values[static_cast<std::size_t>(y) * width + x]; }

  int width = 0;
  int height = 0;
  std::vector<double> values;

  friend bool operator==(const RealGrid&, const RealGrid&) = default;
};

// Per-pixel displacement used by back-warping: output(x) samples the
// reference at x + (dx, dy).
struct DenseMotionField {
  int width = 0;
  int height = 0;
  std::vector<double> dx;
  std::vector<double> dy;
};

struct OcclusionMap {
  int width = 0;
  int height = 0;
  std::vector<double> weights;  // in [0, 1]
};

struct FeatureDiff {
  RealGrid grid;
};

// Bilinear resampling with pixel-centre alignment and edge clamping.
// Constant inputs stay exactly constant; equal sizes are the identity.
RealGrid resample_bilinear(const RealGrid& src, int target_w, int target_h);

RealGrid upsample_feature(const MotionFeature& feature, int target_w, int target_h);

// upsample(f_inter) - upsample(f_key)
FeatureDiff feature_diff(const MotionFeature& f_inter, const MotionFeature& f_key, int target_w, int target_h);

// Gradient-constrained flow on the normalised key luma:
//   d(x) = diff(x) * grad K(x) / (|grad K(x)|^2 + eps)
// with central differences, followed by one 3x3 box pass. For content
// that moved so that inter(x) = key(x + v), this recovers the component of
// v along the gradient, which is what back-warping needs.
DenseMotionField predict_motion(const Frame& key_small, const FeatureDiff& diff);

// w(x) = exp(-|diff(x)| / sigma)
OcclusionMap predict_occlusion(const Frame& key_small, const FeatureDiff& diff);

// Bilinear back-warp with coordinates clamped to the frame.
RealGrid warp_samples(const Frame& frame, const DenseMotionField& field);
Frame warp(const Frame& frame, const DenseMotionField& field);

// Refinement stage after masking. Regions attenuated by the occlusion map
// are filled from their neighbourhood by normalised convolution:
//   out = m + (1 - w) * S(m) / S(w)
// where m is the masked frame and S three 3x3 box passes. Where w == 1
// the input passes through unchanged.
RealGrid refine_occluded(const RealGrid& masked, std::span<const double> weights);

// Key-frame side of reconstruction, reusable across all inter frames of a
// stream: the key frame, its working-resolution copy and gradients, and its
// g = 256 token vector.
class KeyReference {
 public:
  KeyReference(Frame key, TokenVector key_tokens);

  const Frame& key() const noexcept { return key_; }
  const Frame& key_small() const noexcept { return key_small_; }
  const TokenVector& tokens() const noexcept { return tokens_; }

  // Key tokens truncated to g, detokenized and upsampled to working
  // resolution.
  RealGrid key_feature_at(int g) const;

  const RealGrid& grad_x() const noexcept { return grad_x_; }
  const RealGrid& grad_y() const noexcept { return grad_y_; }

  // Key luma with one replicated column and row appended, stride width + 1.
  const std::vector<float>& padded() const noexcept { return padded_; }

 private:
  Frame key_;
  Frame key_small_;
  TokenVector tokens_;
  RealGrid grad_x_;
  RealGrid grad_y_;
  std::vector<float> padded_;
};

// Full decoder chain: detokenize -> feature_diff -> motion & occlusion
// (working resolution) -> bilinear upsampling of field and mask to key
// resolution -> back-warp key -> Hadamard mask -> refine -> round once.
// Key tokens are compared at the inter frame's granularity.
Frame reconstruct_frame(const KeyReference& key, const TokenVector& inter_tokens);
Frame reconstruct_frame(const Frame& key, const TokenVector& key_tokens, const TokenVector& inter_tokens);

}  // namespace pfvc
