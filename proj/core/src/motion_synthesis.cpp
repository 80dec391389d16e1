#include "pfvc/motion_synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "pfvc/errors.hpp"

namespace pfvc {

namespace {

// a + t * (b - a): returns a exactly when a == b or t == 0.
inline double lerp(double a, double b, double t) noexcept { return a + t * (b - a); }

struct Taps {
  std::vector<int> lo, hi;
  std::vector<double> frac;
};

// Pixel-centre aligned source taps for resampling n_src -> n_dst.
Taps make_taps(int n_src, int n_dst) {
  Taps t;
  t.lo.resize(static_cast<std::size_t>(n_dst));
  t.hi.resize(static_cast<std::size_t>(n_dst));
  t.frac.resize(static_cast<std::size_t>(n_dst));
  const double scale = static_cast<double>(n_src) / n_dst;
  for (int i = 0; i < n_dst; ++i) {
    const double s = std::clamp((i + 0.5) * scale - 0.5, 0.0, static_cast<double>(n_src - 1));
    const int lo = static_cast<int>(s);
    t.lo[i] = lo;
    t.hi[i] = std::min(lo + 1, n_src - 1);
    t.frac[i] = s - lo;
  }
  return t;
}

// Bilinear upsampler with the x pass precomputed for every source row;
// value(y, x) = lerp(row(lo_y)[x], row(hi_y)[x], frac_y).
class Upsampler {
 public:
  Upsampler(const double* src, int sw, int sh, int tw, int th)
      : tw_(tw), ty_(make_taps(sh, th)), rows_(static_cast<std::size_t>(sh) * tw) {
    const Taps tx = make_taps(sw, tw);
    for (int r = 0; r < sh; ++r) {
      const double* in = src + static_cast<std::size_t>(r) * sw;
      double* out = rows_.data() + static_cast<std::size_t>(r) * tw;
      for (int x = 0; x < tw; ++x) out[x] = lerp(in[tx.lo[x]], in[tx.hi[x]], tx.frac[x]);
    }
  }

  const double* upper(int y) const noexcept { return rows_.data() + static_cast<std::size_t>(ty_.lo[y]) * tw_; }
  const double* lower(int y) const noexcept { return rows_.data() + static_cast<std::size_t>(ty_.hi[y]) * tw_; }
  double frac(int y) const noexcept { return ty_.frac[y]; }

 private:
  int tw_;
  Taps ty_;
  std::vector<double> rows_;
};

// Separable 3x3 box sums with replicated borders, repeated `passes` times
// in place. Unnormalized: a constant c becomes 9^passes * c.
void box3_sum(std::vector<double>& v, int w, int h, int passes, std::vector<double>& scratch) {
  scratch.resize(2 * static_cast<std::size_t>(w));
  double* a = scratch.data();
  double* b = a + w;
  for (int y = 0; y < h; ++y) {
    double* row = v.data() + static_cast<std::size_t>(y) * w;
    for (int p = 0; p < passes; ++p) {
      std::copy(row, row + w, a);
      row[0] = 2.0 * a[0] + a[1];
      for (int x = 1; x + 1 < w; ++x) row[x] = a[x - 1] + a[x] + a[x + 1];
      row[w - 1] = a[w - 2] + 2.0 * a[w - 1];
    }
  }
  for (int p = 0; p < passes; ++p) {
    // a holds the pre-pass copy of row y - 1, b that of row y.
    std::copy(v.data(), v.data() + w, a);
    for (int y = 0; y < h; ++y) {
      double* row = v.data() + static_cast<std::size_t>(y) * w;
      std::copy(row, row + w, b);
      const double* down = y + 1 < h ? row + w : b;
      for (int x = 0; x < w; ++x) row[x] = a[x] + b[x] + down[x];
      std::swap(a, b);
    }
  }
}

constexpr int kRefinePasses = 3;

// out = m + (1 - w) * U(S(D(m)) / S(D(w))), with D the block mean by
// `scale`, S three 3x3 box passes and U bilinear upsampling.
template <typename Emit>
void fill_occluded(const double* masked, const double* weights, int w, int h, int scale, Emit&& emit) {
  const int sw = w / scale, sh = h / scale;
  std::vector<double> ms(static_cast<std::size_t>(sw) * sh, 0.0), ws(ms.size(), 0.0);
  for (int y = 0; y < h; ++y) {
    const double* m = masked + static_cast<std::size_t>(y) * w;
    const double* wt = weights + static_cast<std::size_t>(y) * w;
    double* mrow = ms.data() + static_cast<std::size_t>(y / scale) * sw;
    double* wrow = ws.data() + static_cast<std::size_t>(y / scale) * sw;
    for (int bx = 0; bx < sw; ++bx) {
      for (int k = 0; k < scale; ++k) {
        mrow[bx] += m[bx * scale + k];
        wrow[bx] += wt[bx * scale + k];
      }
    }
  }
  std::vector<double> scratch;
  box3_sum(ms, sw, sh, kRefinePasses, scratch);
  box3_sum(ws, sw, sh, kRefinePasses, scratch);
  for (std::size_t i = 0; i < ms.size(); ++i) ms[i] = ws[i] > 0.0 ? ms[i] / ws[i] : 0.0;

  const Upsampler fill(ms.data(), sw, sh, w, h);
  for (int y = 0; y < h; ++y) {
    const double* a = fill.upper(y);
    const double* b = fill.lower(y);
    const double f = fill.frac(y);
    const std::size_t base = static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      emit(base + x, masked[base + x] + (1.0 - weights[base + x]) * lerp(a[x], b[x], f));
    }
  }
}

RealGrid feature_grid(const MotionFeature& f) {
  RealGrid g(kFeatureSide, kFeatureSide);
  std::copy(f.values().begin(), f.values().end(), g.values.begin());
  return g;
}

void central_gradients(const Frame& key_small, RealGrid& gx, RealGrid& gy) {
  const int w = key_small.width(), h = key_small.height();
  gx = RealGrid(w, h);
  gy = RealGrid(w, h);
  constexpr double kNorm = 1.0 / (2.0 * 255.0);
  for (int y = 0; y < h; ++y) {
    const int ym = y > 0 ? y - 1 : 0, yp = y + 1 < h ? y + 1 : h - 1;
    for (int x = 0; x < w; ++x) {
      const int xm = x > 0 ? x - 1 : 0, xp = x + 1 < w ? x + 1 : w - 1;
      gx.at(x, y) = (static_cast<double>(key_small.at(xp, y)) - key_small.at(xm, y)) * kNorm;
      gy.at(x, y) = (static_cast<double>(key_small.at(x, yp)) - key_small.at(x, ym)) * kNorm;
    }
  }
}

DenseMotionField flow_from_gradients(const RealGrid& gx, const RealGrid& gy, const RealGrid& diff) {
  DenseMotionField f{diff.width, diff.height, std::vector<double>(diff.values.size()),
                     std::vector<double>(diff.values.size())};
  for (std::size_t i = 0; i < diff.values.size(); ++i) {
    const double gxi = gx.values[i], gyi = gy.values[i];
    const double k = diff.values[i] / (gxi * gxi + gyi * gyi + kFlowEpsilon);
    f.dx[i] = k * gxi;
    f.dy[i] = k * gyi;
  }
  std::vector<double> scratch;
  box3_sum(f.dx, f.width, f.height, 1, scratch);
  box3_sum(f.dy, f.width, f.height, 1, scratch);
  for (auto& v : f.dx) v /= 9.0;
  for (auto& v : f.dy) v /= 9.0;
  return f;
}

OcclusionMap occlusion_from_diff(const RealGrid& diff) {
  OcclusionMap m{diff.width, diff.height, std::vector<double>(diff.values.size())};
  for (std::size_t i = 0; i < diff.values.size(); ++i) {
    m.weights[i] = std::exp(-std::abs(diff.values[i]) / kOcclusionSigma);
  }
  return m;
}

void check_same_size(const Frame& frame, int w, int h, const char* what) {
  if (frame.width() != w || frame.height() != h) {
    throw InvalidArgument(std::string(what) + ": dimensions disagree with the key frame");
  }
}

// out(x) = mask(x) * bilinear(frame, clamp(x + d(x))); mask may be null.
void back_warp(const Frame& frame, const double* dx, const double* dy, const double* mask, double* out) {
  const int w = frame.width(), h = frame.height();
  const double max_x = w - 1, max_y = h - 1;
  const std::uint8_t* px = frame.luma().data();
  for (int y = 0; y < h; ++y) {
    const std::size_t base = static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      const std::size_t i = base + x;
      const double sx = std::min(std::max(x + dx[i], 0.0), max_x);
      const double sy = std::min(std::max(y + dy[i], 0.0), max_y);
      const int x0 = static_cast<int>(sx), y0 = static_cast<int>(sy);
      const int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, h - 1);
      const double fx = sx - x0, fy = sy - y0;
      const std::uint8_t* r0 = px + static_cast<std::size_t>(y0) * w;
      const std::uint8_t* r1 = px + static_cast<std::size_t>(y1) * w;
      const double top = lerp(r0[x0], r0[x1], fx);
      const double bottom = lerp(r1[x0], r1[x1], fx);
      const double v = lerp(top, bottom, fy);
      out[i] = mask ? mask[i] * v : v;
    }
  }
}

// Half-up rounding; equal to std::round on the clamped range.
inline std::uint8_t to_pixel(double v) noexcept {
  return static_cast<std::uint8_t>(std::min(std::max(v, 0.0), 255.0) + 0.5);
}

Frame round_to_frame(const RealGrid& g) {
  std::vector<std::uint8_t> out(g.values.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = to_pixel(g.values[i]);
  return Frame(g.width, g.height, std::move(out));
}

}  // namespace

RealGrid resample_bilinear(const RealGrid& src, int target_w, int target_h) {
  if (src.width < 1 || src.height < 1 || target_w < 1 || target_h < 1) {
    throw InvalidArgument("resample dimensions must be positive");
  }
  if (src.values.size() != static_cast<std::size_t>(src.width) * src.height) {
    throw InvalidArgument("grid holds the wrong number of samples");
  }
  const Upsampler up(src.values.data(), src.width, src.height, target_w, target_h);
  RealGrid dst(target_w, target_h);
  for (int y = 0; y < target_h; ++y) {
    const double* a = up.upper(y);
    const double* b = up.lower(y);
    const double f = up.frac(y);
    double* out = dst.values.data() + static_cast<std::size_t>(y) * target_w;
    for (int x = 0; x < target_w; ++x) out[x] = lerp(a[x], b[x], f);
  }
  return dst;
}

RealGrid upsample_feature(const MotionFeature& feature, int target_w, int target_h) {
  if (target_w < kFeatureSide || target_h < kFeatureSide) {
    throw InvalidArgument("feature upsampling target must be at least 16x16");
  }
  return resample_bilinear(feature_grid(feature), target_w, target_h);
}

FeatureDiff feature_diff(const MotionFeature& f_inter, const MotionFeature& f_key, int target_w, int target_h) {
  FeatureDiff d{upsample_feature(f_inter, target_w, target_h)};
  const RealGrid key = upsample_feature(f_key, target_w, target_h);
  for (std::size_t i = 0; i < key.values.size(); ++i) d.grid.values[i] -= key.values[i];
  return d;
}

DenseMotionField predict_motion(const Frame& key_small, const FeatureDiff& diff) {
  check_same_size(key_small, diff.grid.width, diff.grid.height, "predict_motion");
  RealGrid gx, gy;
  central_gradients(key_small, gx, gy);
  return flow_from_gradients(gx, gy, diff.grid);
}

OcclusionMap predict_occlusion(const Frame& key_small, const FeatureDiff& diff) {
  check_same_size(key_small, diff.grid.width, diff.grid.height, "predict_occlusion");
  return occlusion_from_diff(diff.grid);
}

RealGrid warp_samples(const Frame& frame, const DenseMotionField& field) {
  check_same_size(frame, field.width, field.height, "warp");
  RealGrid out(frame.width(), frame.height());
  back_warp(frame, field.dx.data(), field.dy.data(), nullptr, out.values.data());
  return out;
}

Frame warp(const Frame& frame, const DenseMotionField& field) { return round_to_frame(warp_samples(frame, field)); }

RealGrid refine_occluded(const RealGrid& masked, std::span<const double> weights) {
  if (weights.size() != masked.values.size()) throw InvalidArgument("occlusion map size mismatch");
  if (masked.width % kWorkingScale != 0 || masked.height % kWorkingScale != 0) {
    throw InvalidArgument("refinement needs dimensions divisible by 4");
  }
  if (std::all_of(weights.begin(), weights.end(), [](double w) { return w == 1.0; })) return masked;
  RealGrid out(masked.width, masked.height);
  fill_occluded(masked.values.data(), weights.data(), masked.width, masked.height, kWorkingScale,
                [&](std::size_t i, double v) { out.values[i] = v; });
  return out;
}

KeyReference::KeyReference(Frame key, TokenVector key_tokens)
    : key_(key.luma_only()), key_small_(downsample(key_, kWorkingScale)), tokens_(std::move(key_tokens)) {
  if (tokens_.g != kFeatureSize) throw InvalidArgument("key reference needs g = 256 key tokens");
  if (key_small_.width() < kFeatureSide || key_small_.height() < kFeatureSide) {
    throw InvalidArgument("key frame too small: working resolution must be at least 16x16");
  }
  central_gradients(key_small_, grad_x_, grad_y_);
  const int w = key_.width(), h = key_.height();
  padded_.resize(static_cast<std::size_t>(w + 1) * (h + 1));
  for (int y = 0; y <= h; ++y) {
    const int sy = std::min(y, h - 1);
    for (int x = 0; x <= w; ++x) padded_[static_cast<std::size_t>(y) * (w + 1) + x] = key_.at(std::min(x, w - 1), sy);
  }
}

RealGrid KeyReference::key_feature_at(int g) const {
  return upsample_feature(detokenize(truncate_tokens(tokens_, g)), key_small_.width(), key_small_.height());
}

Frame reconstruct_frame(const KeyReference& ref, const TokenVector& inter_tokens) {
  const int w = ref.key_small().width(), h = ref.key_small().height();
  const int W = ref.key().width(), H = ref.key().height();

  RealGrid diff = upsample_feature(detokenize(inter_tokens), w, h);
  const RealGrid key_feature = ref.key_feature_at(inter_tokens.g);
  for (std::size_t i = 0; i < diff.values.size(); ++i) diff.values[i] -= key_feature.values[i];

  DenseMotionField flow = flow_from_gradients(ref.grad_x(), ref.grad_y(), diff);
  OcclusionMap occ = occlusion_from_diff(diff);

  // Field and mask are upsampled to key resolution on the fly, exactly as
  // resample_bilinear would; displacements scale with the resolution.
  const Upsampler up_dx(flow.dx.data(), w, h, W, H);
  const Upsampler up_dy(flow.dy.data(), w, h, W, H);
  const Upsampler up_w(occ.weights.data(), w, h, W, H);
  const double sx = static_cast<double>(W) / w, sy = static_cast<double>(H) / h;
  const double max_x = W - 1, max_y = H - 1;
  const float* px = ref.padded().data();
  const std::size_t stride = static_cast<std::size_t>(W) + 1;

  const std::size_t n = static_cast<std::size_t>(W) * H;
  const auto masked = std::make_unique_for_overwrite<double[]>(n);
  const auto weights = std::make_unique_for_overwrite<double[]>(n);
  for (int y = 0; y < H; ++y) {
    const double* dxa = up_dx.upper(y);
    const double* dxb = up_dx.lower(y);
    const double* dya = up_dy.upper(y);
    const double* dyb = up_dy.lower(y);
    const double* wa = up_w.upper(y);
    const double* wb = up_w.lower(y);
    const double f = up_dx.frac(y);
    const std::size_t base = static_cast<std::size_t>(y) * W;
    for (int x = 0; x < W; ++x) {
      const double sxp = std::min(std::max(x + lerp(dxa[x], dxb[x], f) * sx, 0.0), max_x);
      const double syp = std::min(std::max(y + lerp(dya[x], dyb[x], f) * sy, 0.0), max_y);
      const double wt = lerp(wa[x], wb[x], f);
      const int x0 = static_cast<int>(sxp), y0 = static_cast<int>(syp);
      const double fx = sxp - x0, fy = syp - y0;
      // At the clamped edge the padded neighbour gets weight 0.
      const float* p = px + static_cast<std::size_t>(y0) * stride + x0;
      const double v = lerp(lerp(p[0], p[1], fx), lerp(p[stride], p[stride + 1], fx), fy);
      masked[base + x] = wt * v;
      weights[base + x] = wt;
    }
  }
  std::vector<std::uint8_t> out(n);
  // Skipping the fill is exact: where w == 1 it adds 0 * fill.
  if (std::all_of(occ.weights.begin(), occ.weights.end(), [](double v) { return v == 1.0; })) {
    for (std::size_t i = 0; i < n; ++i) out[i] = to_pixel(masked[i]);
  } else {
    fill_occluded(masked.get(), weights.get(), W, H, kWorkingScale,
                  [&](std::size_t i, double v) { out[i] = to_pixel(v); });
  }
  return Frame(W, H, std::move(out));
}

Frame reconstruct_frame(const Frame& key, const TokenVector& key_tokens, const TokenVector& inter_tokens) {
  return reconstruct_frame(KeyReference(key, key_tokens), inter_tokens);
}

}  // namespace pfvc
