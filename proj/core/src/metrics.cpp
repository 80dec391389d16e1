#include "pfvc/metrics.hpp"

#include <array>
#include <cmath>
#include <vector>

#include "pfvc/errors.hpp"

namespace pfvc {

namespace {

constexpr int kWindow = 11;
constexpr double kSigma = 1.5;
constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);

void check_pair(const Frame& a, const Frame& b) {
  if (a.width() != b.width() || a.height() != b.height()) {
    throw InvalidArgument("metric inputs differ in dimensions");
  }
}

void check_pair(const Sequence& a, const Sequence& b) {
  if (a.size() != b.size()) throw InvalidArgument("metric inputs differ in frame count");
}

const std::array<double, kWindow>& gaussian() {
  static const std::array<double, kWindow> w = [] {
    std::array<double, kWindow> k{};
    double sum = 0.0;
    for (int i = 0; i < kWindow; ++i) {
      const double d = i - kWindow / 2;
      k[i] = std::exp(-d * d / (2.0 * kSigma * kSigma));
      sum += k[i];
    }
    for (double& v : k) v /= sum;
    return k;
  }();
  return w;
}

// Valid-region separable Gaussian filter.
std::vector<double> filter(const std::vector<double>& src, int w, int h) {
  const auto& k = gaussian();
  const int ow = w - kWindow + 1, oh = h - kWindow + 1;
  std::vector<double> rows(static_cast<std::size_t>(h) * ow);
  for (int y = 0; y < h; ++y) {
    const double* in = src.data() + static_cast<std::size_t>(y) * w;
    double* out = rows.data() + static_cast<std::size_t>(y) * ow;
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < kWindow; ++i) s += k[i] * in[x + i];
      out[x] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow, 0.0);
  for (int y = 0; y < oh; ++y) {
    double* o = out.data() + static_cast<std::size_t>(y) * ow;
    for (int i = 0; i < kWindow; ++i) {
      const double* in = rows.data() + static_cast<std::size_t>(y + i) * ow;
      for (int x = 0; x < ow; ++x) o[x] += k[i] * in[x];
    }
  }
  return out;
}

}  // namespace

double mse(const Frame& a, const Frame& b) {
  check_pair(a, b);
  const auto pa = a.luma(), pb = b.luma();
  std::uint64_t sum = 0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const int d = static_cast<int>(pa[i]) - pb[i];
    sum += static_cast<std::uint64_t>(d * d);
  }
  return static_cast<double>(sum) / static_cast<double>(pa.size());
}

double psnr(const Frame& a, const Frame& b) {
  const double e = mse(a, b);
  return e == 0.0 ? kPsnrIdentical : 10.0 * std::log10(255.0 * 255.0 / e);
}

double ssim(const Frame& a, const Frame& b) {
  check_pair(a, b);
  const int w = a.width(), h = a.height();
  if (w < kWindow || h < kWindow) throw InvalidArgument("SSIM needs frames of at least 11x11");
  const std::size_t n = static_cast<std::size_t>(w) * h;
  std::vector<double> x(n), y(n), xx(n), yy(n), xy(n);
  const auto pa = a.luma(), pb = b.luma();
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = pa[i];
    y[i] = pb[i];
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }
  const auto mx = filter(x, w, h), my = filter(y, w, h);
  const auto sxx = filter(xx, w, h), syy = filter(yy, w, h), sxy = filter(xy, w, h);
  double total = 0.0;
  for (std::size_t i = 0; i < mx.size(); ++i) {
    const double vx = sxx[i] - mx[i] * mx[i];
    const double vy = syy[i] - my[i] * my[i];
    const double cov = sxy[i] - mx[i] * my[i];
    total += ((2.0 * mx[i] * my[i] + kC1) * (2.0 * cov + kC2)) /
             ((mx[i] * mx[i] + my[i] * my[i] + kC1) * (vx + vy + kC2));
  }
  return total / static_cast<double>(mx.size());
}

double sequence_psnr(const Sequence& a, const Sequence& b) {
  check_pair(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += mse(a.frames()[i], b.frames()[i]);
  const double e = sum / static_cast<double>(a.size());
  return e == 0.0 ? kPsnrIdentical : 10.0 * std::log10(255.0 * 255.0 / e);
}

double sequence_ssim(const Sequence& a, const Sequence& b) {
  check_pair(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += ssim(a.frames()[i], b.frames()[i]);
  return sum / static_cast<double>(a.size());
}

}  // namespace pfvc
