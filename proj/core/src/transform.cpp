#include "pfvc/transform.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pfvc/errors.hpp"

namespace pfvc {

OrthoDct2d::OrthoDct2d(int n) : n_(n), basis_(static_cast<std::size_t>(n) * n) {
  if (n < 1) throw InvalidArgument("DCT size must be positive");
  for (int k = 0; k < n; ++k) {
    const double alpha = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (int i = 0; i < n; ++i) {
      basis_[static_cast<std::size_t>(k) * n + i] =
          alpha * std::cos(std::numbers::pi * (2.0 * i + 1.0) * k / (2.0 * n));
    }
  }
}

void OrthoDct2d::forward(std::span<const double> in, std::span<double> out) const {
  const std::size_t n = static_cast<std::size_t>(n_);
  std::vector<double> tmp(n * n, 0.0);
  // rows: tmp[r][k] = sum_c in[r][c] * B[k][c]
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      double acc = 0.0;
      for (std::size_t c = 0; c < n; ++c) acc += in[r * n + c] * basis_[k * n + c];
      tmp[r * n + k] = acc;
    }
  // columns: out[u][k] = sum_r B[u][r] * tmp[r][k]
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t k = 0; k < n; ++k) {
      double acc = 0.0;
      for (std::size_t r = 0; r < n; ++r) acc += basis_[u * n + r] * tmp[r * n + k];
      out[u * n + k] = acc;
    }
}

void OrthoDct2d::inverse(std::span<const double> in, std::span<double> out) const {
  const std::size_t n = static_cast<std::size_t>(n_);
  std::vector<double> tmp(n * n, 0.0);
  for (std::size_t u = 0; u < n; ++u)
    for (std::size_t c = 0; c < n; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += in[u * n + k] * basis_[k * n + c];
      tmp[u * n + c] = acc;
    }
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      double acc = 0.0;
      for (std::size_t u = 0; u < n; ++u) acc += basis_[u * n + r] * tmp[u * n + c];
      out[r * n + c] = acc;
    }
}

std::vector<int> zigzag_scan(int n) {
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n) * n);
  for (int s = 0; s <= 2 * (n - 1); ++s) {
    const int r_lo = std::max(0, s - (n - 1));
    const int r_hi = std::min(s, n - 1);
    if (s % 2 == 1) {
      for (int r = r_lo; r <= r_hi; ++r) order.push_back(r * n + (s - r));
    } else {
      for (int r = r_hi; r >= r_lo; --r) order.push_back(r * n + (s - r));
    }
  }
  return order;
}

}  // namespace pfvc
