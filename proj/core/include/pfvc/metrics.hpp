#pragma once

#include <limits>

#include "pfvc/media.hpp"

namespace pfvc {

// psnr() of identical inputs.
inline constexpr double kPsnrIdentical = std::numeric_limits<double>::infinity();

double mse(const Frame& a, const Frame& b);

// 10 log10(255^2 / MSE) on luma.
double psnr(const Frame& a, const Frame& b);

// Mean SSIM over all valid 11x11 Gaussian windows (sigma 1.5),
// K1 = 0.01, K2 = 0.03, L = 255. Needs both sides >= 11.
double ssim(const Frame& a, const Frame& b);

// PSNR of the MSE pooled over every frame.
double sequence_psnr(const Sequence& a, const Sequence& b);
double sequence_ssim(const Sequence& a, const Sequence& b);

}  // namespace pfvc
