#pragma once

#include <span>
#include <vector>

namespace pfvc {

// Orthonormal 2-D DCT-II on an n x n row-major block, computed separably
// with a precomputed basis. inverse() is the exact transpose.
class OrthoDct2d {
 public:
  explicit OrthoDct2d(int n);

  int size() const noexcept { return n_; }

  void forward(std::span<const double> in, std::span<double> out) const;
  void inverse(std::span<const double> in, std::span<double> out) const;

  // basis(k, i) = alpha(k) * cos(pi * (2i + 1) * k / (2n))
  double basis(int k, int i) const noexcept { return basis_[static_cast<std::size_t>(k) * n_ + i]; }

 private:
  int n_;
  std::vector<double> basis_;
};

// Diagonal scan over an n x n grid starting at DC. Odd anti-diagonals run
// from the top row downwards, even ones from the left column upwards,
// which is the JPEG 8x8 pattern extended to any n. Entries are
// row * n + col.
std::vector<int> zigzag_scan(int n);

}  // namespace pfvc
