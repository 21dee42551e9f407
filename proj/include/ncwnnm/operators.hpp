#pragma once

#include <cstdint>
#include <memory>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "ncwnnm/fft2d.hpp"
#include "ncwnnm/image.hpp"

namespace ncw {

/// Observations are flat vectors. Blur and mask observations have image shape
/// (row-major); block projections concatenate per-block measurements.
using Observation = Eigen::VectorXd;

/// `size` x `size` Gaussian, matching MATLAB's fspecial('gaussian', size, sigma):
/// tiny tail entries below eps * max are zeroed before normalising to sum 1.
Eigen::MatrixXd gaussian_kernel(int size, double sigma);

/// `size` x `size` box filter summing to 1.
Eigen::MatrixXd uniform_kernel(int size);

/// Circular convolution with a kernel whose centre sits at (k / 2, k / 2).
/// Bound to one image shape so the transfer function is computed once.
class BlurOperator {
 public:
  BlurOperator(Eigen::MatrixXd kernel, int height, int width);

  int height() const noexcept { return fft_->height(); }
  int width() const noexcept { return fft_->width(); }
  const Eigen::MatrixXd& kernel() const noexcept { return kernel_; }

  Image apply(const Image& x) const;
  Image adjoint(const Image& y) const;

  /// (H^T H + rho I)^{-1} (H^T y + rho (z + c)), evaluated per frequency.
  Image solve(const Image& y, const Image& z_plus_c, double rho) const;

 private:
  Eigen::MatrixXd kernel_;
  std::shared_ptr<const Fft2d> fft_;
  Fft2d::Spectrum transfer_;
};

/// Pixel selection. The observation keeps the full image shape with zeros at
/// unobserved pixels.
class MaskOperator {
 public:
  MaskOperator(int height, int width, std::vector<std::uint8_t> observed);

  /// Observes exactly round(density * N) pixels (at least one), chosen by a
  /// partial Fisher-Yates shuffle driven by Rng(seed).
  static MaskOperator random(int height, int width, double density, std::uint64_t seed);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  bool observed(int row, int col) const { return observed_[static_cast<std::size_t>(row) * width_ + col] != 0; }
  const std::vector<std::uint8_t>& observed_flags() const noexcept { return observed_; }
  std::size_t observed_count() const noexcept;

  Image apply(const Image& x) const;
  Image adjoint(const Image& y) const { return apply(y); }
  Image solve(const Image& y, const Image& z_plus_c, double rho) const;

  /// 255 where observed, 0 elsewhere.
  Image as_image() const;

 private:
  int height_;
  int width_;
  std::vector<std::uint8_t> observed_;
};

/// Block-based compressive sensing: every kBlock x kBlock block (row-major
/// block order, column-major vectorisation inside the block) is measured by
/// the same M x kBlock^2 matrix Phi with orthonormal rows.
///
/// Phi is generated from the seed as follows: draw M * 1024 standard normals
/// with Rng(seed) filling Phi row by row, then replace the rows by the
/// Householder-QR orthonormal basis of their span (Phi^T = Q R, Phi <- Q^T).
class BlockProjectionOperator {
 public:
  static constexpr int kBlock = 32;
  static constexpr int kBlockArea = kBlock * kBlock;

  BlockProjectionOperator(int height, int width, int measurements, std::uint64_t seed);

  /// M = round(subrate * 1024), clamped to [1, 1024].
  static int measurements_for(double subrate);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  int measurements() const noexcept { return static_cast<int>(phi_->rows()); }
  std::uint64_t seed() const noexcept { return seed_; }
  int block_count() const noexcept { return (height_ / kBlock) * (width_ / kBlock); }
  const Eigen::MatrixXd& phi() const noexcept { return *phi_; }
  const Eigen::MatrixXd& gram() const noexcept { return *gram_; }

  Observation apply(const Image& x) const;
  Image adjoint(const Observation& y) const;

  /// One gradient step on 0.5||y - Hx||^2 + 0.5 rho ||x - z - c||^2 using the
  /// precomputed back-projection hty = H^T y and per-block Phi^T Phi.
  Image gradient_step(const Image& x, const Image& hty, const Image& z_plus_c, double rho, double mu) const;
  double optimal_step(const Image& x, const Image& hty, const Image& z_plus_c, double rho) const;

 private:
  int height_;
  int width_;
  std::uint64_t seed_;
  std::shared_ptr<const Eigen::MatrixXd> phi_;
  std::shared_ptr<const Eigen::MatrixXd> gram_;
};

/// One of the three operator kinds. A distinct type (rather than a bare
/// std::variant) keeps unqualified calls such as apply(op, x) in this namespace.
class DegradationOperator {
 public:
  using Variant = std::variant<BlurOperator, MaskOperator, BlockProjectionOperator>;

  DegradationOperator(BlurOperator op) : impl_(std::move(op)) {}
  DegradationOperator(MaskOperator op) : impl_(std::move(op)) {}
  DegradationOperator(BlockProjectionOperator op) : impl_(std::move(op)) {}

  template <typename T>
  const T* get_if() const noexcept {
    return std::get_if<T>(&impl_);
  }
  template <typename T>
  bool holds() const noexcept {
    return std::holds_alternative<T>(impl_);
  }
  const Variant& variant() const noexcept { return impl_; }

 private:
  Variant impl_;
};

int image_height(const DegradationOperator& op);
int image_width(const DegradationOperator& op);
Eigen::Index observation_size(const DegradationOperator& op);
bool is_structured(const DegradationOperator& op);

Observation apply(const DegradationOperator& op, const Image& x);
Image apply_adjoint(const DegradationOperator& op, const Observation& y);

/// Image view of a blur or mask observation; DataError for projections.
Image observation_image(const DegradationOperator& op, const Observation& y);

/// Closed-form minimiser of 0.5||y - Hx||^2 + 0.5 rho ||x - z - c||^2 for blur
/// and mask operators. ParameterError when rho <= 0 or the operator is a
/// projection.
Image solve_x_structured(const DegradationOperator& op, const Observation& y, const Image& z, const Image& c,
                         double rho);

/// One gradient-descent step x - mu (H^T H x - H^T y + rho (x - z - c)).
Image grad_step_x(const BlockProjectionOperator& op, const Image& x, const Image& hty, const Image& z,
                  const Image& c, double rho, double mu);
Image grad_step_x(const BlockProjectionOperator& op, const Image& x, const Observation& y, const Image& z,
                  const Image& c, double rho, double mu);

/// Exact line-search step q'q / q'(H^T H + rho I)q along the current gradient q.
/// Zero when the gradient vanishes.
double optimal_step_x(const BlockProjectionOperator& op, const Image& x, const Image& hty, const Image& z,
                      const Image& c, double rho);

}  // namespace ncw
