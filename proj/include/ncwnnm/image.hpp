#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace ncw {

/// Grayscale image, row-major, real-valued intensities on the 8-bit scale.
class Image {
 public:
  Image() = default;
  Image(int height, int width, double fill = 0.0);
  Image(int height, int width, std::vector<double> data);

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(int row, int col) { return data_[index(row, col)]; }
  double operator()(int row, int col) const { return data_[index(row, col)]; }

  std::span<double> pixels() noexcept { return data_; }
  std::span<const double> pixels() const noexcept { return data_; }

  using MatrixMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  using ConstMatrixMap =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
  using VectorMap = Eigen::Map<Eigen::VectorXd>;
  using ConstVectorMap = Eigen::Map<const Eigen::VectorXd>;

  MatrixMap matrix() { return {data_.data(), height_, width_}; }
  ConstMatrixMap matrix() const { return {data_.data(), height_, width_}; }
  VectorMap vector() { return {data_.data(), static_cast<Eigen::Index>(data_.size())}; }
  ConstVectorMap vector() const { return {data_.data(), static_cast<Eigen::Index>(data_.size())}; }

  bool same_shape(const Image& other) const noexcept {
    return height_ == other.height_ && width_ == other.width_;
  }
  bool all_finite() const noexcept;

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::size_t index(int row, int col) const noexcept {
    return static_cast<std::size_t>(row) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(col);
  }

  int height_ = 0;
  int width_ = 0;
  std::vector<double> data_;
};

/// Throws DataError unless the two images have identical dimensions.
void require_same_shape(const Image& a, const Image& b, const char* what);

/// Top-left corner of a square patch.
struct PatchIndex {
  int row = 0;
  int col = 0;
  friend auto operator<=>(const PatchIndex&, const PatchIndex&) = default;
};

/// Square patch geometry. `side` is the patch edge length, so the patch area
/// (the vector length) is side * side.
struct PatchShape {
  int side = 8;
  int area() const noexcept { return side * side; }
};

/// A group of similar patches stacked as columns. members[0] is the exemplar.
struct PatchGroup {
  Eigen::MatrixXd matrix;
  std::vector<PatchIndex> members;
};

/// Patch pixels in column-within-patch order: entry k is the pixel at
/// (idx.row + k % side, idx.col + k / side). Throws DataError when the patch
/// does not lie fully inside the image.
Eigen::VectorXd extract_patch(const Image& img, PatchIndex idx, PatchShape shape);

/// Inverse of extract_patch: writes the vector back into the image.
void place_patch(Image& img, PatchIndex idx, PatchShape shape, const Eigen::Ref<const Eigen::VectorXd>& values);

/// Stacks the patches at `members` into a d x m matrix.
PatchGroup extract_group(const Image& img, std::span<const PatchIndex> members, PatchShape shape);

/// Exemplar positions along one axis: 0, stride, 2*stride, ... plus the last
/// valid offset (extent - side); every pixel is covered when stride <= side.
std::vector<int> exemplar_offsets(int extent, int side, int stride);

/// Row-major lattice of exemplar positions. Throws DataError when the image is
/// smaller than one patch, ParameterError when stride < 1.
std::vector<PatchIndex> exemplar_grid(int height, int width, PatchShape shape, int stride);

/// Default exemplar stride: half the patch side, rounded up.
int default_stride(PatchShape shape) noexcept;

/// Accumulates patch contributions and averages them per pixel. Contributions
/// are summed in submission order, so the result is deterministic as long as
/// groups are added in a fixed order.
class GroupAggregator {
 public:
  GroupAggregator(int height, int width, PatchShape shape);

  void add(const PatchGroup& group);
  void add(std::span<const PatchIndex> members, const Eigen::Ref<const Eigen::MatrixXd>& matrix);

  /// Pixels without any contribution are taken from `fallback` when given,
  /// otherwise a DataError is thrown.
  Image finish(const Image* fallback = nullptr) const;

 private:
  int height_;
  int width_;
  PatchShape shape_;
  std::vector<double> sum_;
  std::vector<int> count_;
};

Image aggregate_groups(std::span<const PatchGroup> groups, int height, int width, PatchShape shape,
                       const Image* fallback = nullptr);

// Pixel-wise arithmetic used throughout the solver.
Image operator+(const Image& a, const Image& b);
Image operator-(const Image& a, const Image& b);
Image operator*(double s, const Image& a);
double squared_norm(const Image& a);
double dot(const Image& a, const Image& b);

}  // namespace ncw
