#include "ncwnnm/image.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ncwnnm/errors.hpp"

namespace ncw {

Image::Image(int height, int width, double fill)
    : height_(height), width_(width),
      data_(static_cast<std::size_t>(std::max(height, 0)) * static_cast<std::size_t>(std::max(width, 0)), fill) {
  if (height < 0 || width < 0) throw DataError("negative image dimensions");
}

Image::Image(int height, int width, std::vector<double> data) : height_(height), width_(width), data_(std::move(data)) {
  if (height < 0 || width < 0) throw DataError("negative image dimensions");
  if (data_.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width))
    throw DataError("image data length " + std::to_string(data_.size()) + " does not match " +
                    std::to_string(height) + "x" + std::to_string(width));
}

bool Image::all_finite() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

void require_same_shape(const Image& a, const Image& b, const char* what) {
  if (!a.same_shape(b))
    throw DataError(std::string(what) + ": shape mismatch " + std::to_string(a.height()) + "x" +
                    std::to_string(a.width()) + " vs " + std::to_string(b.height()) + "x" +
                    std::to_string(b.width()));
}

namespace {

void check_patch_bounds(const Image& img, PatchIndex idx, PatchShape shape) {
  if (shape.side < 1) throw ParameterError("patch side must be positive");
  if (idx.row < 0 || idx.col < 0 || idx.row + shape.side > img.height() || idx.col + shape.side > img.width())
    throw DataError("patch at (" + std::to_string(idx.row) + ", " + std::to_string(idx.col) + ") of side " +
                    std::to_string(shape.side) + " exceeds " + std::to_string(img.height()) + "x" +
                    std::to_string(img.width()) + " image");
}

}  // namespace

Eigen::VectorXd extract_patch(const Image& img, PatchIndex idx, PatchShape shape) {
  check_patch_bounds(img, idx, shape);
  Eigen::VectorXd out(shape.area());
  Eigen::Index k = 0;
  for (int c = 0; c < shape.side; ++c)
    for (int r = 0; r < shape.side; ++r) out[k++] = img(idx.row + r, idx.col + c);
  return out;
}

void place_patch(Image& img, PatchIndex idx, PatchShape shape, const Eigen::Ref<const Eigen::VectorXd>& values) {
  check_patch_bounds(img, idx, shape);
  if (values.size() != shape.area()) throw DataError("patch vector length does not match patch area");
  Eigen::Index k = 0;
  for (int c = 0; c < shape.side; ++c)
    for (int r = 0; r < shape.side; ++r) img(idx.row + r, idx.col + c) = values[k++];
}

PatchGroup extract_group(const Image& img, std::span<const PatchIndex> members, PatchShape shape) {
  PatchGroup group;
  group.members.assign(members.begin(), members.end());
  group.matrix.resize(shape.area(), static_cast<Eigen::Index>(members.size()));
  for (std::size_t j = 0; j < members.size(); ++j)
    group.matrix.col(static_cast<Eigen::Index>(j)) = extract_patch(img, members[j], shape);
  return group;
}

std::vector<int> exemplar_offsets(int extent, int side, int stride) {
  if (stride < 1) throw ParameterError("exemplar stride must be at least 1");
  if (extent < side) throw DataError("image extent " + std::to_string(extent) + " is smaller than patch side " +
                                     std::to_string(side));
  const int last = extent - side;
  std::vector<int> offsets;
  for (int o = 0; o <= last; o += stride) offsets.push_back(o);
  if (offsets.back() != last) offsets.push_back(last);
  return offsets;
}

std::vector<PatchIndex> exemplar_grid(int height, int width, PatchShape shape, int stride) {
  const auto rows = exemplar_offsets(height, shape.side, stride);
  const auto cols = exemplar_offsets(width, shape.side, stride);
  std::vector<PatchIndex> grid;
  grid.reserve(rows.size() * cols.size());
  for (int r : rows)
    for (int c : cols) grid.push_back({r, c});
  return grid;
}

int default_stride(PatchShape shape) noexcept { return std::max(1, (shape.side + 1) / 2); }

GroupAggregator::GroupAggregator(int height, int width, PatchShape shape)
    : height_(height), width_(width), shape_(shape),
      sum_(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), 0.0),
      count_(sum_.size(), 0) {}

void GroupAggregator::add(const PatchGroup& group) { add(group.members, group.matrix); }

void GroupAggregator::add(std::span<const PatchIndex> members, const Eigen::Ref<const Eigen::MatrixXd>& matrix) {
  if (matrix.rows() != shape_.area() || matrix.cols() != static_cast<Eigen::Index>(members.size()))
    throw DataError("group matrix shape does not match its member list");
  for (std::size_t j = 0; j < members.size(); ++j) {
    const PatchIndex idx = members[j];
    if (idx.row < 0 || idx.col < 0 || idx.row + shape_.side > height_ || idx.col + shape_.side > width_)
      throw DataError("aggregated patch out of bounds");
    Eigen::Index k = 0;
    for (int c = 0; c < shape_.side; ++c) {
      for (int r = 0; r < shape_.side; ++r) {
        const std::size_t p = static_cast<std::size_t>(idx.row + r) * width_ + (idx.col + c);
        sum_[p] += matrix(k++, static_cast<Eigen::Index>(j));
        ++count_[p];
      }
    }
  }
}

Image GroupAggregator::finish(const Image* fallback) const {
  if (fallback && (fallback->height() != height_ || fallback->width() != width_))
    throw DataError("aggregation fallback image has the wrong shape");
  Image out(height_, width_);
  auto px = out.pixels();
  for (std::size_t p = 0; p < sum_.size(); ++p) {
    if (count_[p] > 0) {
      px[p] = sum_[p] / count_[p];
    } else if (fallback) {
      px[p] = fallback->pixels()[p];
    } else {
      throw DataError("pixel " + std::to_string(p) + " is not covered by any patch and no fallback was given");
    }
  }
  return out;
}

Image aggregate_groups(std::span<const PatchGroup> groups, int height, int width, PatchShape shape,
                       const Image* fallback) {
  GroupAggregator agg(height, width, shape);
  for (const auto& g : groups) agg.add(g);
  return agg.finish(fallback);
}

Image operator+(const Image& a, const Image& b) {
  require_same_shape(a, b, "image addition");
  Image out(a.height(), a.width());
  out.vector() = a.vector() + b.vector();
  return out;
}

Image operator-(const Image& a, const Image& b) {
  require_same_shape(a, b, "image subtraction");
  Image out(a.height(), a.width());
  out.vector() = a.vector() - b.vector();
  return out;
}

Image operator*(double s, const Image& a) {
  Image out(a.height(), a.width());
  out.vector() = s * a.vector();
  return out;
}

double squared_norm(const Image& a) { return a.vector().squaredNorm(); }

double dot(const Image& a, const Image& b) {
  require_same_shape(a, b, "image inner product");
  return a.vector().dot(b.vector());
}

}  // namespace ncw
