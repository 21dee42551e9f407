#include "ncwnnm/block_match.hpp"

#include <algorithm>
#include <tuple>

#include "ncwnnm/errors.hpp"

namespace ncw {

void MatchConfig::validate() const {
  if (shape.side < 1) throw ParameterError("patch side must be positive");
  if (group_size < 1) throw ParameterError("group size must be at least 1");
  if (window < shape.side) throw ParameterError("search window must be at least one patch wide");
}

std::vector<PatchIndex> window_candidates(const Image& img, PatchIndex exemplar, const MatchConfig& cfg) {
  cfg.validate();
  const int side = cfg.shape.side;
  if (exemplar.row < 0 || exemplar.col < 0 || exemplar.row + side > img.height() || exemplar.col + side > img.width())
    throw DataError("exemplar patch lies outside the image");
  const int half = cfg.window / 2;
  const int r0 = std::max(0, exemplar.row - half);
  const int r1 = std::min(img.height() - side, exemplar.row - half + cfg.window - 1);
  const int c0 = std::max(0, exemplar.col - half);
  const int c1 = std::min(img.width() - side, exemplar.col - half + cfg.window - 1);
  std::vector<PatchIndex> out;
  out.reserve(static_cast<std::size_t>(r1 - r0 + 1) * static_cast<std::size_t>(c1 - c0 + 1));
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c) out.push_back({r, c});
  return out;
}

namespace {

double patch_distance(const Image& img, PatchIndex a, PatchIndex b, int side) {
  const double* base = img.pixels().data();
  const std::size_t w = static_cast<std::size_t>(img.width());
  double sum = 0.0;
  for (int r = 0; r < side; ++r) {
    const double* pa = base + static_cast<std::size_t>(a.row + r) * w + a.col;
    const double* pb = base + static_cast<std::size_t>(b.row + r) * w + b.col;
    for (int c = 0; c < side; ++c) {
      const double d = pa[c] - pb[c];
      sum += d * d;
    }
  }
  return sum;
}

}  // namespace

std::vector<PatchMatch> match_patches(const Image& img, PatchIndex exemplar, const MatchConfig& cfg) {
  const auto candidates = window_candidates(img, exemplar, cfg);
  std::vector<PatchMatch> others;
  others.reserve(candidates.size());
  for (const PatchIndex idx : candidates)
    if (idx != exemplar) others.push_back({idx, patch_distance(img, exemplar, idx, cfg.shape.side)});

  const auto keep = std::min(others.size(), static_cast<std::size_t>(cfg.group_size - 1));
  const auto by_key = [](const PatchMatch& a, const PatchMatch& b) {
    return std::tie(a.distance, a.index) < std::tie(b.distance, b.index);
  };
  std::partial_sort(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(keep), others.end(), by_key);

  std::vector<PatchMatch> out;
  out.reserve(keep + 1);
  out.push_back({exemplar, 0.0});
  out.insert(out.end(), others.begin(), others.begin() + static_cast<std::ptrdiff_t>(keep));
  return out;
}

PatchGroup find_group(const Image& img, PatchIndex exemplar, const MatchConfig& cfg) {
  const auto matches = match_patches(img, exemplar, cfg);
  std::vector<PatchIndex> members;
  members.reserve(matches.size());
  for (const auto& m : matches) members.push_back(m.index);
  return extract_group(img, members, cfg.shape);
}

}  // namespace ncw
