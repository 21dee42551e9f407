#pragma once

#include <vector>

#include "ncwnnm/image.hpp"

namespace ncw {

struct MatchConfig {
  PatchShape shape{8};
  int group_size = 60;  ///< m, patches per group
  int window = 25;      ///< L, side of the search window in pixels

  void validate() const;
};

struct PatchMatch {
  PatchIndex index;
  double distance = 0.0;  ///< squared Euclidean distance to the exemplar
};

/// Candidate top-left corners: the L x L window whose rows span
/// [row - L/2, row - L/2 + L - 1] (same for columns), clipped to valid patch
/// positions, visited at every pixel.
std::vector<PatchIndex> window_candidates(const Image& img, PatchIndex exemplar, const MatchConfig& cfg);

/// The exemplar followed by the (m - 1) closest other candidates, ordered by
/// (distance, row, col). Fewer than m entries when the window is small.
std::vector<PatchMatch> match_patches(const Image& img, PatchIndex exemplar, const MatchConfig& cfg);

/// match_patches stacked into a d x m group.
PatchGroup find_group(const Image& img, PatchIndex exemplar, const MatchConfig& cfg);

}  // namespace ncw
