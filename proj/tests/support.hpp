#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Core>

#include "ncwnnm/image.hpp"
#include "ncwnnm/pgm.hpp"
#include "ncwnnm/random.hpp"

namespace testing {

inline ncw::Image random_image(int h, int w, std::uint64_t seed, double lo = 0.0, double hi = 255.0) {
  ncw::Rng rng(seed);
  ncw::Image img(h, w);
  for (double& v : img.pixels()) v = lo + (hi - lo) * rng.uniform();
  return img;
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, ncw::Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

inline Eigen::VectorXd random_vector(Eigen::Index n, ncw::Rng& rng) {
  Eigen::VectorXd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

inline double max_abs_diff(const ncw::Image& a, const ncw::Image& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.pixels()[i] - b.pixels()[i]));
  return m;
}

inline ncw::Image crop(const std::string& name) {
  return ncw::read_pgm(std::string(NCW_TEST_DATA) + "/" + name + "128.pgm");
}

inline ncw::Image sub_image(const ncw::Image& img, int row, int col, int h, int w) {
  ncw::Image out(h, w);
  for (int r = 0; r < h; ++r)
    for (int c = 0; c < w; ++c) out(r, c) = img(row + r, col + c);
  return out;
}

}  // namespace testing
