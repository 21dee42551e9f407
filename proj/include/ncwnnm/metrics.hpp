#pragma once

#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "ncwnnm/image.hpp"

namespace ncw {

inline constexpr double kPeak = 255.0;

/// Mean squared difference; DataError on shape mismatch.
double mse(const Image& a, const Image& b);

/// 10 log10(255^2 / mse). Identical images give +infinity, the "exact" marker.
double psnr(const Image& a, const Image& b);

inline bool is_exact(double psnr_db) noexcept { return psnr_db == std::numeric_limits<double>::infinity(); }

/// PSNR as printed in reports: fixed 4 decimals, or "exact".
std::string format_psnr(double psnr_db);

struct EvalReport {
  std::string image;      ///< image under test
  std::string reference;  ///< ground truth
  std::string method;     ///< e.g. NCW-NNM, NNM, degraded
  double psnr = 0.0;
  double mse = 0.0;
};

EvalReport evaluate(const Image& image, const Image& reference, std::string image_id, std::string reference_id,
                    std::string method);

void write_report_csv(std::ostream& out, const std::vector<EvalReport>& rows);

}  // namespace ncw
