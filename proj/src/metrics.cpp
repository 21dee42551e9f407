#include "ncwnnm/metrics.hpp"

#include <cmath>
#include <cstdio>

namespace ncw {

double mse(const Image& a, const Image& b) {
  require_same_shape(a, b, "mse");
  if (a.empty()) return 0.0;
  return (a.vector() - b.vector()).squaredNorm() / static_cast<double>(a.size());
}

double psnr(const Image& a, const Image& b) {
  const double err = mse(a, b);
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(kPeak * kPeak / err);
}

std::string format_psnr(double psnr_db) {
  if (is_exact(psnr_db)) return "exact";
  if (std::isnan(psnr_db)) return "";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.4f", psnr_db);
  return buf;
}

EvalReport evaluate(const Image& image, const Image& reference, std::string image_id, std::string reference_id,
                    std::string method) {
  EvalReport r;
  r.image = std::move(image_id);
  r.reference = std::move(reference_id);
  r.method = std::move(method);
  r.mse = mse(image, reference);
  r.psnr = psnr(image, reference);
  return r;
}

void write_report_csv(std::ostream& out, const std::vector<EvalReport>& rows) {
  out << "image,reference,method,psnr,mse\n";
  char buf[32];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof(buf), "%.6f", r.mse);
    out << r.image << ',' << r.reference << ',' << r.method << ',' << format_psnr(r.psnr) << ',' << buf << '\n';
  }
}

}  // namespace ncw
