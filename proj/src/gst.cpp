#include "ncwnnm/gst.hpp"

#include <cmath>

#include "ncwnnm/errors.hpp"

namespace ncw {

void GstParams::validate() const {
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("GST exponent p must lie in (0, 1]");
  if (!(weight >= 0.0) || !std::isfinite(weight)) throw ParameterError("GST weight must be finite and non-negative");
  if (iterations < 1) throw ParameterError("GST needs at least one iteration");
}

double gst_threshold(double p, double weight) {
  if (weight == 0.0) return 0.0;
  if (p == 1.0) return weight;  // second term is w * 1 * 0^0
  const double base = 2.0 * weight * (1.0 - p);
  return std::pow(base, 1.0 / (2.0 - p)) + weight * p * std::pow(base, (p - 1.0) / (2.0 - p));
}

double gst_solve(double gamma, const GstParams& params) {
  params.validate();
  const double magnitude = std::abs(gamma);
  if (magnitude <= gst_threshold(params.p, params.weight)) return 0.0;
  double s = magnitude;
  if (params.p == 1.0) {
    s = magnitude - params.weight;
  } else {
    for (int t = 0; t < params.iterations; ++t) s = magnitude - params.weight * params.p * std::pow(s, params.p - 1.0);
  }
  return std::copysign(s, gamma);
}

double gst_objective(double s, double gamma, double p, double weight) {
  const double d = s - gamma;
  return 0.5 * d * d + weight * std::pow(std::abs(s), p);
}

}  // namespace ncw
