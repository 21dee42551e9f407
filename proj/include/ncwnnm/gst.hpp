#pragma once

namespace ncw {

/// Parameters of the scalar problem  min_{s >= 0} 0.5 (s - |gamma|)^2 + weight * s^p.
struct GstParams {
  double p = 1.0;       ///< exponent in (0, 1]
  double weight = 0.0;  ///< non-negative penalty weight
  int iterations = 2;   ///< fixed-point iterations J >= 1

  /// Throws ParameterError when any field is outside its domain.
  void validate() const;
};

/// Largest |gamma| for which the minimiser is exactly zero:
///   (2w(1-p))^{1/(2-p)} + w p (2w(1-p))^{(p-1)/(2-p)}.
/// At p = 1 this is w (soft thresholding).
double gst_threshold(double p, double weight);

/// Generalized soft-thresholding. Zero inside the dead zone |gamma| <= threshold;
/// otherwise J iterations of s <- |gamma| - w p s^{p-1} started from |gamma|,
/// returned with the sign of gamma.
double gst_solve(double gamma, const GstParams& params);

/// 0.5 (s - gamma)^2 + weight |s|^p, the objective gst_solve minimises.
double gst_objective(double s, double gamma, double p, double weight);

}  // namespace ncw
