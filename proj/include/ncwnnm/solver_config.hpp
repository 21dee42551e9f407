#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "ncwnnm/keyvalue.hpp"
#include "ncwnnm/lowrank_prox.hpp"

namespace ncw {

enum class Task { deblur, inpaint, cs };

std::string to_string(Task task);
Task parse_task(const std::string& name);

std::string_view to_string(VarianceEstimator e);
std::optional<VarianceEstimator> parse_estimator(std::string_view name);

enum class BlurKind { gaussian, uniform };

/// Every tunable of the restoration loop. Defaults follow the published
/// experiment settings; see the *_defaults factories.
struct SolverConfig {
  Task task = Task::deblur;
  int patch_side = 8;            ///< sqrt(d)
  int group_size = 60;           ///< m
  int window = 25;               ///< L
  int stride = 0;                ///< exemplar stride; 0 selects default_stride()
  double rho = 0.02;
  double p = 0.7;
  double noise_std = 1.4142135623730951;  ///< delta
  double epsilon = 0.1;
  double varsigma = 0.3;
  int gst_iterations = 2;        ///< J
  int iterations = 100;          ///< outer iterations T
  int grad_steps = 1;            ///< gradient steps per X update (cs)
  double step_size = 0.0;        ///< mu for cs; 0 selects the exact line-search step
  int group_refresh = 1;         ///< re-run block matching every k iterations
  bool baseline = false;         ///< NNM (singular value thresholding) instead of NCW-NNM
  VarianceEstimator estimator = VarianceEstimator::population;
  double intensity_scale = 1.0 / 255.0;  ///< factor applied to intensities seen by the prior

  void validate() const;
  int effective_stride() const;

  /// 8x8 patches, m = 60, L = 25, eps = 0.1, varsigma = 0.3, J = 2, T = 100;
  /// (rho, p) = (0.02, 0.7) Gaussian blur, (0.06, 0.6) uniform blur.
  static SolverConfig deblur_defaults(BlurKind kind);
  /// As deblur with T = 200 and (rho, p) picked from the nearest tabulated
  /// missing rate: 50% (0.04, 0.95), 60% (0.03, 0.95), 70% and 80% (0.0003, 0.45).
  static SolverConfig inpaint_defaults(double missing_rate);
  /// 7x7 patches, m = 60, L = 20, eps = 0.1, varsigma = 0.4, J = 2, T = 200,
  /// delta = 5, 20 line-search gradient steps per X update;
  /// (p, rho) from the nearest tabulated subrate: 0.1 (0.65, 0.0001),
  /// 0.2 (0.5, 0.0005), 0.3 and 0.4 (0.95, 0.005).
  static SolverConfig cs_defaults(double subrate);
};

/// Overrides `base` with the keys present in `kv`; unknown keys are rejected.
/// Keys: task, patch, group_size, window, stride, rho, p, delta, epsilon,
/// varsigma, gst_iterations, iterations, grad_steps, step_size,
/// group_refresh, baseline, variance (population | per_value | mean_square),
/// intensity_scale.
SolverConfig apply_config(const KeyValueFile& kv, SolverConfig base);

std::string serialize(const SolverConfig& cfg);

}  // namespace ncw
