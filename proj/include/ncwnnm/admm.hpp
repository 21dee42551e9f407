#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "ncwnnm/image.hpp"
#include "ncwnnm/operators.hpp"
#include "ncwnnm/solver_config.hpp"

namespace ncw {

struct TraceRecord {
  int iteration = 0;
  double psnr = 0.0;       ///< against the reference; NaN when none was given
  double residual = 0.0;   ///< ||X - Z||
  double objective = 0.0;  ///< 0.5 ||y - HX||^2 + sum_i lambda_i F(Z_i)
  int failed_groups = 0;   ///< groups passed through unshrunk after an SVD failure
};

/// ADMM iterate (X, Z, C) plus what the loop carries between steps.
struct AdmmState {
  Image x;
  Image z;
  Image c;
  int iteration = 0;
  std::vector<TraceRecord> trace;

  /// Member lists from the latest block matching, reused between refreshes.
  std::vector<std::vector<PatchIndex>> groups;
  /// H^T y, only for projection operators.
  Image back_projection;
};

/// The task an operator implies: blur -> deblur, mask -> inpaint, projection -> cs.
Task task_for(const DegradationOperator& op);

/// C = 0 and Z = X = X0 where X0 is y (deblur), y with unobserved pixels set
/// to the mean observed value (inpaint), or H^T y (cs).
AdmmState initialize(const Observation& y, const DegradationOperator& op);

/// One outer iteration: X update, block matching on R = X - C, per-group
/// shrinkage, aggregation into Z, multiplier update C <- C - (X - Z).
void step(AdmmState& state, const Observation& y, const DegradationOperator& op, const SolverConfig& cfg,
          const Image* reference = nullptr);

struct SolveResult {
  Image image;
  std::vector<TraceRecord> trace;  ///< entry 0 describes the initialisation
};

/// Runs cfg.iterations steps from initialize(). ConfigError when cfg.task does
/// not match the operator.
SolveResult solve(const Observation& y, const DegradationOperator& op, const SolverConfig& cfg,
                  const std::optional<Image>& reference = std::nullopt);

/// CSV with header `iteration,psnr,residual,objective,failed_groups`.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);

}  // namespace ncw
