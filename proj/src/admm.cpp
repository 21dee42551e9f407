#include "ncwnnm/admm.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "ncwnnm/block_match.hpp"
#include "ncwnnm/errors.hpp"
#include "ncwnnm/lowrank_prox.hpp"
#include "ncwnnm/metrics.hpp"

namespace ncw {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double data_fidelity(const Observation& y, const DegradationOperator& op, const Image& x) {
  return 0.5 * (y - apply(op, x)).squaredNorm();
}

Image mean_fill(const MaskOperator& mask, const Image& y) {
  double sum = 0.0;
  std::size_t count = 0;
  const auto& flags = mask.observed_flags();
  auto px = y.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) {
    if (flags[i]) {
      sum += px[i];
      ++count;
    }
  }
  const double mean = sum / static_cast<double>(count);
  Image out = y;
  auto dst = out.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i)
    if (!flags[i]) dst[i] = mean;
  return out;
}

void refresh_groups(AdmmState& state, const Image& r, const SolverConfig& cfg) {
  const PatchShape shape{cfg.patch_side};
  const MatchConfig match{shape, cfg.group_size, cfg.window};
  const auto exemplars = exemplar_grid(r.height(), r.width(), shape, cfg.effective_stride());
  state.groups.clear();
  state.groups.reserve(exemplars.size());
  for (const PatchIndex ex : exemplars) {
    const auto matches = match_patches(r, ex, match);
    std::vector<PatchIndex> members;
    members.reserve(matches.size());
    for (const auto& m : matches) members.push_back(m.index);
    state.groups.push_back(std::move(members));
  }
}

}  // namespace

Task task_for(const DegradationOperator& op) {
  if (op.holds<BlurOperator>()) return Task::deblur;
  if (op.holds<MaskOperator>()) return Task::inpaint;
  return Task::cs;
}

AdmmState initialize(const Observation& y, const DegradationOperator& op) {
  if (y.size() != observation_size(op)) throw DataError("observation length does not match operator");
  AdmmState state;
  if (const auto* p = op.get_if<BlockProjectionOperator>()) {
    state.back_projection = p->adjoint(y);
    state.x = state.back_projection;
  } else if (const auto* m = op.get_if<MaskOperator>()) {
    state.x = mean_fill(*m, observation_image(op, y));
  } else {
    state.x = observation_image(op, y);
  }
  state.z = state.x;
  state.c = Image(state.x.height(), state.x.width());
  return state;
}

void step(AdmmState& state, const Observation& y, const DegradationOperator& op, const SolverConfig& cfg,
          const Image* reference) {
  // X update
  if (const auto* proj = op.get_if<BlockProjectionOperator>()) {
    if (state.back_projection.empty()) state.back_projection = proj->adjoint(y);
    for (int s = 0; s < cfg.grad_steps; ++s) {
      const double mu = cfg.step_size > 0.0
                            ? cfg.step_size
                            : optimal_step_x(*proj, state.x, state.back_projection, state.z, state.c, cfg.rho);
      state.x = grad_step_x(*proj, state.x, state.back_projection, state.z, state.c, cfg.rho, mu);
    }
  } else {
    state.x = solve_x_structured(op, y, state.z, state.c, cfg.rho);
  }
  if (!state.x.all_finite()) throw NumericalError("X update produced non-finite values");

  // Z update on R = X - C
  const Image r = state.x - state.c;
  if (state.groups.empty() || state.iteration % cfg.group_refresh == 0) refresh_groups(state, r, cfg);

  const PatchShape shape{cfg.patch_side};
  double total_elements = 0.0;
  for (const auto& g : state.groups) total_elements += static_cast<double>(g.size()) * shape.area();

  GroupProxParams params;
  params.p = cfg.p;
  params.rho = cfg.rho;
  params.noise_std = cfg.noise_std;
  params.epsilon = cfg.epsilon;
  params.varsigma = cfg.varsigma;
  params.gst_iterations = cfg.gst_iterations;
  params.total_elements = total_elements;
  params.pixel_count = static_cast<double>(r.size());
  params.estimator = cfg.estimator;
  params.intensity_scale = cfg.intensity_scale;

  GroupAggregator aggregator(r.height(), r.width(), shape);
  double penalty = 0.0;
  int failed = 0;
  for (const auto& members : state.groups) {
    const PatchGroup group = extract_group(r, members, shape);
    try {
      const ProxResult res = cfg.baseline ? nnm_group_prox(group.matrix, params) : group_prox(group.matrix, params);
      aggregator.add(members, res.matrix);
      penalty += res.penalty;
    } catch (const NumericalError&) {
      aggregator.add(group);
      ++failed;
    }
  }
  state.z = aggregator.finish(&r);

  // multiplier update
  state.c = state.c - (state.x - state.z);
  ++state.iteration;

  TraceRecord rec;
  rec.iteration = state.iteration;
  rec.psnr = reference ? psnr(state.x, *reference) : kNaN;
  rec.residual = std::sqrt(squared_norm(state.x - state.z));
  rec.objective = data_fidelity(y, op, state.x) + penalty;
  rec.failed_groups = failed;
  state.trace.push_back(rec);
}

SolveResult solve(const Observation& y, const DegradationOperator& op, const SolverConfig& cfg,
                  const std::optional<Image>& reference) {
  cfg.validate();
  if (cfg.task != task_for(op))
    throw ConfigError("config task '" + to_string(cfg.task) + "' does not match operator task '" +
                      to_string(task_for(op)) + "'");
  const Image* ref = reference ? &*reference : nullptr;
  if (ref && (ref->height() != image_height(op) || ref->width() != image_width(op)))
    throw DataError("reference image shape does not match operator");

  AdmmState state = initialize(y, op);
  TraceRecord first;
  first.psnr = ref ? psnr(state.x, *ref) : kNaN;
  first.objective = data_fidelity(y, op, state.x);
  state.trace.push_back(first);
  for (int k = 0; k < cfg.iterations; ++k) step(state, y, op, cfg, ref);
  return {std::move(state.x), std::move(state.trace)};
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace) {
  out << "iteration,psnr,residual,objective,failed_groups\n";
  char buf[96];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof(buf), ",%.10g,%.10g,", r.residual, r.objective);
    out << r.iteration << ',' << format_psnr(r.psnr) << buf << r.failed_groups << '\n';
  }
}

}  // namespace ncw
