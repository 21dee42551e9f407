// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ncwnnm/admm.hpp"
#include "ncwnnm/block_match.hpp"
#include "ncwnnm/gst.hpp"
#include "ncwnnm/lowrank_prox.hpp"
#include "ncwnnm/metrics.hpp"
#include "ncwnnm/operator_spec.hpp"
#include "ncwnnm/operators.hpp"
#include "ncwnnm/pgm.hpp"
#include "ncwnnm/random.hpp"

using namespace ncw;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Image crop(const std::string& name) { return read_pgm(std::string(NCW_TEST_DATA) + "/" + name + "128.pgm"); }

Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = rng.normal();
  return m;
}

Eigen::MatrixXd random_orthogonal(Eigen::Index n, Rng& rng) {
  return Eigen::HouseholderQR<Eigen::MatrixXd>(random_matrix(n, n, rng)).householderQ();
}

// ---------------------------------------------------------------- 1 -------

double scalar_objective(double s, double a, double p, double w) { return 0.5 * (s - a) * (s - a) + w * std::pow(s, p); }

// Argmin of the scalar objective over the grid {0, h, 2h, ..., |g|}. The
// objective is concave below s0 = (w p (1-p))^{1/(2-p)} and convex above, so
// the grid minimum is 0 or the minimum of the convex tail, found by integer
// ternary search.
double grid_argmin(double g, double p, double w) {
  constexpr double h = 1e-5;
  const double a = std::abs(g);
  const long n = static_cast<long>(std::floor(a / h));
  auto at = [&](long i) { return std::min(a, static_cast<double>(i) * h); };
  auto f = [&](long i) { return scalar_objective(at(i), a, p, w); };
  const double s0 = p < 1.0 ? std::pow(w * p * (1.0 - p), 1.0 / (2.0 - p)) : 0.0;
  long lo = std::clamp(static_cast<long>(std::floor(s0 / h)), 0L, n + 1), hi = n + 1;
  while (hi - lo > 2) {
    const long m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
    if (f(m1) <= f(m2))
      hi = m2;
    else
      lo = m1;
  }
  long best = 0;
  for (long i = lo; i <= hi; ++i)
    if (f(i) < f(best)) best = i;
  return std::copysign(at(best), g);
}

Outcome gst_lattice() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  bool soft_exact = true;
  for (const double p : {0.3, 0.5, 0.6, 0.7, 0.95, 1.0})
    for (const double w : {0.1, 1.0, 5.0})
      for (int k = -40; k <= 40; ++k) {
        const double g = 0.25 * k;
        const double s = gst_solve(g, {p, w, 10});
        worst = std::max(worst, std::abs(s - grid_argmin(g, p, w)));
        if (p == 1.0) soft_exact = soft_exact && s == std::copysign(std::max(std::abs(g) - w, 0.0), g);
      }
  const double secs = seconds_since(t0);
  return {worst < 1e-3 && soft_exact && secs < 10.0,
          fmt("max |gst - grid| %.2e, p=1 soft threshold %s, %.1f s", worst, soft_exact ? "exact" : "inexact", secs)};
}

// ---------------------------------------------------------------- 2 -------

GroupProxParams prox_params() {
  GroupProxParams params;
  params.p = 0.7;
  params.rho = 0.5;
  params.noise_std = 1.0;
  params.total_elements = 96.0;
  params.pixel_count = 100.0;
  params.gst_iterations = 3;
  return params;
}

// U diag(sigma) V^T with sigma_j the scalar solution for gamma_j, all from JacobiSVD.
Eigen::MatrixXd reference_prox(const Eigen::MatrixXd& r, const GroupProxParams& params) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd gamma = svd.singularValues();
  const double mean = gamma.mean();
  const double theta = (gamma.array() - mean).square().mean();
  const double lambda = 2.0 * std::sqrt(2.0) * params.noise_std * params.noise_std / (theta + params.varsigma);
  const double tau = lambda * params.total_elements / (params.rho * params.pixel_count);
  Eigen::VectorXd sigma(gamma.size());
  for (Eigen::Index j = 0; j < gamma.size(); ++j) {
    const double w = 1.0 / (gamma[j] + params.epsilon);
    sigma[j] = gst_solve(gamma[j], {params.p, tau * w, params.gst_iterations});
  }
  return svd.matrixU() * sigma.asDiagonal() * svd.matrixV().transpose();
}

Outcome prox_structure() {
  Rng rng(2024);
  const GroupProxParams params = prox_params();
  double worst = 0.0, worst_unitary = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Eigen::MatrixXd r = 3.0 * random_matrix(8, 12, rng);
    const Eigen::MatrixXd z = group_prox(r, params).matrix;
    worst = std::max(worst, (z - reference_prox(r, params)).norm() / std::max(1.0, z.norm()));

    const Eigen::MatrixXd p = random_orthogonal(8, rng), q = random_orthogonal(12, rng);
    const Eigen::MatrixXd rotated = group_prox(p * r * q, params).matrix;
    worst_unitary = std::max(worst_unitary, (rotated - p * z * q).norm() / std::max(1.0, z.norm()));
  }
  return {worst < 1e-6 && worst_unitary < 1e-6,
          fmt("max relative error %.2e, unitary invariance %.2e", worst, worst_unitary)};
}

// ---------------------------------------------------------------- 3 -------

Outcome nnm_equivalence() {
  Rng rng(77);
  double worst = 0.0;
  for (int t = 0; t < 50; ++t) {
    const Eigen::Index rows = 4 + t % 9, cols = 3 + (t * 7) % 13;
    const Eigen::MatrixXd r = random_matrix(rows, cols, rng);
    const double tau = 0.05 + 0.05 * (t % 20);
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd shrunk = (svd.singularValues().array() - tau).max(0.0).matrix();
    const Eigen::MatrixXd expect = svd.matrixU() * shrunk.asDiagonal() * svd.matrixV().transpose();
    worst = std::max(worst, (nnm_prox(r, tau) - expect).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-8, fmt("max |nnm_prox - svt| %.2e over 50 matrices", worst)};
}

// ---------------------------------------------------------------- 4 -------

double adjoint_gap(const DegradationOperator& op, std::uint64_t seed) {
  Rng rng(seed);
  Image x(image_height(op), image_width(op));
  for (double& v : x.pixels()) v = rng.normal();
  Observation y(observation_size(op));
  for (Eigen::Index i = 0; i < y.size(); ++i) y[i] = rng.normal();
  const double lhs = apply(op, x).dot(y), rhs = dot(x, apply_adjoint(op, y));
  return std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs));
}

Eigen::MatrixXd dense_matrix(const DegradationOperator& op) {
  const int h = image_height(op), w = image_width(op);
  Eigen::MatrixXd m(observation_size(op), h * w);
  for (int i = 0; i < h * w; ++i) {
    Image e(h, w);
    e.pixels()[static_cast<std::size_t>(i)] = 1.0;
    m.col(i) = apply(op, e);
  }
  return m;
}

Outcome operator_exactness() {
  Rng rng(5);
  Eigen::MatrixXd kernel(5, 5);
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) kernel(i, j) = rng.uniform() + 0.1;
  kernel /= kernel.sum();

  double adjoint = 0.0;
  adjoint = std::max(adjoint, adjoint_gap(BlurOperator(gaussian_kernel(25, 1.6), 48, 40), 1));
  adjoint = std::max(adjoint, adjoint_gap(BlurOperator(kernel, 31, 29), 2));
  adjoint = std::max(adjoint, adjoint_gap(MaskOperator::random(40, 36, 0.5, 3), 3));
  adjoint = std::max(adjoint, adjoint_gap(BlockProjectionOperator(64, 96, 307, 4), 4));

  double solve = 0.0;
  const double rho = 0.07;
  const std::vector<DegradationOperator> ops{BlurOperator(kernel, 8, 8), BlurOperator(uniform_kernel(3), 8, 8),
                                             MaskOperator::random(8, 8, 0.5, 9)};
  for (const auto& op : ops) {
    Image z(8, 8), c(8, 8);
    for (double& v : z.pixels()) v = 255.0 * rng.uniform();
    for (double& v : c.pixels()) v = rng.normal();
    Image truth(8, 8);
    for (double& v : truth.pixels()) v = 255.0 * rng.uniform();
    const Observation y = apply(op, truth);
    const Eigen::MatrixXd h = dense_matrix(op);
    const Eigen::VectorXd expect = (h.transpose() * h + rho * Eigen::MatrixXd::Identity(64, 64))
                                       .ldlt()
                                       .solve(h.transpose() * y + rho * (z + c).vector());
    solve = std::max(solve, (solve_x_structured(op, y, z, c, rho).vector() - expect).cwiseAbs().maxCoeff());
  }
  return {adjoint < 1e-8 && solve < 1e-8, fmt("adjoint gap %.2e, dense solve gap %.2e", adjoint, solve)};
}

// ---------------------------------------------------------------- 5 -------

Outcome group_error_agreement() {
  const Image r = crop("camera");
  const PatchShape shape{8};
  const MatchConfig cfg{shape, 60, 25};
  std::vector<std::vector<PatchIndex>> groups;
  for (const PatchIndex ex : exemplar_grid(r.height(), r.width(), shape, default_stride(shape))) {
    std::vector<PatchIndex> members;
    for (const auto& m : match_patches(r, ex, cfg)) members.push_back(m.index);
    groups.push_back(std::move(members));
  }
  double worst = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    Rng rng(seed);
    Image z = r;
    for (double& v : z.pixels()) v += 10.0 * rng.normal();
    worst = std::max(worst, check_theorem1(z, r, groups, shape));
  }
  return {worst < 0.1, fmt("max relative gap %.4f over 10 seeds", worst)};
}

// ------------------------------------------------------------- runs -------

struct Run {
  double initial = 0.0;
  double final = 0.0;
  double seconds = 0.0;
  std::vector<TraceRecord> trace;
  std::string bytes;  ///< quantised PGM followed by the trace CSV
};

Run restore(const Image& ref, const OperatorSpec& spec, bool baseline) {
  const DegradationOperator op = build_operator(spec, ref.height(), ref.width());
  Observation y = apply(op, ref);
  if (spec.noise > 0.0) {
    Rng rng(spec.seed + 1000);
    for (Eigen::Index i = 0; i < y.size(); ++i) y[i] += spec.noise * rng.normal();
  }
  SolverConfig cfg = default_config_for(spec);
  cfg.baseline = baseline;
  const auto t0 = Clock::now();
  SolveResult result = solve(y, op, cfg, ref);
  Run run;
  run.seconds = seconds_since(t0);
  run.initial = result.trace.front().psnr;
  run.final = result.trace.back().psnr;
  std::ostringstream csv;
  write_trace_csv(csv, result.trace);
  run.bytes = encode_pgm(result.image) + csv.str();
  run.trace = std::move(result.trace);
  return run;
}

OperatorSpec mask_spec() {
  OperatorSpec spec;
  spec.type = OperatorSpec::Type::mask;
  spec.density = 0.5;
  spec.seed = 1;
  return spec;
}

OperatorSpec blur_spec() {
  OperatorSpec spec;
  spec.type = OperatorSpec::Type::blur;
  spec.kernel = BlurKind::uniform;
  spec.kernel_size = 9;
  spec.noise = std::sqrt(2.0);
  spec.seed = 5;
  return spec;
}

OperatorSpec cs_spec() {
  OperatorSpec spec;
  spec.type = OperatorSpec::Type::cs;
  spec.subrate = 0.3;
  spec.seed = 1;
  return spec;
}

// ---------------------------------------------------------------- 6, 7 ----

std::vector<Run> inpaint_runs;

Outcome inpainting() {
  int wins = 0;
  bool ok = true;
  std::string detail;
  for (const std::string name : {"camera", "astronaut", "chelsea"}) {
    const Image ref = crop(name);
    Run ncw = restore(ref, mask_spec(), false);
    const Run nnm = restore(ref, mask_spec(), true);
    const double gain = ncw.final - ncw.initial;
    if (ncw.final > nnm.final) ++wins;
    ok = ok && gain >= 5.0 && ncw.seconds + nnm.seconds < 600.0;
    detail += fmt("%s %.2f->%.2f dB (NNM %.2f, %.0f s); ", name.c_str(), ncw.initial, ncw.final, nnm.final,
                  ncw.seconds + nnm.seconds);
    inpaint_runs.push_back(std::move(ncw));
  }
  detail += fmt("beats NNM on %d of 3", wins);
  return {ok && wins >= 2, detail};
}

Outcome convergence_shape() {
  if (inpaint_runs.empty()) return {false, "no inpainting traces"};
  double worst = 0.0;
  for (const Run& run : inpaint_runs) {
    const auto& t = run.trace;
    const std::size_t iterations = t.size() - 1;
    const std::size_t start = t.size() - 1 - iterations / 5;
    double peak = t[start].psnr;
    for (std::size_t i = start + 1; i < t.size(); ++i) {
      worst = std::max(worst, peak - t[i].psnr);
      peak = std::max(peak, t[i].psnr);
    }
  }
  return {worst <= 0.05, fmt("largest drop over the final 20%% of iterations %.4f dB", worst)};
}

// ---------------------------------------------------------------- 8, 9 ----

std::string deblur_bytes;

Outcome deblurring() {
  const Image ref = crop("camera");
  const Run run = restore(ref, blur_spec(), false);
  deblur_bytes = run.bytes;
  const double gain = run.final - run.initial;
  return {gain >= 2.0 && run.seconds < 600.0,
          fmt("camera %.2f->%.2f dB (+%.2f), %.0f s", run.initial, run.final, gain, run.seconds)};
}

Outcome compressive_sensing() {
  const Image ref = crop("camera");
  const Run run = restore(ref, cs_spec(), false);
  const double gain = run.final - run.initial;
  return {gain >= 3.0, fmt("camera back-projection %.2f dB, restored %.2f dB (+%.2f), %.0f s", run.initial, run.final,
                           gain, run.seconds)};
}

// ---------------------------------------------------------------- 10 ------

Outcome determinism() {
  const Image ref = crop("camera");
  if (deblur_bytes.empty()) deblur_bytes = restore(ref, blur_spec(), false).bytes;
  const std::string again = restore(ref, blur_spec(), false).bytes;
  OperatorSpec small = mask_spec();
  small.seed = 9;
  const Image part = [&] {
    Image out(48, 48);
    for (int r = 0; r < 48; ++r)
      for (int c = 0; c < 48; ++c) out(r, c) = ref(r + 40, c + 40);
    return out;
  }();
  const bool mask_same = restore(part, small, false).bytes == restore(part, small, false).bytes;
  const bool same = again == deblur_bytes && mask_same;
  return {same, fmt("repeated deblur run %s, repeated inpainting run %s",
                    again == deblur_bytes ? "identical" : "differs", mask_same ? "identical" : "differs")};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"GST oracle lattice", gst_lattice},
      {"group prox structure", prox_structure},
      {"NNM equivalence", nnm_equivalence},
      {"adjoint and solver exactness", operator_exactness},
      {"group/global error agreement", group_error_agreement},
      {"desk-scale inpainting", inpainting},
      {"convergence shape", convergence_shape},
      {"desk-scale deblurring", deblurring},
      {"desk-scale compressive sensing", compressive_sensing},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    if (!out.pass) ++failures;
    std::printf("%s %2zu %s: %s\n", out.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, out.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
