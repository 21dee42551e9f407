#include "ncwnnm/solver_config.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "ncwnnm/errors.hpp"
#include "ncwnnm/image.hpp"

namespace ncw {

std::string to_string(Task task) {
  switch (task) {
    case Task::deblur: return "deblur";
    case Task::inpaint: return "inpaint";
    case Task::cs: return "cs";
  }
  return "?";
}

Task parse_task(const std::string& name) {
  if (name == "deblur") return Task::deblur;
  if (name == "inpaint") return Task::inpaint;
  if (name == "cs") return Task::cs;
  throw ConfigError("unknown task '" + name + "'");
}

void SolverConfig::validate() const {
  if (patch_side < 1) throw ConfigError("patch must be positive");
  if (group_size < 1) throw ConfigError("group_size must be positive");
  if (window < patch_side) throw ConfigError("window must be at least the patch side");
  if (stride < 0) throw ConfigError("stride must be non-negative");
  if (!(rho > 0.0)) throw ConfigError("rho must be positive");
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("p must lie in (0, 1]");
  if (!(noise_std >= 0.0)) throw ConfigError("delta must be non-negative");
  if (!(epsilon > 0.0)) throw ConfigError("epsilon must be positive");
  if (!(varsigma > 0.0)) throw ConfigError("varsigma must be positive");
  if (gst_iterations < 1) throw ConfigError("gst_iterations must be positive");
  if (iterations < 0) throw ConfigError("iterations must be non-negative");
  if (grad_steps < 1) throw ConfigError("grad_steps must be positive");
  if (!(step_size >= 0.0)) throw ConfigError("step_size must be non-negative");
  if (group_refresh < 1) throw ConfigError("group_refresh must be positive");
  if (!(intensity_scale > 0.0) || !std::isfinite(intensity_scale)) throw ConfigError("intensity_scale must be positive");
}

int SolverConfig::effective_stride() const {
  return stride > 0 ? stride : default_stride(PatchShape{patch_side});
}

SolverConfig SolverConfig::deblur_defaults(BlurKind kind) {
  SolverConfig cfg;
  cfg.task = Task::deblur;
  cfg.iterations = 100;
  if (kind == BlurKind::gaussian) {
    cfg.rho = 0.02;
    cfg.p = 0.7;
  } else {
    cfg.rho = 0.06;
    cfg.p = 0.6;
  }
  return cfg;
}

namespace {

struct Setting {
  double key;
  double rho;
  double p;
};

template <std::size_t N>
const Setting& nearest(const std::array<Setting, N>& table, double key) {
  const Setting* best = &table[0];
  for (const auto& s : table)
    if (std::abs(s.key - key) < std::abs(best->key - key)) best = &s;
  return *best;
}

}  // namespace

SolverConfig SolverConfig::inpaint_defaults(double missing_rate) {
  static constexpr std::array<Setting, 4> table{{
      {0.5, 0.04, 0.95},
      {0.6, 0.03, 0.95},
      {0.7, 0.0003, 0.45},
      {0.8, 0.0003, 0.45},
  }};
  SolverConfig cfg;
  cfg.task = Task::inpaint;
  cfg.iterations = 200;
  const auto& s = nearest(table, missing_rate);
  cfg.rho = s.rho;
  cfg.p = s.p;
  return cfg;
}

SolverConfig SolverConfig::cs_defaults(double subrate) {
  static constexpr std::array<Setting, 4> table{{
      {0.1, 0.0001, 0.65},
      {0.2, 0.0005, 0.5},
      {0.3, 0.005, 0.95},
      {0.4, 0.005, 0.95},
  }};
  SolverConfig cfg;
  cfg.task = Task::cs;
  cfg.patch_side = 7;
  cfg.window = 20;
  cfg.varsigma = 0.4;
  cfg.iterations = 200;
  cfg.noise_std = 5.0;
  cfg.grad_steps = 20;
  const auto& s = nearest(table, subrate);
  cfg.rho = s.rho;
  cfg.p = s.p;
  return cfg;
}

SolverConfig apply_config(const KeyValueFile& kv, SolverConfig cfg) {
  const auto as_int = [&](const char* key, int& field) {
    if (const auto v = kv.get_int(key)) {
      if (*v < -2147483647LL || *v > 2147483647LL) throw ConfigError(std::string(key) + " out of range", kv.line_of(key));
      field = static_cast<int>(*v);
    }
  };
  const auto as_double = [&](const char* key, double& field) {
    if (const auto v = kv.get_double(key)) field = *v;
  };
  if (const auto t = kv.get_string("task")) {
    try {
      cfg.task = parse_task(*t);
    } catch (const ConfigError& e) {
      throw ConfigError(e.what(), kv.line_of("task"));
    }
  }
  as_int("patch", cfg.patch_side);
  as_int("group_size", cfg.group_size);
  as_int("window", cfg.window);
  as_int("stride", cfg.stride);
  as_double("rho", cfg.rho);
  as_double("p", cfg.p);
  as_double("delta", cfg.noise_std);
  as_double("epsilon", cfg.epsilon);
  as_double("varsigma", cfg.varsigma);
  as_int("gst_iterations", cfg.gst_iterations);
  as_int("iterations", cfg.iterations);
  as_int("grad_steps", cfg.grad_steps);
  as_double("step_size", cfg.step_size);
  as_int("group_refresh", cfg.group_refresh);
  as_double("intensity_scale", cfg.intensity_scale);
  if (const auto b = kv.get_bool("baseline")) cfg.baseline = *b;
  if (const auto v = kv.get_string("variance")) {
    const auto e = parse_estimator(*v);
    if (!e) throw ConfigError("variance must be 'per_value', 'population' or 'mean_square'", kv.line_of("variance"));
    cfg.estimator = *e;
  }
  kv.reject_unknown();
  with_key_lines(kv, [&] { cfg.validate(); });
  return cfg;
}

std::string_view to_string(VarianceEstimator e) {
  switch (e) {
    case VarianceEstimator::per_value: return "per_value";
    case VarianceEstimator::population: return "population";
    case VarianceEstimator::mean_square: return "mean_square";
  }
  return "per_value";
}

std::optional<VarianceEstimator> parse_estimator(std::string_view name) {
  if (name == "per_value") return VarianceEstimator::per_value;
  if (name == "population") return VarianceEstimator::population;
  if (name == "mean_square") return VarianceEstimator::mean_square;
  return std::nullopt;
}

std::string serialize(const SolverConfig& cfg) {
  std::ostringstream out;
  out << "task = " << to_string(cfg.task) << '\n'
      << "patch = " << cfg.patch_side << '\n'
      << "group_size = " << cfg.group_size << '\n'
      << "window = " << cfg.window << '\n'
      << "stride = " << cfg.stride << '\n'
      << "rho = " << format_exact(cfg.rho) << '\n'
      << "p = " << format_exact(cfg.p) << '\n'
      << "delta = " << format_exact(cfg.noise_std) << '\n'
      << "epsilon = " << format_exact(cfg.epsilon) << '\n'
      << "varsigma = " << format_exact(cfg.varsigma) << '\n'
      << "gst_iterations = " << cfg.gst_iterations << '\n'
      << "iterations = " << cfg.iterations << '\n'
      << "grad_steps = " << cfg.grad_steps << '\n'
      << "step_size = " << format_exact(cfg.step_size) << '\n'
      << "group_refresh = " << cfg.group_refresh << '\n'
      << "baseline = " << (cfg.baseline ? "true" : "false") << '\n'
      << "variance = " << to_string(cfg.estimator) << '\n'
      << "intensity_scale = " << format_exact(cfg.intensity_scale) << '\n';
  return out.str();
}

}  // namespace ncw
