#include "commands.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ncwnnm/admm.hpp"
#include "ncwnnm/errors.hpp"
#include "ncwnnm/measurements.hpp"
#include "ncwnnm/metrics.hpp"
#include "ncwnnm/operator_spec.hpp"
#include "ncwnnm/pgm.hpp"
#include "ncwnnm/random.hpp"

namespace ncw::cli {
namespace {

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_bytes(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw DataError("failed writing '" + path.string() + "'");
}

fs::path with_suffix(const fs::path& p, const std::string& suffix) { return fs::path(p.string() + suffix); }

}  // namespace

fs::path sidecar_path(const fs::path& observation) { return with_suffix(observation, ".op"); }

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char b : bytes) {
    h ^= b;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void cmd_degrade(const DegradeJob& job) {
  const Image clean = read_pgm(job.input);
  OperatorSpec spec = parse_operator_spec(KeyValueFile::load(job.operator_spec));
  const DegradationOperator op = build_operator(spec, clean.height(), clean.width());

  Observation y = apply(op, clean);
  if (spec.noise > 0.0) {
    Rng rng(job.seed.value_or(spec.seed) ^ 0x9e3779b97f4a7c15ULL);
    const auto* mask = op.get_if<MaskOperator>();
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      const double n = rng.normal();
      if (!mask || mask->observed_flags()[static_cast<std::size_t>(i)]) y[i] += spec.noise * n;
    }
  }

  std::string bytes;
  if (const auto* proj = op.get_if<BlockProjectionOperator>()) {
    MeasurementFile file;
    file.height = clean.height();
    file.width = clean.width();
    file.measurements = proj->measurements();
    file.seed = proj->seed();
    file.values = y;
    bytes = encode_measurements(file);
  } else {
    bytes = encode_pgm(observation_image(op, y));
  }
  write_bytes(job.output, bytes);

  spec.height = clean.height();
  spec.width = clean.width();
  spec.checksum = fnv1a_hex(bytes);
  write_bytes(sidecar_path(job.output), serialize(spec));
  if (const auto* mask = op.get_if<MaskOperator>()) write_pgm(with_suffix(job.output, ".mask.pgm"), mask->as_image());
}

void cmd_restore(const RestoreJob& job) {
  const std::string bytes = read_bytes(job.input);
  const fs::path sidecar = job.sidecar.empty() ? sidecar_path(job.input) : job.sidecar;
  if (!fs::exists(sidecar)) throw DataError("missing sidecar '" + sidecar.string() + "'");
  const OperatorSpec spec = parse_operator_spec(KeyValueFile::load(sidecar));
  if (!spec.height || !spec.width || !spec.checksum)
    throw DataError("sidecar '" + sidecar.string() + "' lacks height, width or checksum");

  if (fnv1a_hex(bytes) != *spec.checksum)
    throw DataError("observation '" + job.input.string() + "' does not match its sidecar checksum");

  const DegradationOperator op = build_operator(spec, *spec.height, *spec.width);
  Observation y;
  if (spec.type == OperatorSpec::Type::cs) {
    const MeasurementFile file = decode_measurements(bytes);
    const auto& proj = *op.get_if<BlockProjectionOperator>();
    if (file.height != *spec.height || file.width != *spec.width || file.measurements != proj.measurements() ||
        file.seed != spec.seed)
      throw DataError("measurement header disagrees with the sidecar");
    y = file.values;
  } else {
    const Image obs = decode_pgm(bytes);
    if (obs.height() != *spec.height || obs.width() != *spec.width)
      throw DataError("observation shape disagrees with the sidecar");
    y = obs.vector();
  }
  if (y.size() != observation_size(op)) throw DataError("observation length does not match the operator");

  SolverConfig cfg = default_config_for(spec);
  if (!job.config.empty()) cfg = apply_config(KeyValueFile::load(job.config), cfg);

  std::optional<Image> reference;
  if (!job.reference.empty()) reference = read_pgm(job.reference);

  const SolveResult result = solve(y, op, cfg, reference);
  write_pgm(job.output, result.image);
  if (!job.trace.empty()) {
    std::ostringstream csv;
    write_trace_csv(csv, result.trace);
    write_bytes(job.trace, csv.str());
  }
}

void cmd_evaluate(const EvaluateJob& job) {
  const Image reference = read_pgm(job.reference);
  std::vector<EvalReport> rows;
  rows.push_back(evaluate(read_pgm(job.input), reference, job.input.filename().string(),
                          job.reference.filename().string(), job.method));
  if (!job.degraded.empty())
    rows.push_back(evaluate(read_pgm(job.degraded), reference, job.degraded.filename().string(),
                            job.reference.filename().string(), "degraded"));
  std::ostringstream csv;
  write_report_csv(csv, rows);
  if (job.output.empty()) {
    std::cout << csv.str();
  } else {
    write_bytes(job.output, csv.str());
  }
}

int run(int argc, char** argv) {
  CLI::App app{"Weighted l_p nuclear-norm image restoration (deblurring, inpainting, block CS)"};
  app.require_subcommand(1);

  DegradeJob degrade;
  std::uint64_t noise_seed = 0;
  auto* deg = app.add_subcommand("degrade", "Apply a degradation operator to a clean PGM image");
  deg->add_option("--input", degrade.input, "Clean 8-bit PGM image")->required();
  deg->add_option("--operator", degrade.operator_spec, "Operator specification file")->required();
  deg->add_option("--output", degrade.output, "Observation file to write")->required();
  auto* seed_opt = deg->add_option("--seed", noise_seed, "Noise seed (default: operator seed)");

  RestoreJob restore;
  auto* res = app.add_subcommand("restore", "Restore an observation with the ADMM solver");
  res->add_option("--input", restore.input, "Observation written by degrade")->required();
  res->add_option("--operator", restore.sidecar, "Operator sidecar (default: <input>.op)");
  res->add_option("--config", restore.config, "Solver configuration overrides");
  res->add_option("--output", restore.output, "Restored PGM image")->required();
  res->add_option("--trace", restore.trace, "Per-iteration trace CSV");
  res->add_option("--reference", restore.reference, "Ground truth for PSNR in the trace");

  EvaluateJob evaluate;
  auto* ev = app.add_subcommand("evaluate", "PSNR report of a restored image");
  ev->add_option("--input", evaluate.input, "Restored PGM image")->required();
  ev->add_option("--reference", evaluate.reference, "Ground-truth PGM image")->required();
  ev->add_option("--degraded", evaluate.degraded, "Degraded PGM image for comparison");
  ev->add_option("--output", evaluate.output, "Report CSV (default: stdout)");
  ev->add_option("--method", evaluate.method, "Method tag for the restored row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kSuccess : kConfigError;
  }

  try {
    if (deg->parsed()) {
      if (seed_opt->count() > 0) degrade.seed = noise_seed;
      cmd_degrade(degrade);
    } else if (res->parsed()) {
      cmd_restore(restore);
    } else {
      cmd_evaluate(evaluate);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const ParameterError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kDataError;
  }
  return kSuccess;
}

}  // namespace ncw::cli
