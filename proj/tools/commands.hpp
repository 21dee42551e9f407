#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace ncw::cli {

namespace fs = std::filesystem;

enum ExitCode : int {
  kSuccess = 0,
  kConfigError = 2,
  kDataError = 3,
  kNumericalError = 4,
};

struct DegradeJob {
  fs::path input;
  fs::path operator_spec;
  fs::path output;
  /// Seeds the additive noise; defaults to the operator's seed.
  std::optional<std::uint64_t> seed;
};

/// Writes the observation to `output` (PGM for blur/mask, a measurement file
/// for cs), the operator sidecar to `output`.op and, for masks, the mask to
/// `output`.mask.pgm.
void cmd_degrade(const DegradeJob& job);

struct RestoreJob {
  fs::path input;
  fs::path sidecar;  ///< empty: `input`.op
  fs::path config;   ///< empty: task defaults only
  fs::path output;
  fs::path trace;    ///< empty: no trace file
  fs::path reference;
};

void cmd_restore(const RestoreJob& job);

struct EvaluateJob {
  fs::path input;
  fs::path reference;
  fs::path degraded;  ///< optional
  fs::path output;    ///< empty: stdout
  std::string method = "restored";
};

void cmd_evaluate(const EvaluateJob& job);

fs::path sidecar_path(const fs::path& observation);
std::string fnv1a_hex(const std::string& bytes);

/// Parses argv, runs one subcommand and maps exceptions to exit codes.
int run(int argc, char** argv);

}  // namespace ncw::cli
