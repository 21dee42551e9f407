#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "../tools/commands.hpp"
#include "ncwnnm/errors.hpp"
#include "ncwnnm/keyvalue.hpp"
#include "ncwnnm/measurements.hpp"
#include "ncwnnm/operator_spec.hpp"
#include "ncwnnm/pgm.hpp"
#include "support.hpp"

using namespace ncw;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / ("ncw_cli_" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  fs::path operator/(const std::string& name) const { return path / name; }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void put(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

int run_cli(const std::string& args) {
  const int status = std::system((std::string(NCW_CLI_PATH) + " " + args + " 2>/dev/null").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("degrade is deterministic and writes the sidecar and mask") {
  TempDir dir;
  write_pgm(dir / "clean.pgm", testing::sub_image(testing::crop("camera"), 0, 0, 64, 64));
  put(dir / "mask.op", "type = mask\ndensity = 0.5\nseed = 7\n");
  const std::string common = " --input " + (dir / "clean.pgm").string() + " --operator " + (dir / "mask.op").string();
  REQUIRE(run_cli("degrade" + common + " --output " + (dir / "a.pgm").string()) == 0);
  REQUIRE(run_cli("degrade" + common + " --output " + (dir / "b.pgm").string()) == 0);
  CHECK(slurp(dir / "a.pgm") == slurp(dir / "b.pgm"));
  CHECK(slurp(dir / "a.pgm.mask.pgm") == slurp(dir / "b.pgm.mask.pgm"));

  const auto spec = parse_operator_spec(KeyValueFile::load(dir / "a.pgm.op"));
  CHECK(spec.height == 64);
  CHECK(spec.checksum == cli::fnv1a_hex(slurp(dir / "a.pgm")));
  const Image mask = read_pgm(dir / "a.pgm.mask.pgm");
  CHECK(std::count(mask.pixels().begin(), mask.pixels().end(), 255.0) == 2048);
}

TEST_CASE("identity blur without noise reproduces the input") {
  TempDir dir;
  const Image clean = testing::sub_image(testing::crop("brick"), 5, 5, 40, 40);
  write_pgm(dir / "clean.pgm", clean);
  put(dir / "id.op", "type = blur\nkernel = uniform\nsize = 1\nnoise = 0\n");
  cli::cmd_degrade({dir / "clean.pgm", dir / "id.op", dir / "obs.pgm", std::nullopt});
  CHECK(read_pgm(dir / "obs.pgm") == clean);
}

TEST_CASE("cs measurement length") {
  TempDir dir;
  write_pgm(dir / "clean.pgm", testing::crop("chelsea"));
  put(dir / "cs.op", "type = cs\nsubrate = 0.1\nseed = 3\n");
  cli::cmd_degrade({dir / "clean.pgm", dir / "cs.op", dir / "obs.cs", std::nullopt});
  const MeasurementFile f = decode_measurements(slurp(dir / "obs.cs"));
  CHECK(f.values.size() == 16 * 102);
  CHECK(f.measurements == 102);

  // The sidecar rebuilds an operator that still passes the adjoint test.
  const auto spec = parse_operator_spec(KeyValueFile::load(dir / "obs.cs.op"));
  const DegradationOperator op = build_operator(spec, *spec.height, *spec.width);
  const Image x = testing::random_image(128, 128, 1);
  const Observation y = apply(op, testing::random_image(128, 128, 2));
  const double lhs = apply(op, x).dot(y), rhs = dot(x, apply_adjoint(op, y));
  CHECK(std::abs(lhs - rhs) < 1e-8 * std::abs(lhs));
}

TEST_CASE("restore checks integrity and reports config errors") {
  TempDir dir;
  write_pgm(dir / "clean.pgm", testing::sub_image(testing::crop("camera"), 0, 0, 32, 32));
  put(dir / "blur.op", "type = blur\nkernel = uniform\n");
  REQUIRE(run_cli("degrade --input " + (dir / "clean.pgm").string() + " --operator " + (dir / "blur.op").string() +
              " --output " + (dir / "obs.pgm").string()) == 0);
  put(dir / "cfg.txt", "iterations = 1\ngroup_size = 10\nwindow = 12\n");
  const std::string restore = "restore --input " + (dir / "obs.pgm").string() + " --output " +
                              (dir / "out.pgm").string() + " --config ";
  CHECK(run_cli(restore + (dir / "cfg.txt").string()) == 0);

  put(dir / "bad.txt", "iterations = 1\n\nrho = zero\n");
  CHECK(run_cli(restore + (dir / "bad.txt").string()) == 2);
  try {
    cli::cmd_restore({dir / "obs.pgm", {}, dir / "bad.txt", dir / "out.pgm", {}, {}});
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 3);
  }

  std::string bytes = slurp(dir / "obs.pgm");
  bytes.back() = static_cast<char>(bytes.back() ^ 1);
  put(dir / "obs.pgm", bytes);
  CHECK(run_cli(restore + (dir / "cfg.txt").string()) == 3);

  CHECK(run_cli("restore --input " + (dir / "missing.pgm").string() + " --output x.pgm") == 3);
  CHECK(run_cli("degrade --input " + (dir / "clean.pgm").string()) == 2);
  CHECK(run_cli("frobnicate") == 2);
}

TEST_CASE("degrade, restore and evaluate are byte reproducible") {
  TempDir dir;
  const Image clean = testing::sub_image(testing::crop("astronaut"), 0, 0, 32, 32);
  write_pgm(dir / "clean.pgm", clean);
  put(dir / "mask.op", "type = mask\ndensity = 0.6\nseed = 11\n");
  put(dir / "cfg.txt", "iterations = 2\ngroup_size = 10\nwindow = 12\n");
  std::string outputs[2];
  for (int run = 0; run < 2; ++run) {
    const std::string tag = std::to_string(run);
    const fs::path obs = dir / ("obs" + tag + ".pgm"), out = dir / ("out" + tag + ".pgm"),
                   trace = dir / ("trace" + tag + ".csv"), report = dir / ("report" + tag + ".csv");
    REQUIRE(run_cli("degrade --input " + (dir / "clean.pgm").string() + " --operator " + (dir / "mask.op").string() +
                " --output " + obs.string()) == 0);
    REQUIRE(run_cli("restore --input " + obs.string() + " --config " + (dir / "cfg.txt").string() + " --output " +
                out.string() + " --trace " + trace.string() + " --reference " + (dir / "clean.pgm").string()) == 0);
    REQUIRE(run_cli("evaluate --input " + out.string() + " --reference " + (dir / "clean.pgm").string() +
                " --degraded " + obs.string() + " --method NCW-NNM --output " + report.string()) == 0);
    outputs[run] = slurp(out) + slurp(trace);
    const std::string rep = slurp(report);
    CHECK(rep.find("NCW-NNM") != std::string::npos);
    CHECK(rep.find("degraded") != std::string::npos);
    const std::string lines = slurp(trace);
    CHECK(std::count(lines.begin(), lines.end(), '\n') >= 3);
  }
  CHECK(outputs[0] == outputs[1]);
}
