#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spdc/coincidence.hpp"
#include "spdc/errors.hpp"
#include "spdc_cli/commands.hpp"

using namespace spdc;
using namespace spdc::cli;
namespace fs = std::filesystem;

namespace {

RunConfig config_in(const std::string& dir, Overrides o = {}) {
  const auto path = fs::temp_directory_path() / "spdc_cli_tests" / dir;
  fs::remove_all(path);
  o["output.directory"] = path.string();
  // Coarse grids put more of the support on the outer shell.
  if (!o.contains("grid.truncation_tolerance")) o["grid.truncation_tolerance"] = "0.05";
  return parse_config_json(nullptr, o, nullptr);
}

bool has_file(const CommandResult& r, const std::string& name) {
  for (const auto& f : r.files)
    if (f.filename() == name && fs::exists(f)) return true;
  return false;
}

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("collinear angle report") {
    const auto config = config_in("angle");
    std::ostringstream log;
    const auto r = run_command("collinear-angle", config, {}, log);
    REQUIRE(has_file(r, "collinear_angle.json"));
    std::ifstream in(r.files.front());
    const auto doc = nlohmann::json::parse(in);
    CHECK(doc.at("theta_p_deg").get<double>() == doctest::Approx(32.914).epsilon(1e-4));
    CHECK(doc.at("fingerprint").get<std::string>().size() == 64);
    CHECK(log.str().find("32.91") != std::string::npos);
  }

  TEST_CASE("simulate writes joints, conditional and singles") {
    const auto config = config_in("simulate", {{"grid.n", "16"}, {"output.formats", "grd,pgm"}});
    std::ostringstream log;
    CommandArgs args;
    args.mode = "pos";
    args.full = true;
    const auto r = run_command("simulate", config, args, log);
    for (const char* name : {"pos_joint_x.grd", "pos_joint_y.pgm", "pos_conditional.grd",
                             "pos_singles.grd", "pos_4d.grd"}) {
      CHECK_MESSAGE(has_file(r, name), name);
    }
    for (const auto& f : r.files) CHECK(f.extension() != ".csv");
    const auto grid = read_grd(fs::path(config.output_dir) / "pos_joint_x.grd");
    CHECK(grid.shape == std::vector<std::size_t>{16, 16});
    CHECK(grid.fingerprint.size() == 64);
    double sum = 0.0;
    for (double v : grid.values) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    const auto full = read_grd(fs::path(config.output_dir) / "pos_4d.grd");
    CHECK(full.shape.size() == 4);
  }

  TEST_CASE("momentum mode") {
    const auto config = config_in("mom", {{"grid.n", "16"}, {"output.formats", "csv"}});
    std::ostringstream log;
    CommandArgs args;
    args.mode = "mom";
    CHECK(has_file(run_command("simulate", config, args, log), "mom_joint_x.csv"));
    args.mode = "sideways";
    CHECK_THROWS_AS(run_command("simulate", config, args, log), ConfigError);
  }

  TEST_CASE("conditional and scan on small grids") {
    const auto config = config_in("scan", {{"grid.direct_n", "32"}, {"entanglement.points", "64"}});
    std::ostringstream log;
    CommandArgs cond;
    cond.rho_i0 = {20e-6, 0.0};
    const auto rc = run_command("conditional", config, cond, log);
    CHECK(has_file(rc, "conditional.grd"));
    CHECK(has_file(rc, "conditional_radial.csv"));

    CommandArgs args;
    args.mode = "z";
    args.values = {"0mm", "5mm"};
    const auto r = run_command("scan", config, args, log);
    REQUIRE(has_file(r, "scan_z.csv"));
    std::ifstream in(fs::path(config.output_dir) / "scan_z.csv");
    std::string line;
    int lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 4);

    args.mode = "d";
    CHECK_THROWS_AS(run_command("scan", config, args, log), ConfigError);
  }

  TEST_CASE("frames synth then coincide") {
    const auto config = config_in("frames", {{"grid.n", "16"}, {"coincidence.frames", "200"}});
    std::ostringstream log;
    CommandArgs args;
    args.mode = "synth";
    const auto r = run_command("frames", config, args, log);
    REQUIRE(has_file(r, "frames.bin"));
    CHECK(has_file(r, "frames_generating_joint.grd"));
    const auto stack = read_frames(fs::path(config.output_dir) / "frames.bin");
    CHECK(stack.frames() == 200);
    CHECK(stack.width() == config.detector.roi_width);

    args.mode = "coincide";
    const auto c = run_command("frames", config, args, log);
    CHECK(has_file(c, "coincidence.grd"));
    CHECK(has_file(c, "coincidence_stderr.grd"));
    args.pixel = std::pair{24, 24};
    CHECK(has_file(run_command("frames", config, args, log), "coincidence.grd"));
  }

  TEST_CASE("unknown commands") {
    const auto config = config_in("unknown");
    std::ostringstream log;
    CHECK_THROWS_AS(run_command("teleport", config, {}, log), ConfigError);
    CHECK(default_scan_values("theta").size() == 5);
    CHECK_THROWS_AS(default_scan_values("w0"), ConfigError);
  }
}
