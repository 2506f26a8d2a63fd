// End-to-end checks of the command-line tool: exit codes, output formats,
// and determinism. The binary path comes in via EPKIT_BIN.

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "epkit/io.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

RunResult run(const std::string& args) {
  static int counter = 0;
  const fs::path dir = fs::temp_directory_path() / "epkit_cli_tests";
  fs::create_directories(dir);
  const fs::path out = dir / ("out" + std::to_string(counter) + ".txt");
  const fs::path err = dir / ("err" + std::to_string(counter) + ".txt");
  ++counter;
  const std::string cmd =
      std::string(EPKIT_BIN) + " " + args + " >" + out.string() + " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out);
  r.err = slurp(err);
  return r;
}

fs::path write_temp(const std::string& name, const std::string& content) {
  const fs::path dir = fs::temp_directory_path() / "epkit_cli_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p, std::ios::binary) << content;
  return p;
}

}  // namespace

TEST_CASE("locate finds the three bench EPs and exits 0") {
  const fs::path out = write_temp("locate_out.json", "");
  const RunResult r = run("locate --family paper3x3 --region 0.4,3.5,1.6,2.2 --grid 120,80 --out " +
                          out.string());
  CHECK(r.exit_code == 0);
  const epk::Json j = epk::parse_json(slurp(out), "locate output");
  REQUIRE(j.size() == 3);
  CHECK(std::abs(j[0]["location"][0].get<double>() - 1.041) < 2e-3);
  CHECK(std::abs(j[1]["location"][0].get<double>() - 2.072) < 2e-3);
  CHECK(std::abs(j[2]["location"][0].get<double>() - 2.959) < 2e-3);
}

TEST_CASE("locate output is deterministic across runs") {
  const fs::path a = write_temp("det_a.json", "");
  const fs::path b = write_temp("det_b.json", "");
  const std::string args = "locate --family tep3x3 --region -1,1,-1,1 --grid 41,41 --out ";
  CHECK(run(args + a.string()).exit_code == 0);
  CHECK(run(args + b.string()).exit_code == 0);
  CHECK(slurp(a) == slurp(b));
  const epk::Json j = epk::parse_json(slurp(a), "locate output");
  REQUIRE(j.size() == 1);
  CHECK(std::abs(j[0]["location"][0].get<double>()) < 1e-6);
}

TEST_CASE("locate writes CSV and the gap-field grid on request") {
  const fs::path out = write_temp("locate_out.csv", "");
  const fs::path grid = write_temp("grid.csv", "");
  const RunResult r =
      run("locate --family paper2x2 --region -1,1,-1,1 --grid 21,21 --format csv --out " +
          out.string() + " --field-out " + grid.string());
  CHECK(r.exit_code == 0);
  CHECK(slurp(out).rfind("alpha,beta,residual,min_gap,pair_i,pair_j,newton_iterations\n", 0) ==
        0);
  const std::string g = slurp(grid);
  CHECK(g.rfind("alpha,beta,min_gap,abs_discriminant\n", 0) == 0);
  CHECK(std::count(g.begin(), g.end(), '\n') == 442);
}

TEST_CASE("malformed config exits 2 and names the offending key") {
  const fs::path fam = write_temp("bad_family.json", R"({"kind":"paper3x3","bogus_key":1})");
  const RunResult r = run("locate --family " + fam.string() + " --region 0,1,0,1");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("bogus_key") != std::string::npos);
}

TEST_CASE("unparseable family file exits 2") {
  const fs::path fam = write_temp("corrupt.json", "{not json");
  const RunResult r = run("locate --family " + fam.string() + " --region 0,1,0,1");
  CHECK(r.exit_code == 2);
}

TEST_CASE("unknown builtin family exits 2") {
  const RunResult r = run("locate --family nonsense4x4 --region 0,1,0,1");
  CHECK(r.exit_code == 2);
}

TEST_CASE("track over the two-EP rectangle reports identity after three cycles") {
  const fs::path loop = write_temp("two_ep_loop.json", R"({
    "vertices": [[0.9, 1.55], [2.4, 1.55], [2.4, 2.0], [0.9, 2.0]],
    "samples_per_segment": 192,
    "cycles": 3
  })");
  const fs::path out = write_temp("track_out.json", "");
  const RunResult r = run("track --family paper3x3 --loop " + loop.string() +
                          " --track-vectors --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("cycle 3:") != std::string::npos);
  CHECK(r.out.find("(identity)") != std::string::npos);
  const epk::Json j = epk::parse_json(slurp(out), "track output");
  CHECK(j["orders"]["permutation"] == 3);
  CHECK(j["orders"]["signed"] == 3);
  CHECK(j["per_cycle"].size() == 3);
  // round-trip
  const epk::TrackResult t = epk::track_from_json(j);
  CHECK(epk::track_to_json(t) == j);
}

TEST_CASE("a loop through an EP exits 3 with the error name") {
  const fs::path loop = write_temp("bad_loop.json", R"({
    "circle": {"center": [1.9413, 1.948], "radius": 0.9},
    "samples_per_segment": 64
  })");
  const RunResult r = run("track --family paper3x3 --loop " + loop.string());
  CHECK(r.exit_code == 3);
  CHECK(r.err.find("LoopTooCloseToEP") != std::string::npos);
}

TEST_CASE("surface emits the full grid with header") {
  const fs::path out = write_temp("surface.csv", "");
  const RunResult r = run("surface --family paper3x3 --region 0.4,3.5,1.6,2.2 --grid 175,60 "
                          "--out " + out.string());
  CHECK(r.exit_code == 0);
  const std::string csv = slurp(out);
  CHECK(csv.rfind("alpha,beta,re1,im1,re2,im2,re3,im3,flag\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 175 * 60 + 1);
}

TEST_CASE("algebra table prints the ordering products") {
  const RunResult r = run("algebra");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("order 3") != std::string::npos);
  CHECK(r.out.find("order 2") != std::string::npos);

  const RunResult chain = run("algebra --modes 4 --pairs 0-1,1-2,2-3");
  CHECK(chain.exit_code == 0);
  CHECK(chain.out.find("order 4") != std::string::npos);

  const RunResult bad = run("algebra --modes 3 --pairs 0:1");
  CHECK(bad.exit_code == 2);
}

TEST_CASE("verify --only algebra passes quickly") {
  const RunResult r = run("verify --only algebra");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("PASS") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("verify with an unmatched filter exits 2") {
  const RunResult r = run("verify --only no-such-check");
  CHECK(r.exit_code == 2);
}

TEST_CASE("config file drives locate, flags win") {
  const fs::path cfg = write_temp("locate_cfg.json", R"({
    "family": "tep3x3",
    "region": [-1, 1, -1, 1],
    "grid": [31, 31],
    "format": "csv"
  })");
  const fs::path out = write_temp("cfg_out.csv", "");
  const RunResult r = run("locate --config " + cfg.string() + " --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(slurp(out).rfind("alpha,beta,", 0) == 0);

  // flag overrides config: JSON format despite config's csv
  const fs::path out2 = write_temp("cfg_out2.json", "");
  const RunResult r2 = run("locate --config " + cfg.string() + " --format json --out " +
                           out2.string());
  CHECK(r2.exit_code == 0);
  CHECK(epk::parse_json(slurp(out2), "locate output").is_array());
}
