#include <catch2/catch_amalgamated.hpp>

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

// Runs the installed binary through the shell, captures stdout+stderr.
RunResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path capture =
      fs::temp_directory_path() / ("dxxz_cli_out_" + std::to_string(counter++) + ".txt");
  const std::string cmd =
      std::string(DXXZ_CLI_PATH) + " " + args + " > " + capture.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  std::ifstream in(capture);
  std::stringstream buf;
  buf << in.rdbuf();
  fs::remove(capture);
  const int code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return {code, buf.str()};
}

fs::path fresh_dir(const std::string& tag) {
  const fs::path dir = fs::temp_directory_path() / ("dxxz_cli_" + tag);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

TEST_CASE("classify: named states and witness bonds", "[cli]") {
  const RunResult r = run_cli("classify --state A1 --length 16");
  REQUIRE(r.exit_code == 0);
  const json d = json::parse(r.out);
  CHECK(d["class"] == "delocalized");
  CHECK(d["state"] == "ddddddduduuuuuuu");
  REQUIRE(d["witness_bonds"].size() == 2);
  CHECK(d["witness_bonds"][0] == json::array({7, 8}));
  CHECK(d["witness_bonds"][1] == json::array({9, 10}));

  const json a0 = json::parse(run_cli("classify --state A0 --length 16").out);
  CHECK(a0["class"] == "localized");
  CHECK(a0["witness_bonds"].empty());

  const json neel = json::parse(run_cli("classify --state udududud --length 8").out);
  CHECK(neel["class"] == "localized");
}

TEST_CASE("classify: enumeration count", "[cli]") {
  const RunResult r = run_cli("classify --length 6 --enumerate");
  REQUIRE(r.exit_code == 0);
  const json d = json::parse(r.out);
  CHECK(d["count"] == 22);
  CHECK(d["states"].size() == 22);
}

TEST_CASE("classify: bad input exits with 2", "[cli]") {
  CHECK(run_cli("classify --state A1 --length 13").exit_code == 2);
  CHECK(run_cli("classify --state uuddx --length 5").exit_code == 2);
  CHECK(run_cli("classify --state uudd --length 4").exit_code == 2);
  CHECK(run_cli("nonsense").exit_code == 2);
  CHECK(run_cli("classify --enumerate --length 21").exit_code == 3);
}

TEST_CASE("table1: coefficients reproduce the cluster table", "[cli]") {
  const fs::path dir = fresh_dir("table1");
  const RunResult r =
      run_cli("table1 --amplitude-a 0.7 --out " + dir.string());
  REQUIRE(r.exit_code == 0);
  const json d = json::parse(read_file(dir / "table1.json"));
  CHECK(d["rows"].size() == 16);
  CHECK(d["max_abs_error"].get<double>() <= 1e-12);
  int hx = 0, h1 = 0, h0 = 0;
  for (const json& row : d["rows"]) {
    const std::string cls = row["class"];
    if (cls == "hx") {
      ++hx;
      CHECK(row["annihilated"].get<bool>());
      CHECK(row["coefficient"].is_null());
    } else if (cls == "h1") {
      ++h1;
      CHECK(row["coefficient"].get<double>() == 1.0);
    } else {
      ++h0;
      CHECK(std::fabs(row["coefficient"].get<double>() - 0.8812008886074053) <= 1e-15);
    }
  }
  CHECK(hx == 8);
  CHECK(h1 == 4);
  CHECK(h0 == 4);
}

TEST_CASE("effcheck: quadrature average meets the closed form", "[cli]") {
  const RunResult r = run_cli("effcheck --length 6 --amplitude-a 1.0 --nodes 64");
  REQUIRE(r.exit_code == 0);
  const json d = json::parse(r.out);
  CHECK(d["dim"] == 64);
  CHECK(d["max_abs_deviation"].get<double>() <= 1e-10);

  const json s1 = json::parse(run_cli("effcheck --length 4 --two-s 2 --amplitude-a 1.0").out);
  CHECK(s1["dim"] == 81);
  CHECK(s1["max_abs_deviation"].get<double>() <= 1e-10);

  CHECK(run_cli("effcheck --length 6 --amplitude-a 1.0 --nodes 8").exit_code == 2);
}

TEST_CASE("evolve: snapshot files and manifest", "[cli]") {
  const fs::path dir = fresh_dir("evolve");
  const std::string base =
      "evolve --state duuduu --length 6 --j-perp -0.75 --j-par-bar -1 --omega 10 "
      "--amplitude-a 2.404825557695773 --t-max 0.5 --snapshots every:0.25 --out ";
  const RunResult r = run_cli(base + dir.string());
  REQUIRE(r.exit_code == 0);

  const std::string profile = read_file(dir / "sz_profile.csv");
  CHECK(profile.rfind("t,site,sz\n", 0) == 0);
  // 3 snapshot times (0, 0.25, 0.5) x 6 sites + header
  CHECK(std::count(profile.begin(), profile.end(), '\n') == 19);
  const std::string entropy = read_file(dir / "entropy.csv");
  CHECK(entropy.rfind("t,sigma\n", 0) == 0);
  CHECK(std::count(entropy.begin(), entropy.end(), '\n') == 4);
  CHECK(entropy.find("0,0\n") != std::string::npos);  // product state at t = 0

  const json m = json::parse(read_file(dir / "manifest.json"));
  CHECK(m["driver"] == "periodic");
  CHECK(m["snapshots"] == 3);
  CHECK(m["norm_drift"].get<double>() <= 1e-9);
  CHECK(std::fabs(m["derived"]["delta_j"].get<double>() - 24.04825557695773) <= 1e-12);
  CHECK(m["warnings"].empty());

  // repeat run is byte identical
  const fs::path dir2 = fresh_dir("evolve_again");
  REQUIRE(run_cli(base + dir2.string()).exit_code == 0);
  CHECK(read_file(dir2 / "sz_profile.csv") == profile);
  CHECK(read_file(dir2 / "entropy.csv") == entropy);
}

TEST_CASE("evolve: effective driver and config file override", "[cli]") {
  const fs::path dir = fresh_dir("evolve_eff");
  const fs::path ini = dir / "run.ini";
  {
    std::ofstream out(ini);
    out << "[lattice]\nlength = 6\n"
        << "[model]\nj_perp = -0.75\nj_par_bar = -1\nomega = 10\ndelta_j = 24\n"
        << "[evolve]\nt_max = 0.5\nsnapshots = every:0.25\n";
  }
  const RunResult r = run_cli("evolve --config " + ini.string() +
                              " --state duuduu --amplitude-a 1.0 --driver effective --out " +
                              dir.string());
  REQUIRE(r.exit_code == 0);
  const json m = json::parse(read_file(dir / "manifest.json"));
  CHECK(m["driver"] == "effective");
  CHECK(m["derived"]["amplitude_a"].get<double>() == 1.0);  // flag beats file
  CHECK(m["energy_drift"].get<double>() <= 1e-9);
}

TEST_CASE("evolve: input errors exit with 2", "[cli]") {
  const fs::path dir = fresh_dir("evolve_bad");
  const std::string common = " --j-perp -0.75 --j-par-bar -1 --omega 10 --out " + dir.string();
  CHECK(run_cli("evolve --state uud --length 6 --amplitude-a 1 --t-max 1" + common)
            .exit_code == 2);
  CHECK(run_cli("evolve --state duuduu --length 6 --amplitude-a 1 --delta-j 24 --t-max 1" +
                common)
            .exit_code == 2);
  CHECK(run_cli("evolve --state duuduu --length 6 --t-max 1" + common).exit_code == 2);
  CHECK(run_cli("evolve --state duuduu --length 6 --amplitude-a 1 --t-max 1 "
                "--snapshots every:-2" +
                common)
            .exit_code == 2);
  CHECK(run_cli("evolve --state duuduu --length 6 --amplitude-a 1 --t-max 1 --config "
                "/nonexistent.ini" +
                common)
            .exit_code == 3);
}

TEST_CASE("help is help, not an error", "[cli]") {
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("classify --help").exit_code == 0);
  const RunResult r = run_cli("");
  CHECK(r.exit_code == 2);  // a subcommand is required
}
