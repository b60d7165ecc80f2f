#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "phasespace/grid.hpp"
#include "phasespace/manifest.hpp"
#include "phasespace/oscillator.hpp"
#include "phasespace/wigner.hpp"

using namespace phasespace;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  std::string cmd = std::string(CLI_BINARY) + " " + args + " >/dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

}  // namespace

TEST_CASE("wigner grid CSV round-trips bit-exactly") {
  std::map<FockLabel, Complex> c{{{1, 0}, Complex{1.0, 0.0}}};
  auto f = wigner_from_coefficients(c);
  GridSpec grid = GridSpec::uniform({{-4, 4}, {-4, 4}, {-1, 1}, {-1, 1}}, {17, 17, 5, 5});
  auto wg = sample_to_wigner_grid(f, grid, {"q_x", "p_x", "q_y", "p_y"},
                                  nlohmann::json{{"state", "n10"}});
  fs::path dir = fs::temp_directory_path() / "ps_io_test";
  fs::create_directories(dir);
  auto csv = (dir / "grid.csv").string();
  auto sc = (dir / "grid.meta.json").string();
  write_wigner_grid_csv(wg, csv, sc);
  auto back = read_wigner_grid_csv(csv, sc);
  REQUIRE(back.values.size() == wg.values.size());
  for (std::size_t i = 0; i < wg.values.size(); ++i) {
    CHECK(back.values[i] == wg.values[i]);  // bitwise, via 17 significant digits
  }
  CHECK(back.axes == wg.axes);
  // writing the reread grid reproduces the file byte for byte
  auto csv2 = (dir / "grid2.csv").string();
  write_wigner_grid_csv(back, csv2, (dir / "grid2.meta.json").string());
  CHECK(slurp(csv) == slurp(csv2));
}

TEST_CASE("manifest checksums are content-determined") {
  fs::path dir = fs::temp_directory_path() / "ps_manifest_test";
  fs::create_directories(dir);
  std::ofstream(dir / "a.txt") << "payload";
  std::ofstream(dir / "b.txt") << "payload";
  CHECK(file_checksum((dir / "a.txt").string()) == file_checksum((dir / "b.txt").string()));
  std::ofstream(dir / "c.txt") << "other";
  CHECK(file_checksum((dir / "a.txt").string()) != file_checksum((dir / "c.txt").string()));
  RunManifest m;
  m.command = "test";
  m.parameters = {{"x", 1}};
  m.add_artifact((dir / "a.txt").string());
  m.write((dir / "m.json").string());
  auto j = nlohmann::json::parse(slurp(dir / "m.json"));
  CHECK(j.at("tool_version").get<std::string>() == tool_version());
  CHECK(j.at("artifacts").size() == 1);
}

TEST_CASE("cli: reruns produce byte-identical tables") {
  fs::path dir1 = fs::temp_directory_path() / "ps_cli_run1";
  fs::path dir2 = fs::temp_directory_path() / "ps_cli_run2";
  fs::remove_all(dir1);
  fs::remove_all(dir2);
  std::string common =
      "negativity --system henon-heiles --n 0 --epsilon 0,0.5 --order 1 --grid 24 ";
  REQUIRE(run_cli(common + "--out-dir " + dir1.string()) == 0);
  REQUIRE(run_cli(common + "--out-dir " + dir2.string()) == 0);
  CHECK(slurp(dir1 / "negativity_henon-heiles.csv") == slurp(dir2 / "negativity_henon-heiles.csv"));
  CHECK(!slurp(dir1 / "negativity_henon-heiles.csv").empty());
}

TEST_CASE("cli: usage errors exit with code 2") {
  CHECK(run_cli("negativity --system unknown-system --n 0") == 2);
  CHECK(run_cli("wigner-grid --n 3") == 2);  // odd table index
  CHECK(run_cli("bogus-subcommand") != 0);
}

TEST_CASE("cli: hydrogen checks pass and emit a report") {
  fs::path dir = fs::temp_directory_path() / "ps_cli_hydro";
  fs::remove_all(dir);
  REQUIRE(run_cli("hydrogen --n 2 --out-dir " + dir.string()) == 0);
  auto rpt = nlohmann::json::parse(slurp(dir / "hydrogen_report.json"));
  CHECK(rpt.at("energy_ev").get<double>() == doctest::Approx(-3.4).epsilon(1e-3));
  auto checks = nlohmann::json::parse(slurp(dir / "hydrogen.checks.json"));
  CHECK(checks.at("all_passed").get<bool>());
}

TEST_CASE("cli: wigner grid emits csv, sidecar, manifest and passing checks") {
  fs::path dir = fs::temp_directory_path() / "ps_cli_grid";
  fs::remove_all(dir);
  REQUIRE(run_cli("wigner-grid --n 0 --epsilon 0.28 --order 1 --grid 20 --out-dir " + dir.string()) ==
          0);
  std::string stem = "wigner_n0_0_eps0.28_order1";
  CHECK(fs::exists(dir / (stem + ".csv")));
  auto sidecar = nlohmann::json::parse(slurp(dir / (stem + ".meta.json")));
  CHECK(sidecar.at("meta").at("epsilon").get<double>() == doctest::Approx(0.28));
  auto manifest = nlohmann::json::parse(slurp(dir / (stem + ".manifest.json")));
  CHECK(manifest.at("artifacts").size() == 2);
  auto checks = nlohmann::json::parse(slurp(dir / (stem + ".checks.json")));
  CHECK(checks.at("all_passed").get<bool>());
}

TEST_CASE("cli: json table format and strict policy") {
  fs::path dir = fs::temp_directory_path() / "ps_cli_json";
  fs::remove_all(dir);
  REQUIRE(run_cli("extrema-table --order 1 --n 0 --epsilon 0 --grid 24 --format json "
                  "--out-dir " + dir.string()) == 0);
  auto rows = nlohmann::json::parse(slurp(dir / "extrema_order1.json"));
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].at("n").get<double>() == 0.0);
  CHECK(rows[0].at("maximum").get<double>() > 0.0);
  // (2,2) has same-shell couplings: strict policy aborts with a check failure
  CHECK(run_cli("extrema-table --order 1 --n 4 --epsilon 0 --grid 16 --policy strict "
                "--out-dir " + dir.string()) == 1);
}
