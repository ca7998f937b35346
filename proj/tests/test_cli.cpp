#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "macrocoh/json_io.hpp"

using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = macrocoh::cli::run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& content) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << content;
  return path.string();
}

}  // namespace

TEST_CASE("version and usage") {
  CHECK(run({"--version"}).out.find("macrocoh 1.0.0") != std::string::npos);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 2);
  const Run bad = run({"scaling", "--bogus"});
  CHECK(bad.code == 2);
  CHECK(bad.err.find("Usage") != std::string::npos);
}

TEST_CASE("scaling emits the closed-form CSV") {
  const Run r = run({"scaling", "--N", "2,4,6"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "N,qfi,il,qfi_formula,il_formula,qfi_over_il");
  int count = 0;
  while (std::getline(lines, row)) {
    std::stringstream ss(row);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 6);
    CHECK(v[1] == doctest::Approx(v[3]).epsilon(1e-8));
    CHECK(v[2] == doctest::Approx(v[4]).epsilon(1e-8));
    ++count;
  }
  CHECK(count == 3);
  CHECK(run({"scaling", "--N", "3"}).code == 1);
}

TEST_CASE("measure on the maximally mixed state is zero") {
  const std::string state = temp_file("macrocoh_cli_mixed.json", R"({"re": [[0.5, 0], [0, 0.5]]})");
  const std::string obs = temp_file("macrocoh_cli_z.json", R"({"re": [[1, 0], [0, -1]]})");
  const Run r = run({"measure", "--state", state, "--observable", obs, "--which", "qfi"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["measure"] == "qfi");
  CHECK(j["value"].get<double>() == doctest::Approx(0.0));
}

TEST_CASE("invalid JSON state file exits 1 with diagnostics") {
  const std::string state = temp_file("macrocoh_cli_broken.json", "{\"re\": [[1, 0]");
  const std::string obs = temp_file("macrocoh_cli_z.json", R"({"re": [[1, 0], [0, -1]]})");
  const Run r = run({"measure", "--state", state, "--observable", obs});
  CHECK(r.code == 1);
  CHECK(r.err.find("JSON parse error") != std::string::npos);
}

TEST_CASE("state, nlj and evolve pipeline") {
  const auto path = (std::filesystem::temp_directory_path() / "macrocoh_cli_cat.json").string();
  REQUIRE(run({"state", "--kind", "cat", "--alpha", "1.0+0.5i", "--fock-dim", "30", "-o", path}).code == 0);
  const Run closed = run({"nlj", "--state", path, "--fock-dim", "30"});
  REQUIRE(closed.code == 0);
  const double value = json::parse(closed.out)["value"].get<double>();
  const Run integral = run({"nlj", "--state", path, "--fock-dim", "30", "--method", "integral"});
  REQUIRE(integral.code == 0);
  CHECK(json::parse(integral.out)["value"].get<double>() == doctest::Approx(value).epsilon(1e-3));
  const Run ev = run({"evolve", "--state", path, "--fock-dim", "30", "--t", "0.1", "--steps", "5"});
  REQUIRE(ev.code == 0);
  std::istringstream lines(ev.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "time,purity,nlj");
  std::getline(lines, line);
  CHECK(std::stod(line.substr(line.rfind(',') + 1)) == doctest::Approx(value).epsilon(1e-10));
  CHECK(run({"evolve", "--state", path, "--fock-dim", "30", "--model", "anisotropic"}).code == 1);
  CHECK(run({"state", "--kind", "coherent", "--alpha", "9", "--fock-dim", "20"}).code == 1);
}

TEST_CASE("nf on a GHZ state") {
  const std::string ghz = temp_file("macrocoh_cli_ghz.json", R"({"re": [0.7071067811865476, 0, 0, 0.7071067811865476]})");
  const Run r = run({"nf", "--state", ghz, "--sites", "2", "--restarts", "4", "--seed", "3"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["value"].get<double>() == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(j["family"]["bloch_vectors"].size() == 2);
  CHECK(run({"nf", "--state", ghz, "--sites", "3"}).code == 1);
}

TEST_CASE("modes reconstruct the state") {
  const std::string state = temp_file("macrocoh_cli_plus.json", R"({"re": [0.6, 0.8]})");
  const std::string obs = temp_file("macrocoh_cli_z.json", R"({"re": [[1, 0], [0, -1]]})");
  const Run r = run({"modes", "--state", state, "--observable", obs});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j["modes"].size() == 3);
  CHECK(j["reconstruction_residual"].get<double>() < 1e-12);
}

TEST_CASE("m4check and copies") {
  const Run m4 = run({"m4check", "--diag", "0,1,2,3", "--measure", "rel_ent", "--pair1", "0,3", "--pair2", "0,1"});
  REQUIRE(m4.code == 0);
  CHECK(json::parse(m4.out)["ordering"] == "equal");
  const Run cp = run({"copies", "--n", "4,6"});
  REQUIRE(cp.code == 0);
  CHECK(json::parse(cp.out)["profiles"].size() == 2);
}

TEST_CASE("fuzz-monotone is deterministic for a fixed seed") {
  const std::vector<std::string> args{"fuzz-monotone", "--measure", "qfi", "--dim", "4", "--channels", "20", "--seed", "9"};
  const Run a = run(args);
  const Run b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(json::parse(a.out)["m2b_failures"] == 0);
}
