#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "xydm/cli.hpp"
#include "xydm/table_io.hpp"

using namespace xydm;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run xydm_run(std::vector<std::string> args) {
  args.insert(args.begin(), "xydm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::map<std::string, std::string> csv_record(const std::string& text) {
  std::istringstream in(text);
  const CsvDocument doc = read_csv(in);
  REQUIRE(doc.rows.size() == 1);
  std::map<std::string, std::string> rec;
  for (std::size_t i = 0; i < doc.header.size(); ++i) {
    const auto& cell = doc.rows[0][i];
    rec[doc.header[i]] = std::holds_alternative<double>(cell) ? format_number(std::get<double>(cell))
                                                              : std::get<std::string>(cell);
  }
  return rec;
}

std::filesystem::path scratch(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("xydm_cli_test_" + name);
}

}  // namespace

TEST_CASE("point at J=0 is fully polarized and uncorrelated") {
  const Run r = xydm_run({"point", "--J", "0", "--gamma", "1", "--D", "0", "--T", "0", "--r", "1"});
  REQUIRE(r.code == cli::kOk);
  auto rec = csv_record(r.out);
  CHECK(rec["sz"] == "0.5");
  CHECK(std::abs(std::stod(rec["QD"])) < 1e-10);
  CHECK(std::abs(std::stod(rec["CC"])) < 1e-10);
  CHECK(std::abs(std::stod(rec["C"])) < 1e-10);
}

TEST_CASE("point at beta=0 has no correlations") {
  const Run r = xydm_run({"point", "--beta", "0", "--J", "1", "--gamma", "1", "--D", "0", "--r", "1", "--format", "json"});
  REQUIRE(r.code == cli::kOk);
  const auto j = nlohmann::json::parse(r.out);
  for (const char* k : {"sz", "xx", "yy", "zz"}) CHECK(j["correlations"][k].get<double>() == 0.0);
  CHECK(j["params"]["T"].is_null());
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(xydm_run({"point", "--T", "1", "--beta", "1"}).code == cli::kUsage);
  CHECK(xydm_run({"point", "--unknown", "1"}).code == cli::kUsage);
  CHECK(xydm_run({"point", "--format", "xml"}).code == cli::kUsage);
  CHECK(xydm_run({"point", "--J", "-1"}).code == cli::kUsage);
  CHECK(xydm_run({}).code == cli::kUsage);
  CHECK(xydm_run({"sweep", "--axis", "J:0:1"}).code == cli::kUsage);
  CHECK(xydm_run({"sweep", "--axis", "J:0:1:5", "--J", "2"}).code == cli::kUsage);
  CHECK(xydm_run({"sweep", "--axis", "J:0:1:5", "--axis", "D:0:1:5"}).code == cli::kUsage);
  CHECK(xydm_run({"sweep", "--axis", "J:0:1:2", "--deriv", "QD:J"}).code == cli::kUsage);
  CHECK(xydm_run({"sweep", "--axis", "Q:0:1:5"}).code == cli::kUsage);
  CHECK(xydm_run({"oracle", "--N", "16"}).code == cli::kUsage);
  CHECK(xydm_run({"check", "--filter", "nothing-matches"}).code == cli::kUsage);
  CHECK(xydm_run({"point", "--help"}).code == cli::kOk);
}

TEST_CASE("numerical failure exits with code 3") {
  const Run r = xydm_run({"point", "--J", "1", "--gamma", "0.01", "--D", "0.4", "--quad-tol", "1e-300"});
  CHECK(r.code == cli::kNumerical);
  CHECK(r.err.find("numerical") != std::string::npos);
}

TEST_CASE("one-point sweep matches point") {
  const Run s = xydm_run({"sweep", "--axis", "J:0.7:0.7:1", "--gamma", "0.4", "--D", "0.2"});
  const Run p = xydm_run({"point", "--J", "0.7", "--gamma", "0.4", "--D", "0.2"});
  REQUIRE(s.code == 0);
  REQUIRE(p.code == 0);
  auto a = csv_record(s.out);
  auto b = csv_record(p.out);
  for (const char* k : {"sz", "xx", "yy", "zz", "MI", "QD", "CC", "C"}) CHECK(a[k] == b[k]);
}

TEST_CASE("sweep writes the same bytes to a file and to stdout") {
  const auto path = scratch("sweep.csv").string();
  const Run to_file = xydm_run({"sweep", "--axis", "D:0:1:11", "--J", "1.5", "--gamma", "1", "--deriv", "QD:D",
                                "--output", path, "--workers", "2"});
  const Run to_stdout = xydm_run({"sweep", "--axis", "D:0:1:11", "--J", "1.5", "--gamma", "1", "--deriv", "QD:D",
                                  "--workers", "1"});
  REQUIRE(to_file.code == 0);
  std::ifstream f(path);
  std::stringstream buf;
  buf << f.rdbuf();
  CHECK(buf.str() == to_stdout.out);
  CHECK(to_file.out.empty());
  std::filesystem::remove(path);
}

TEST_CASE("quantities flag narrows the columns") {
  const Run r = xydm_run({"sweep", "--axis", "J:0.5:1:3", "--quantities", "QD,C"});
  REQUIRE(r.code == 0);
  CHECK(r.out.substr(0, r.out.find('\n')) == "axis_J,J,gamma,D,T,r,QD,C,error");
}

TEST_CASE("partial failures still exit 0 with a warning") {
  const Run r = xydm_run({"sweep", "--axis", "J:-1:1:3"});
  CHECK(r.code == cli::kOk);
  CHECK(r.err.find("1 of 3") != std::string::npos);
}

TEST_CASE("two-axis sweeps come from a spec file") {
  const auto path = scratch("spec.json").string();
  {
    std::ofstream f(path);
    f << R"({"axes":[{"parameter":"D","min":0,"max":0.5,"n_points":2},{"parameter":"J","min":0.9,"max":1.1,"n_points":3}],
             "base":{"gamma":0.8},"r":1,"derivatives":[{"quantity":"QD","axis":"J"}]})";
  }
  const Run ok = xydm_run({"sweep", "--spec", path});
  REQUIRE(ok.code == 0);
  CHECK(std::count(ok.out.begin(), ok.out.end(), '\n') == 7);
  CHECK(xydm_run({"sweep", "--spec", path, "--J", "1"}).code == cli::kUsage);
  {
    std::ofstream f(path);
    f << R"({"axes":[{"parameter":"J","min":0,"max":1,"n_points":3}],"typo":1})";
  }
  const Run bad = xydm_run({"sweep", "--spec", path});
  CHECK(bad.code == cli::kUsage);
  CHECK(bad.err.find("typo") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("oracle at J=0 agrees with exact diagonalization to round-off") {
  const Run r = xydm_run({"oracle", "--J", "0", "--T", "0", "--N", "8", "--format", "json"});
  REQUIRE(r.code == cli::kOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["max_delta"].get<double>() < 1e-10);
}

TEST_CASE("oracle gauge check reports the periodic-ring mismatch") {
  const Run r = xydm_run({"oracle", "--gauge", "--J", "0.6", "--D", "0.75", "--N", "6", "--format", "json"});
  CHECK(r.code == cli::kOracleViolation);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["measures_match"].get<bool>());
  CHECK(j["twisted_spectra_deviation"].get<double>() < 1e-9);
}

TEST_CASE("point matches the blessed golden file") {
  const Run r = xydm_run({"point", "--J", "1", "--gamma", "1", "--D", "0", "--T", "0", "--r", "1", "--golden",
                          XYDM_GOLDEN_DIR "/point_J1_gamma1_D0_T0_r1.json"});
  CHECK(r.code == cli::kOk);
  const Run off = xydm_run({"point", "--J", "1.01", "--gamma", "1", "--golden",
                            XYDM_GOLDEN_DIR "/point_J1_gamma1_D0_T0_r1.json"});
  CHECK(off.code == cli::kOracleViolation);
}

TEST_CASE("check filter runs a single criterion") {
  const Run r = xydm_run({"check", "--filter", "c04", "--json"});
  CHECK(r.code == cli::kOk);
  const auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["criteria"].size() == 1);
  CHECK(j["criteria"][0]["name"] == "concurrence-oracle");
}
