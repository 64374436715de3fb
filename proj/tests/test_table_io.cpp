#include <doctest.h>

#include <sstream>

#include "xydm/errors.hpp"
#include "xydm/table_io.hpp"

using namespace xydm;

TEST_CASE("numbers print with twelve significant digits") {
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.1234567890123456) == "0.123456789012");
  CHECK(format_number(-2.5e-9) == "-2.5e-09");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("header columns follow the fixed order") {
  SweepSpec s;
  s.axes = {{Axis::D, 0, 1, 3}};
  s.quantities = {Quantity::C, Quantity::QD};
  s.derivatives = {{Quantity::QD, Axis::D}};
  const std::vector<std::string> expected{"axis_D", "J", "gamma", "D", "T", "r", "QD", "C", "dQD/dD", "error"};
  CHECK(csv_header(s) == expected);
}

TEST_CASE("CSV output round-trips byte for byte, failed rows included") {
  SweepSpec s;
  s.axes = {{Axis::J, -0.5, 1.5, 9}};
  s.base.gamma = 0.6;
  s.base.D = 0.2;
  s.base.temperature = 0.3;
  s.derivatives = {{Quantity::CC, Axis::J}};
  const SweepTable t = run_sweep(s, 1);
  REQUIRE(t.failures() > 0);
  std::ostringstream first;
  write_csv(t, first);
  CHECK(first.str().find('\r') == std::string::npos);
  std::istringstream in(first.str());
  const CsvDocument doc = read_csv(in);
  CHECK(doc.rows.size() == 9);
  std::ostringstream second;
  write_csv(doc, second);
  CHECK(first.str() == second.str());
}

TEST_CASE("malformed CSV is reported with its line number") {
  std::istringstream bad("a,b,error\n1,2,\n3,x,\n");
  CHECK_THROWS_WITH_AS(read_csv(bad), doctest::Contains("line 3"), ValidationError);
  std::istringstream ragged("a,b,error\n1,\n");
  CHECK_THROWS_AS(read_csv(ragged), ValidationError);
}

TEST_CASE("sweep spec JSON round-trips and rejects unknown fields") {
  SweepSpec s;
  s.axes = {{Axis::J, 0.1, 2.0, 20}, {Axis::Gamma, 0.0, 1.0, 5}};
  s.base.D = 0.25;
  s.r = 2;
  s.derivatives = {{Quantity::QD, Axis::J}};
  const nlohmann::json j = to_json(s);
  const SweepSpec back = sweep_spec_from_json(j);
  CHECK(to_json(back) == j);

  nlohmann::json extra = j;
  extra["colour"] = "blue";
  CHECK_THROWS_WITH_AS(sweep_spec_from_json(extra), doctest::Contains("colour"), ValidationError);
  nlohmann::json axis_extra = j;
  axis_extra["axes"][0]["step"] = 0.1;
  CHECK_THROWS_AS(sweep_spec_from_json(axis_extra), ValidationError);
  nlohmann::json both = j;
  both["base"]["temperature"] = 1.0;
  both["base"]["beta"] = 1.0;
  CHECK_THROWS_AS(sweep_spec_from_json(both), ValidationError);
}

TEST_CASE("beta zero in a spec means infinite temperature") {
  const auto j = nlohmann::json::parse(R"({"axes":[{"parameter":"J","min":0,"max":1,"n_points":3}],"base":{"beta":0}})");
  CHECK(std::isinf(sweep_spec_from_json(j).base.temperature));
}
