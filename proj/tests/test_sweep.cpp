#include <doctest.h>

#include <cmath>
#include <sstream>

#include "xydm/errors.hpp"
#include "xydm/sweep.hpp"
#include "xydm/table_io.hpp"

using namespace xydm;

namespace {

std::vector<double> grid(double lo, double hi, int n) {
  std::vector<double> x(n);
  for (int k = 0; k < n; ++k) x[k] = lo + (hi - lo) * k / (n - 1);
  return x;
}

}  // namespace

TEST_CASE("derivative of a quadratic is exact, including the endpoints") {
  const auto x = grid(0.0, 1.0, 101);
  std::vector<double> y;
  for (double v : x) y.push_back(v * v);
  const auto d = derivative(y, x);
  for (std::size_t k = 0; k < x.size(); ++k) CHECK(std::abs(d[k] - 2 * x[k]) < 1e-10);
}

TEST_CASE("derivative of a constant vanishes") {
  const auto x = grid(-2.0, 3.0, 7);
  const std::vector<double> y(7, 4.2);
  for (double d : derivative(y, x)) CHECK(std::abs(d) < 1e-12);
}

TEST_CASE("derivative rejects short or non-uniform grids") {
  const std::vector<double> two{0.0, 1.0};
  CHECK_THROWS_AS(derivative(two, two), DomainError);
  const std::vector<double> x{0.0, 0.1, 0.3, 0.4};
  const std::vector<double> y{1, 2, 3, 4};
  CHECK_THROWS_WITH_AS(derivative(y, x), doctest::Contains("uniform"), DomainError);
}

TEST_CASE("parabolic polish recovers an off-grid peak") {
  const auto x = grid(0.0, 2.3, 12);
  std::vector<double> y;
  for (double v : x) y.push_back(-(v - 1.0) * (v - 1.0));
  const Extremum e = locate_extremum(y, x);
  CHECK_FALSE(e.at_boundary);
  CHECK(std::abs(e.position - 1.0) < (x[1] - x[0]) / 10);
  CHECK(e.value == doctest::Approx(0.0).epsilon(1e-12).scale(1.0));
  CHECK(e.sharpness == doctest::Approx(-2.0));
}

TEST_CASE("monotone columns flag a boundary maximum") {
  const auto x = grid(0.0, 1.0, 10);
  const Extremum e = locate_extremum(x, x);
  CHECK(e.at_boundary);
  CHECK(e.position == 1.0);
  CHECK(std::isnan(e.sharpness));
}

TEST_CASE("single-point sweep at J=0 has no correlations") {
  SweepSpec s;
  s.axes = {{Axis::J, 0.0, 0.0, 1}};
  s.base.gamma = 1.0;
  const SweepTable t = run_sweep(s, 1);
  REQUIRE(t.rows.size() == 1);
  for (Quantity q : {Quantity::QD, Quantity::CC, Quantity::C, Quantity::MI}) CHECK(std::abs(t.rows[0][q]) < 1e-10);
  CHECK(t.rows[0][Quantity::Sz] == doctest::Approx(0.5));
}

TEST_CASE("two-axis tables are row-major with the first axis slowest") {
  SweepSpec s;
  s.axes = {{Axis::D, 0.0, 0.2, 3}, {Axis::J, 0.5, 1.5, 4}};
  s.base.gamma = 0.5;
  s.derivatives = {{Quantity::QD, Axis::J}, {Quantity::QD, Axis::D}};
  const SweepTable t = run_sweep(s, 2);
  REQUIRE(t.rows.size() == 12);
  CHECK(t.rows[0].axis_values == std::vector<double>{0.0, 0.5});
  CHECK(t.rows[1].axis_values[1] == doctest::Approx(0.5 + 1.0 / 3));
  CHECK(t.rows[4].axis_values[0] == doctest::Approx(0.1));
  CHECK(t.rows[11].params.D == 0.2);
  CHECK(t.rows[11].params.J == 1.5);
  // Along J inside the second D line.
  std::vector<double> qd, js;
  for (int k = 4; k < 8; ++k) {
    qd.push_back(t.rows[k][Quantity::QD]);
    js.push_back(t.rows[k].axis_values[1]);
  }
  const auto d = derivative(qd, js);
  for (int k = 0; k < 4; ++k) CHECK(t.rows[4 + k].derivatives[0] == d[k]);
}

TEST_CASE("table bytes do not depend on the worker count") {
  SweepSpec s;
  s.axes = {{Axis::J, 0.1, 2.0, 40}};
  s.base.gamma = 0.7;
  s.base.D = 0.3;
  s.derivatives = {{Quantity::C, Axis::J}};
  std::ostringstream a, b;
  write_csv(run_sweep(s, 1), a);
  write_csv(run_sweep(s, 4), b);
  CHECK(a.str() == b.str());
}

TEST_CASE("a failing point is recorded without aborting the sweep") {
  SweepSpec s;
  s.axes = {{Axis::J, -1.0, 1.0, 3}};
  const SweepTable t = run_sweep(s, 1);
  CHECK(t.failures() == 1);
  CHECK_FALSE(t.rows[0].error.empty());
  CHECK(std::isnan(t.rows[0][Quantity::QD]));
  CHECK(t.rows[1].error.empty());
  CHECK(t.rows[2].error.empty());
}

TEST_CASE("invalid specs are rejected up front") {
  SweepSpec s;
  CHECK_THROWS_AS(validate(s), ValidationError);
  s.axes = {{Axis::J, 1.0, 0.0, 5}};
  CHECK_THROWS_AS(validate(s), ValidationError);
  s.axes = {{Axis::J, 0.0, 1.0, 2}};
  s.derivatives = {{Quantity::QD, Axis::J}};
  CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("3 points"), ValidationError);
  s.axes = {{Axis::J, 0.0, 1.0, 5}};
  s.derivatives = {{Quantity::QD, Axis::D}};
  CHECK_THROWS_WITH_AS(validate(s), doctest::Contains("not swept"), ValidationError);
  s.derivatives.clear();
  s.axes = {{Axis::J, 0.0, 1.0, 5}, {Axis::J, 0.0, 1.0, 5}};
  CHECK_THROWS_AS(validate(s), ValidationError);
}

TEST_CASE("quantum discord stays below classical correlation along the Ising line") {
  SweepSpec s;
  s.axes = {{Axis::J, 0.1, 2.0, 100}};
  s.base.gamma = 1.0;
  const SweepTable t = run_sweep(s, 1);
  for (const auto& row : t.rows) CHECK(row[Quantity::QD] < row[Quantity::CC]);
}

TEST_CASE("derivative peak sits at the critical coupling without DM") {
  SweepSpec s;
  s.axes = {{Axis::J, 0.8, 1.2, 101}};
  s.base.gamma = 0.8;
  s.derivatives = {{Quantity::QD, Axis::J}};
  const SweepTable t = run_sweep(s, 1);
  std::vector<double> d;
  for (const auto& row : t.rows) d.push_back(std::abs(row.derivatives[0]));
  const Extremum e = locate_extremum(d, t.axis_column(0));
  CHECK(std::abs(e.position - 1.0) < 0.02);
}
