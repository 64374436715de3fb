#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "xydm/chain.hpp"
#include "xydm/quadrature.hpp"

namespace xydm {

enum class Axis { J, Gamma, D, Temperature };

/// Output quantities in their fixed column order.
enum class Quantity { Sz, XX, YY, ZZ, MI, QD, CC, C };
inline constexpr std::array<Quantity, 8> kAllQuantities{
    Quantity::Sz, Quantity::XX, Quantity::YY, Quantity::ZZ,
    Quantity::MI, Quantity::QD, Quantity::CC, Quantity::C};

std::string_view to_string(Axis a);
std::string_view to_string(Quantity q);
std::optional<Axis> parse_axis(std::string_view s);
std::optional<Quantity> parse_quantity(std::string_view s);

struct AxisSpec {
  Axis parameter = Axis::J;
  double min = 0.0;
  double max = 0.0;
  int n_points = 1;

  double value(int k) const;
  double step() const;
};

struct DerivativeRequest {
  Quantity quantity = Quantity::QD;
  Axis axis = Axis::J;
};

struct SweepSpec {
  std::vector<AxisSpec> axes;
  /// Values for parameters that are not swept. Sweeps run in the thermodynamic limit.
  ChainParams base;
  int r = 1;
  /// Columns to emit; empty means all of them.
  std::vector<Quantity> quantities;
  std::vector<DerivativeRequest> derivatives;
  QuadratureOptions quadrature;

  std::vector<Quantity> emitted_quantities() const;
  std::size_t row_count() const;
};

/// Throws ValidationError describing the first problem.
void validate(const SweepSpec& spec);

struct SweepRow {
  std::vector<double> axis_values;
  ChainParams params;
  /// Indexed by Quantity; NaN when the point failed.
  std::array<double, 8> values{};
  /// One entry per DerivativeRequest.
  std::vector<double> derivatives;
  /// Empty on success.
  std::string error;

  double operator[](Quantity q) const { return values[static_cast<std::size_t>(q)]; }
};

struct SweepTable {
  SweepSpec spec;
  /// Row-major over axes in declared order (the first axis varies slowest).
  std::vector<SweepRow> rows;

  std::size_t failures() const;
  std::vector<double> column(Quantity q) const;
  std::vector<double> axis_column(std::size_t axis) const;
};

/// Workers: 0 picks the XYDM_WORKERS environment variable, else hardware concurrency.
int default_workers();

/// Evaluates every grid point; results do not depend on the worker count.
SweepTable run_sweep(const SweepSpec& spec, int workers = 0);

/// Central differences inside, second-order one-sided at both ends.
/// Throws DomainError for fewer than 3 points or a non-uniform grid.
std::vector<double> derivative(std::span<const double> values, std::span<const double> axis);

/// d(quantity)/d(axis) for every row; on 2-axis tables each line along `axis` is
/// differentiated separately.
std::vector<double> derivative(const SweepTable& table, Quantity quantity, Axis axis);

struct Extremum {
  double position = 0.0;
  double value = 0.0;
  /// (f₊ − 2f₀ + f₋)/h² at the discrete maximum; NaN at a boundary.
  double sharpness = 0.0;
  std::size_t index = 0;
  bool at_boundary = false;
};

/// Maximum of the column with a parabolic polish through the argmax and its
/// neighbours. NaN entries are skipped; a boundary argmax is flagged and left unrefined.
Extremum locate_extremum(std::span<const double> column, std::span<const double> axis);

}  // namespace xydm
