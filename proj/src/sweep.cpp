#include "xydm/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <thread>

#include "xydm/errors.hpp"
#include "xydm/measures.hpp"

namespace xydm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void set_parameter(ChainParams& p, Axis a, double v) {
  switch (a) {
    case Axis::J:
      p.J = v;
      break;
    case Axis::Gamma:
      p.gamma = v;
      break;
    case Axis::D:
      p.D = v;
      break;
    case Axis::Temperature:
      p.temperature = v;
      break;
  }
}

std::vector<std::size_t> axis_indices(const SweepSpec& spec, std::size_t row) {
  std::vector<std::size_t> idx(spec.axes.size());
  for (std::size_t a = spec.axes.size(); a-- > 0;) {
    const auto n = static_cast<std::size_t>(spec.axes[a].n_points);
    idx[a] = row % n;
    row /= n;
  }
  return idx;
}

SweepRow evaluate_row(const SweepSpec& spec, std::size_t row) {
  SweepRow out;
  out.params = spec.base;
  out.params.lattice = ThermodynamicLimit{};
  const auto idx = axis_indices(spec, row);
  for (std::size_t a = 0; a < spec.axes.size(); ++a) {
    const double v = spec.axes[a].value(static_cast<int>(idx[a]));
    out.axis_values.push_back(v);
    set_parameter(out.params, spec.axes[a].parameter, v);
  }
  out.values.fill(kNaN);
  try {
    const CorrelationSet c = correlations(out.params, spec.r, spec.quadrature);
    const MeasureReport m = discord_closed_form(xstate_from_correlations(c));
    out.values = {c.sz, c.xx, c.yy, c.zz, m.mutual_information, m.quantum_discord,
                  m.classical_correlation, m.concurrence};
  } catch (const NumericalError& e) {
    out.error = std::string("numerical: ") + e.what();
  } catch (const std::invalid_argument& e) {
    out.error = std::string("invalid: ") + e.what();
  } catch (const std::domain_error& e) {
    out.error = std::string("domain: ") + e.what();
  }
  return out;
}

}  // namespace

std::string_view to_string(Axis a) {
  switch (a) {
    case Axis::J:
      return "J";
    case Axis::Gamma:
      return "gamma";
    case Axis::D:
      return "D";
    case Axis::Temperature:
      return "T";
  }
  return "?";
}

std::string_view to_string(Quantity q) {
  static constexpr std::array<std::string_view, 8> names{"sz", "xx", "yy", "zz",
                                                         "MI", "QD", "CC", "C"};
  return names[static_cast<std::size_t>(q)];
}

std::optional<Axis> parse_axis(std::string_view s) {
  if (s == "J") return Axis::J;
  if (s == "gamma") return Axis::Gamma;
  if (s == "D") return Axis::D;
  if (s == "T" || s == "temperature") return Axis::Temperature;
  return std::nullopt;
}

std::optional<Quantity> parse_quantity(std::string_view s) {
  for (Quantity q : kAllQuantities) {
    if (to_string(q) == s) return q;
  }
  return std::nullopt;
}

double AxisSpec::value(int k) const {
  if (n_points == 1) return min;
  if (k == n_points - 1) return max;
  return min + k * step();
}

double AxisSpec::step() const { return n_points > 1 ? (max - min) / (n_points - 1) : 0.0; }

std::vector<Quantity> SweepSpec::emitted_quantities() const {
  if (quantities.empty()) return {kAllQuantities.begin(), kAllQuantities.end()};
  std::vector<Quantity> q;
  for (Quantity c : kAllQuantities) {
    if (std::find(quantities.begin(), quantities.end(), c) != quantities.end()) q.push_back(c);
  }
  return q;
}

std::size_t SweepSpec::row_count() const {
  std::size_t n = 1;
  for (const auto& a : axes) n *= static_cast<std::size_t>(a.n_points);
  return n;
}

void validate(const SweepSpec& spec) {
  if (spec.axes.empty() || spec.axes.size() > 2) {
    throw ValidationError("a sweep needs one or two axes");
  }
  for (std::size_t a = 0; a < spec.axes.size(); ++a) {
    const AxisSpec& ax = spec.axes[a];
    const std::string name(to_string(ax.parameter));
    if (!std::isfinite(ax.min) || !std::isfinite(ax.max)) {
      throw ValidationError("axis " + name + " has a non-finite bound");
    }
    if (ax.n_points < 1) throw ValidationError("axis " + name + " needs at least one point");
    if (ax.n_points > 1 && !(ax.min < ax.max)) {
      throw ValidationError("axis " + name + " needs min < max");
    }
    for (std::size_t b = 0; b < a; ++b) {
      if (spec.axes[b].parameter == ax.parameter) {
        throw ValidationError("axis " + name + " is listed twice");
      }
    }
  }
  if (spec.r < 1 || spec.r > kMaxSeparation) {
    throw ValidationError("separation r must be in [1, " + std::to_string(kMaxSeparation) + "]");
  }
  for (const auto& d : spec.derivatives) {
    const auto it = std::find_if(spec.axes.begin(), spec.axes.end(),
                                 [&](const AxisSpec& a) { return a.parameter == d.axis; });
    if (it == spec.axes.end()) {
      throw ValidationError("derivative requested along " + std::string(to_string(d.axis)) +
                            ", which is not swept");
    }
    if (it->n_points < 3) {
      throw ValidationError("derivative along " + std::string(to_string(d.axis)) +
                            " needs at least 3 points");
    }
  }
  if (spec.row_count() > 10'000'000) throw ValidationError("sweep grid is too large");
  // Fixed parameters must be valid on their own; swept ones are checked per row.
  ChainParams probe = spec.base;
  probe.lattice = ThermodynamicLimit{};
  for (const auto& a : spec.axes) set_parameter(probe, a.parameter, 0.0);
  validate(probe);
}

std::size_t SweepTable::failures() const {
  return static_cast<std::size_t>(
      std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return !r.error.empty(); }));
}

std::vector<double> SweepTable::column(Quantity q) const {
  std::vector<double> c;
  c.reserve(rows.size());
  for (const auto& r : rows) c.push_back(r[q]);
  return c;
}

std::vector<double> SweepTable::axis_column(std::size_t axis) const {
  std::vector<double> c;
  c.reserve(rows.size());
  for (const auto& r : rows) c.push_back(r.axis_values.at(axis));
  return c;
}

int default_workers() {
  if (const char* env = std::getenv("XYDM_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

SweepTable run_sweep(const SweepSpec& spec, int workers) {
  validate(spec);
  SweepTable table;
  table.spec = spec;
  const std::size_t n = spec.row_count();
  table.rows.resize(n);

  if (workers <= 0) workers = default_workers();
  workers = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(workers), n));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) table.rows[i] = evaluate_row(spec, i);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  for (const auto& d : spec.derivatives) {
    const auto col = derivative(table, d.quantity, d.axis);
    for (std::size_t i = 0; i < n; ++i) table.rows[i].derivatives.push_back(col[i]);
  }
  return table;
}

std::vector<double> derivative(std::span<const double> values, std::span<const double> axis) {
  const std::size_t n = values.size();
  if (axis.size() != n) throw DomainError("derivative: column and axis differ in length");
  if (n < 3) throw DomainError("derivative needs at least 3 points");
  const double h = (axis[n - 1] - axis[0]) / static_cast<double>(n - 1);
  if (!(h != 0.0) || !std::isfinite(h)) throw DomainError("derivative: degenerate axis");
  for (std::size_t k = 1; k < n; ++k) {
    if (std::abs((axis[k] - axis[k - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw DomainError("derivative: axis grid is not uniform");
    }
  }
  std::vector<double> d(n);
  d[0] = (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * h);
  for (std::size_t k = 1; k + 1 < n; ++k) d[k] = (values[k + 1] - values[k - 1]) / (2.0 * h);
  d[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * h);
  return d;
}

std::vector<double> derivative(const SweepTable& table, Quantity quantity, Axis axis) {
  const auto& axes = table.spec.axes;
  std::size_t a = axes.size();
  for (std::size_t k = 0; k < axes.size(); ++k) {
    if (axes[k].parameter == axis) a = k;
  }
  if (a == axes.size()) throw DomainError("derivative along an axis that is not swept");

  // Rows along axis a are spaced by the product of the later axes' sizes.
  std::size_t stride = 1;
  for (std::size_t k = a + 1; k < axes.size(); ++k) stride *= static_cast<std::size_t>(axes[k].n_points);
  const auto len = static_cast<std::size_t>(axes[a].n_points);
  const std::size_t n = table.rows.size();

  std::vector<double> out(n, kNaN);
  std::vector<double> vals(len), xs(len);
  for (std::size_t start = 0; start < n; ++start) {
    if ((start / stride) % len != 0) continue;
    for (std::size_t k = 0; k < len; ++k) {
      const SweepRow& row = table.rows[start + k * stride];
      vals[k] = row[quantity];
      xs[k] = row.axis_values[a];
    }
    const auto d = derivative(vals, xs);
    for (std::size_t k = 0; k < len; ++k) out[start + k * stride] = d[k];
  }
  return out;
}

Extremum locate_extremum(std::span<const double> column, std::span<const double> axis) {
  if (column.size() != axis.size() || column.empty()) {
    throw DomainError("locate_extremum: column and axis must be non-empty and equal length");
  }
  std::size_t best = column.size();
  for (std::size_t k = 0; k < column.size(); ++k) {
    if (!std::isfinite(column[k])) continue;
    if (best == column.size() || column[k] > column[best]) best = k;
  }
  if (best == column.size()) throw DomainError("locate_extremum: no finite values");

  Extremum e;
  e.index = best;
  e.position = axis[best];
  e.value = column[best];
  e.sharpness = kNaN;
  if (best == 0 || best + 1 == column.size() || !std::isfinite(column[best - 1]) ||
      !std::isfinite(column[best + 1])) {
    e.at_boundary = true;
    return e;
  }
  const double fm = column[best - 1];
  const double f0 = column[best];
  const double fp = column[best + 1];
  const double h = 0.5 * (axis[best + 1] - axis[best - 1]);
  const double curv = fp - 2.0 * f0 + fm;
  e.sharpness = curv / (h * h);
  if (curv < 0.0) {
    const double shift = 0.5 * (fm - fp) / curv;
    e.position = axis[best] + shift * h;
    e.value = f0 - 0.125 * (fp - fm) * (fp - fm) / curv;
  }
  return e;
}

}  // namespace xydm
