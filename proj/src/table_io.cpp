#include "xydm/table_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "xydm/errors.hpp"

namespace xydm {

namespace {

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r' || c == '"') c = ' ';
  }
  return s;
}

void write_line(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out << ',';
    out << fields[i];
  }
  out << '\n';
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.push_back(cur);
  return out;
}

void reject_unknown(const nlohmann::json& j, const std::set<std::string>& allowed,
                    const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw ValidationError("unknown field '" + key + "' in " + where);
  }
}

double number_field(const nlohmann::json& j, const char* key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_number()) throw ValidationError(std::string(key) + " in " + where + " must be a number");
  return v.get<double>();
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::vector<std::string> csv_header(const SweepSpec& spec) {
  std::vector<std::string> h;
  for (const auto& a : spec.axes) h.push_back("axis_" + std::string(to_string(a.parameter)));
  for (const char* c : {"J", "gamma", "D", "T", "r"}) h.emplace_back(c);
  for (Quantity q : spec.emitted_quantities()) h.emplace_back(to_string(q));
  for (const auto& d : spec.derivatives) {
    h.push_back("d" + std::string(to_string(d.quantity)) + "/d" + std::string(to_string(d.axis)));
  }
  h.emplace_back("error");
  return h;
}

void write_csv(const SweepTable& table, std::ostream& out) {
  write_line(out, csv_header(table.spec));
  const auto quantities = table.spec.emitted_quantities();
  std::vector<std::string> f;
  for (const auto& row : table.rows) {
    f.clear();
    for (double a : row.axis_values) f.push_back(format_number(a));
    f.push_back(format_number(row.params.J));
    f.push_back(format_number(row.params.gamma));
    f.push_back(format_number(row.params.D));
    f.push_back(format_number(row.params.temperature));
    f.push_back(format_number(table.spec.r));
    for (Quantity q : quantities) f.push_back(format_number(row[q]));
    for (double d : row.derivatives) f.push_back(format_number(d));
    f.push_back(sanitize(row.error));
    write_line(out, f);
  }
}

CsvDocument read_csv(std::istream& in) {
  CsvDocument doc;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("CSV input is empty");
  doc.header = split(line);
  std::size_t error_col = doc.header.size();
  for (std::size_t i = 0; i < doc.header.size(); ++i) {
    if (doc.header[i] == "error") error_col = i;
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    const auto fields = split(line);
    if (fields.size() != doc.header.size()) {
      throw ValidationError("CSV line " + std::to_string(lineno) + " has " +
                            std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(doc.header.size()));
    }
    std::vector<CsvCell> row;
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i == error_col) {
        row.emplace_back(fields[i]);
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(fields[i].c_str(), &end);
      if (fields[i].empty() || *end != '\0') {
        throw ValidationError("CSV line " + std::to_string(lineno) + ": '" + fields[i] +
                              "' is not a number");
      }
      row.emplace_back(v);
    }
    doc.rows.push_back(std::move(row));
  }
  return doc;
}

void write_csv(const CsvDocument& doc, std::ostream& out) {
  write_line(out, doc.header);
  std::vector<std::string> f;
  for (const auto& row : doc.rows) {
    f.clear();
    for (const auto& cell : row) {
      if (const auto* d = std::get_if<double>(&cell)) {
        f.push_back(format_number(*d));
      } else {
        f.push_back(sanitize(std::get<std::string>(cell)));
      }
    }
    write_line(out, f);
  }
}

nlohmann::json json_number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

nlohmann::json to_json(const SweepSpec& spec) {
  nlohmann::json j;
  j["axes"] = nlohmann::json::array();
  for (const auto& a : spec.axes) {
    j["axes"].push_back({{"parameter", std::string(to_string(a.parameter))},
                         {"min", a.min},
                         {"max", a.max},
                         {"n_points", a.n_points}});
  }
  nlohmann::json base{{"J", spec.base.J}, {"gamma", spec.base.gamma}, {"D", spec.base.D}};
  if (std::isinf(spec.base.temperature)) {
    base["beta"] = 0.0;
  } else {
    base["temperature"] = spec.base.temperature;
  }
  j["base"] = base;
  j["r"] = spec.r;
  j["quantities"] = nlohmann::json::array();
  for (Quantity q : spec.emitted_quantities()) j["quantities"].push_back(std::string(to_string(q)));
  j["derivatives"] = nlohmann::json::array();
  for (const auto& d : spec.derivatives) {
    j["derivatives"].push_back({{"quantity", std::string(to_string(d.quantity))},
                                {"axis", std::string(to_string(d.axis))}});
  }
  return j;
}

SweepSpec sweep_spec_from_json(const nlohmann::json& j) {
  reject_unknown(j, {"axes", "base", "r", "quantities", "derivatives"}, "sweep spec");
  SweepSpec spec;
  if (!j.contains("axes") || !j.at("axes").is_array()) {
    throw ValidationError("sweep spec needs an 'axes' array");
  }
  for (const auto& a : j.at("axes")) {
    reject_unknown(a, {"parameter", "min", "max", "n_points"}, "axis");
    AxisSpec ax;
    const auto name = a.at("parameter").get<std::string>();
    const auto parsed = parse_axis(name);
    if (!parsed) throw ValidationError("unknown axis parameter '" + name + "'");
    ax.parameter = *parsed;
    ax.min = number_field(a, "min", "axis");
    ax.max = number_field(a, "max", "axis");
    if (!a.at("n_points").is_number_integer()) throw ValidationError("n_points must be an integer");
    ax.n_points = a.at("n_points").get<int>();
    spec.axes.push_back(ax);
  }
  if (j.contains("base")) {
    const auto& b = j.at("base");
    reject_unknown(b, {"J", "gamma", "D", "temperature", "beta"}, "base");
    if (b.contains("J")) spec.base.J = number_field(b, "J", "base");
    if (b.contains("gamma")) spec.base.gamma = number_field(b, "gamma", "base");
    if (b.contains("D")) spec.base.D = number_field(b, "D", "base");
    if (b.contains("temperature") && b.contains("beta")) {
      throw ValidationError("base may give temperature or beta, not both");
    }
    if (b.contains("temperature")) spec.base.temperature = number_field(b, "temperature", "base");
    if (b.contains("beta")) {
      const double beta = number_field(b, "beta", "base");
      if (!(beta >= 0.0)) throw ValidationError("beta must be ≥ 0");
      spec.base.temperature = beta == 0.0 ? kInfiniteTemperature : 1.0 / beta;
    }
  }
  if (j.contains("r")) {
    if (!j.at("r").is_number_integer()) throw ValidationError("r must be an integer");
    spec.r = j.at("r").get<int>();
  }
  if (j.contains("quantities")) {
    for (const auto& q : j.at("quantities")) {
      const auto name = q.get<std::string>();
      const auto parsed = parse_quantity(name);
      if (!parsed) throw ValidationError("unknown quantity '" + name + "'");
      spec.quantities.push_back(*parsed);
    }
  }
  if (j.contains("derivatives")) {
    for (const auto& d : j.at("derivatives")) {
      reject_unknown(d, {"quantity", "axis"}, "derivative");
      const auto q = parse_quantity(d.at("quantity").get<std::string>());
      const auto a = parse_axis(d.at("axis").get<std::string>());
      if (!q || !a) throw ValidationError("derivative names an unknown quantity or axis");
      spec.derivatives.push_back({*q, *a});
    }
  }
  return spec;
}

nlohmann::json to_json(const SweepTable& table) {
  nlohmann::json j;
  j["spec"] = to_json(table.spec);
  j["metadata"] = {{"code_version", XYDM_VERSION},
                   {"quadrature_abs_tolerance", table.spec.quadrature.abs_tolerance},
                   {"quadrature_max_intervals", table.spec.quadrature.max_intervals},
                   {"lattice", "thermodynamic-limit"}};
  const auto header = csv_header(table.spec);
  j["columns"] = header;
  j["rows"] = nlohmann::json::array();
  const auto quantities = table.spec.emitted_quantities();
  for (const auto& row : table.rows) {
    nlohmann::json r = nlohmann::json::array();
    for (double a : row.axis_values) r.push_back(json_number(a));
    r.push_back(json_number(row.params.J));
    r.push_back(json_number(row.params.gamma));
    r.push_back(json_number(row.params.D));
    r.push_back(json_number(row.params.temperature));
    r.push_back(table.spec.r);
    for (Quantity q : quantities) r.push_back(json_number(row[q]));
    for (double d : row.derivatives) r.push_back(json_number(d));
    r.push_back(row.error);
    j["rows"].push_back(std::move(r));
  }
  j["failures"] = table.failures();
  return j;
}

}  // namespace xydm
