#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "xydm/sweep.hpp"

namespace xydm {

/// Twelve significant digits ("%.12g"); NaN prints as "nan".
std::string format_number(double v);

std::vector<std::string> csv_header(const SweepSpec& spec);

/// Header row plus one line per table row, LF line endings.
void write_csv(const SweepTable& table, std::ostream& out);

using CsvCell = std::variant<double, std::string>;

struct CsvDocument {
  std::vector<std::string> header;
  std::vector<std::vector<CsvCell>> rows;
};

/// Every column except "error" is parsed as a number.
CsvDocument read_csv(std::istream& in);
void write_csv(const CsvDocument& doc, std::ostream& out);

nlohmann::json to_json(const SweepSpec& spec);
nlohmann::json to_json(const SweepTable& table);

/// Reads the serialized SweepSpec. Unknown or conflicting fields throw ValidationError.
SweepSpec sweep_spec_from_json(const nlohmann::json& j);

/// Number, or null for non-finite values.
nlohmann::json json_number(double v);

}  // namespace xydm
