#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace xydm::acceptance {

struct CriterionResult {
  std::string id;
  std::string name;
  bool passed = false;
  std::string detail;
  /// Ordered (name, value) pairs; no timings, so documents are reproducible.
  std::vector<std::pair<std::string, double>> metrics;
};

struct Criterion {
  std::string id;
  std::string name;
  std::string claim;
  std::function<CriterionResult(int workers)> run;
};

const std::vector<Criterion>& criteria();

/// Comma-separated tokens; a criterion is selected when a token equals its id
/// or its name, or is a substring of its name. Empty selects everything.
std::vector<const Criterion*> select(const std::string& filter);

std::vector<CriterionResult> run(const std::vector<const Criterion*>& selected, int workers);

nlohmann::json to_json(const std::vector<CriterionResult>& results);

/// One "PASS|FAIL  id  name  detail" line per criterion.
std::string to_table(const std::vector<CriterionResult>& results);

}  // namespace xydm::acceptance
