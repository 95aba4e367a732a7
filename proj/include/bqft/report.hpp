#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace bqft {

struct Check {
  std::string name;
  bool pass = false;
  std::string witness;
  std::optional<double> tolerance;
};

struct Report {
  std::string title;
  std::vector<Check> checks;

  void add(const std::string& name, bool pass, const std::string& witness = "",
           std::optional<double> tolerance = std::nullopt);
  void merge(const Report& other);
  bool all_passed() const;
  size_t failures() const;
  nlohmann::json to_json() const;
  std::string summary() const;
};

}  // namespace bqft
