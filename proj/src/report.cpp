#include "bqft/report.hpp"

#include <sstream>

namespace bqft {

void Report::add(const std::string& name, bool pass, const std::string& witness,
                 std::optional<double> tolerance) {
  checks.push_back(Check{name, pass, witness, tolerance});
}

void Report::merge(const Report& other) {
  for (const auto& c : other.checks) checks.push_back(c);
}

bool Report::all_passed() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  return true;
}

size_t Report::failures() const {
  size_t n = 0;
  for (const auto& c : checks) n += !c.pass;
  return n;
}

nlohmann::json Report::to_json() const {
  nlohmann::json j;
  j["title"] = title;
  j["passed"] = all_passed();
  auto arr = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json jc;
    jc["name"] = c.name;
    jc["status"] = c.pass ? "pass" : "fail";
    jc["witness"] = c.witness;
    if (c.tolerance) jc["tolerance"] = *c.tolerance;
    arr.push_back(jc);
  }
  j["checks"] = arr;
  return j;
}

std::string Report::summary() const {
  std::ostringstream os;
  os << title << ": " << (checks.size() - failures()) << "/" << checks.size() << " checks passed";
  for (const auto& c : checks)
    if (!c.pass) os << "\n  FAIL " << c.name << (c.witness.empty() ? "" : " [" + c.witness + "]");
  return os.str();
}

}  // namespace bqft
