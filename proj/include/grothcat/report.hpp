#pragma once

#include <string>
#include <vector>

namespace grothcat {

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;  // witness on failure
};

/// Outcome of a verification run, one entry per named check.
struct CheckReport {
  std::vector<CheckResult> checks;

  bool ok() const {
    for (const auto& c : checks) {
      if (!c.passed) return false;
    }
    return true;
  }

  void add(std::string name, bool passed, std::string detail = {}) {
    checks.push_back({std::move(name), passed, std::move(detail)});
  }

  void merge(const CheckReport& other) { checks.insert(checks.end(), other.checks.begin(), other.checks.end()); }

  std::string to_string() const {
    std::string out;
    for (const auto& c : checks) {
      out += (c.passed ? "PASS " : "FAIL ") + c.name;
      if (!c.detail.empty()) out += ": " + c.detail;
      out += "\n";
    }
    return out;
  }
};

}  // namespace grothcat
