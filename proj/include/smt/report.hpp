#pragma once

#include <string>
#include <utility>
#include <vector>

namespace smt {

/// Outcome of a checker: pass, or the first violation found with the points
/// that witness it.
struct CheckReport {
  std::string check;
  bool pass = true;
  std::string message;
  std::vector<std::pair<double, double>> witness;

  static CheckReport ok(std::string check) { return {std::move(check), true, {}, {}}; }

  static CheckReport fail(std::string check, std::string message,
                          std::vector<std::pair<double, double>> witness = {}) {
    return {std::move(check), false, std::move(message), std::move(witness)};
  }

  explicit operator bool() const { return pass; }
};

}  // namespace smt
