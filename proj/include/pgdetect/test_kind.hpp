#pragma once

#include <cstddef>
#include <string>
#include <string_view>

#include "pgdetect/error.hpp"

namespace pgdetect {

enum class TestFamily { Fisher, RobustFisher, Chiu, TTilde, TTildeFisher, TTildeNc };

/// One of the six detection tests. n_c is meaningful only for the
/// RobustFisher, Chiu and TTildeNc families and is 0 otherwise.
struct TestKind {
  TestFamily family = TestFamily::TTilde;
  std::size_t n_c = 0;

  static TestKind fisher() { return {TestFamily::Fisher, 0}; }
  static TestKind robust_fisher(std::size_t n_c) { return {TestFamily::RobustFisher, n_c}; }
  static TestKind chiu(std::size_t n_c) { return {TestFamily::Chiu, n_c}; }
  static TestKind ttilde() { return {TestFamily::TTilde, 0}; }
  static TestKind ttilde_fisher() { return {TestFamily::TTildeFisher, 0}; }
  static TestKind ttilde_nc(std::size_t n_c) { return {TestFamily::TTildeNc, n_c}; }

  [[nodiscard]] bool uses_n_c() const noexcept {
    return family == TestFamily::RobustFisher || family == TestFamily::Chiu ||
           family == TestFamily::TTildeNc;
  }
  /// Standardized tests need a training set.
  [[nodiscard]] bool standardized() const noexcept {
    return family == TestFamily::TTilde || family == TestFamily::TTildeFisher ||
           family == TestFamily::TTildeNc;
  }
  /// Closed-form false-alarm probability exists.
  [[nodiscard]] bool has_analytic_pfa() const noexcept {
    return family == TestFamily::TTilde || family == TestFamily::TTildeNc;
  }

  /// Throws unless n_c fits a grid with eta ordinates.
  void validate(std::size_t eta) const {
    if (!uses_n_c()) return;
    const std::size_t max_nc = family == TestFamily::TTildeNc ? eta : eta - 1;
    if (n_c < 1 || n_c > max_nc) {
      throw InvalidInput(name() + ": n_c=" + std::to_string(n_c) + " outside [1, " +
                         std::to_string(max_nc) + "]");
    }
  }

  [[nodiscard]] std::string family_name() const {
    switch (family) {
    case TestFamily::Fisher: return "fisher";
    case TestFamily::RobustFisher: return "robust_fisher";
    case TestFamily::Chiu: return "chiu";
    case TestFamily::TTilde: return "ttilde";
    case TestFamily::TTildeFisher: return "ttilde_fisher";
    case TestFamily::TTildeNc: return "ttilde_nc";
    }
    return "?";
  }

  /// "fisher", "chiu(5)", "ttilde_nc(3)", ...
  [[nodiscard]] std::string name() const {
    return uses_n_c() ? family_name() + "(" + std::to_string(n_c) + ")" : family_name();
  }

  static TestFamily parse_family(std::string_view s) {
    if (s == "fisher") return TestFamily::Fisher;
    if (s == "robust_fisher") return TestFamily::RobustFisher;
    if (s == "chiu") return TestFamily::Chiu;
    if (s == "ttilde") return TestFamily::TTilde;
    if (s == "ttilde_fisher") return TestFamily::TTildeFisher;
    if (s == "ttilde_nc") return TestFamily::TTildeNc;
    throw InvalidInput("unknown test kind '" + std::string(s) + "'");
  }

  friend bool operator==(const TestKind&, const TestKind&) = default;
};

} // namespace pgdetect
