// Named verification suites: each binds a result to pass/fail checks with
// explicit thresholds.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "confbc/io.hpp"

namespace confbc {

enum class Relation { at_most, at_least };

struct SuiteCheck {
  std::string description;
  double measured = 0.0;
  double threshold = 0.0;
  Relation relation = Relation::at_most;
  bool pass = false;
};

SuiteCheck make_check(std::string description, double measured, Relation rel, double threshold);

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::vector<SuiteCheck> checks;
  double wall_time_seconds = 0.0;  // not serialized, so reports stay byte-stable

  bool pass() const;
  /// {suite, seed, checks: [{description, measured, threshold, relation, pass}], pass}
  Json to_json() const;
};

struct SuiteConfig {
  std::uint64_t seed = 1;
};

class UnknownSuiteError : public PreconditionError {
 public:
  using PreconditionError::PreconditionError;
};

const std::vector<std::string>& suite_names();

/// Deterministic for a given seed. Throws UnknownSuiteError listing the
/// valid names.
SuiteReport run_suite(const std::string& name, const SuiteConfig& config = {});

}  // namespace confbc
