#pragma once

// Identity-verification suites. Each check evaluates one identity at one
// parameter point (or one aggregate over a sample) and records the measured
// residual against its tolerance. Records carry the acceptance criterion they
// belong to (0 for supplementary checks) so the acceptance driver and the CLI
// share one implementation.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace qbmf::verify {

struct CheckRecord {
  std::string suite;
  std::string name;
  /// Short identity tag, e.g. "difference-equation", "wronskian-table".
  std::string tag;
  std::string params;
  double residual = 0;
  double tol = 0;
  bool pass = false;
  int criterion = 0;
  std::string note;
};

struct VerifyOptions {
  std::uint32_t seed = 20240611;
  /// Replaces every check tolerance when set.
  std::optional<double> tol;
  /// Restricts the q grids of the grid-based suites to this single value
  /// (the q -> 1 limit suite keeps its own q values).
  std::optional<double> q;
};

struct VerifyReport {
  std::vector<CheckRecord> records;

  std::size_t passed() const;
  std::size_t failed() const;
  bool all_pass() const { return failed() == 0; }
  /// Distinct suite names in first-appearance order.
  std::vector<std::string> suites() const;
};

/// The individual suites, in the order "all" runs them.
const std::vector<std::string>& suite_names();

/// Runs one suite by name, or every suite for "all". Unknown names throw
/// qbmf::domain_error. Individual check failures (including evaluation
/// errors) are recorded, never thrown.
VerifyReport run_suite(const std::string& name, const VerifyOptions& options = {});

/// One line per check followed by per-suite and overall counts.
void print_report(const VerifyReport& report, std::ostream& out);

}  // namespace qbmf::verify
