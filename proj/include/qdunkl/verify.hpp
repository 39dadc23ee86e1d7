#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qdunkl/dunkl.hpp"

namespace qdunkl {

/// One checkable identity of the theory.
struct IdentitySpec {
  std::string id;
  /// Short name of the statement being checked.
  std::string anchor;
  double tolerance;
  /// Acceptance criterion (1..10) this identity belongs to, 0 for none.
  int criterion;
  /// Run once per alpha; otherwise once per report with alpha = null.
  bool per_alpha;
  /// Needs alpha > -1/2 (Mehler weight, R, tR, V, tV).
  bool strict_only;
};

/// Every identity, sorted by id.
const std::vector<IdentitySpec>& identity_registry();
const IdentitySpec& find_identity(const std::string& id);

struct VerifyConfig {
  int k = 1;
  std::vector<double> alphas = {-0.5, 0.0, 0.5, 1.0};
  /// Exponent window; the standard window of admissible_q(k) when unset.
  std::optional<std::pair<int, int>> window;
  /// Replaces every registry tolerance when set.
  std::optional<double> tol;
  std::uint64_t seed = 1;
  bool timings = false;
  /// 0 uses the hardware concurrency.
  int threads = 0;
  /// Restrict the run to these ids (all when empty).
  std::vector<std::string> only;
};

struct ReportEntry {
  std::string identity_id;
  std::string anchor;
  std::optional<double> alpha;
  /// Unset when the check threw; error then holds the message.
  std::optional<double> residual;
  double tolerance = 0.0;
  bool pass = false;
  std::optional<double> runtime_ms;
  std::string error;
};

struct VerificationReport {
  double q = 0.0;
  int k = 0;
  int n_lo = 0, n_hi = 0;
  std::uint64_t seed = 0;
  std::vector<double> alpha_list;
  /// Sorted by identity id, then alpha.
  std::vector<ReportEntry> entries;

  int failures() const;
  bool all_pass() const { return failures() == 0; }
};

/// 8 random functions on exponents [0, 20] with independent complex values on
/// both branches and unit sup norm. Depends only on the seed and the grid.
std::vector<GridFunction> verification_corpus(const QGrid& grid, std::uint64_t seed);

VerificationReport run_verification(const VerifyConfig& config);

std::string report_json(const VerificationReport& report);
/// Columns identity_id, anchor, alpha, residual, tolerance, pass, runtime_ms.
std::string report_csv(const VerificationReport& report);

}  // namespace qdunkl
