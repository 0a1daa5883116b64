#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heunlab/rational_expr.hpp"

namespace heunlab {

enum class Verdict { Pass, Fail, NotApplicable, FailAsPredicted };

std::string_view to_string(Verdict v);
std::optional<Verdict> parse_verdict(std::string_view s);

struct VerificationOutcome {
  std::string claim;
  std::string mode = "exact";  ///< exact | randomized | numeric
  bool passed = false;
  /// The check is expected to fail (paper-literal variants); a failure then counts as success.
  bool predicted_failure = false;
  bool not_applicable = false;
  std::optional<std::string> witness;
  std::optional<double> residual;
  std::vector<std::pair<std::string, std::string>> details;

  Verdict verdict() const;
  /// True when the verdict is Pass or FailAsPredicted.
  bool ok() const;
  void add(std::string key, std::string value) { details.emplace_back(std::move(key), std::move(value)); }
};

std::string_view to_string(IdentityMode m);

/// Outcome of a single identity lhs == rhs, with witness text on failure.
VerificationOutcome identity_outcome(std::string claim, const RationalExpr& lhs, const RationalExpr& rhs,
                                     IdentityMode mode, const RandomizedConfig& cfg);

/// Folds a sub-check into `into`: passes only if both pass; the first witness is kept.
void merge_outcome(VerificationOutcome& into, const VerificationOutcome& part, const std::string& label);

std::string describe_witness(const IdentityVerdict& v);

}  // namespace heunlab
