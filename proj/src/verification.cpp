#include "heunlab/verification.hpp"

namespace heunlab {

std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::NotApplicable: return "not-applicable";
    case Verdict::FailAsPredicted: return "fail-as-predicted";
  }
  return "?";
}

std::optional<Verdict> parse_verdict(std::string_view s) {
  for (Verdict v : {Verdict::Pass, Verdict::Fail, Verdict::NotApplicable, Verdict::FailAsPredicted}) {
    if (to_string(v) == s) return v;
  }
  return std::nullopt;
}

Verdict VerificationOutcome::verdict() const {
  if (not_applicable) return Verdict::NotApplicable;
  if (predicted_failure) return passed ? Verdict::Fail : Verdict::FailAsPredicted;
  return passed ? Verdict::Pass : Verdict::Fail;
}

bool VerificationOutcome::ok() const {
  const Verdict v = verdict();
  return v == Verdict::Pass || v == Verdict::FailAsPredicted;
}

std::string_view to_string(IdentityMode m) { return m == IdentityMode::Exact ? "exact" : "randomized"; }

std::string describe_witness(const IdentityVerdict& v) {
  if (!v.witness) return "canonical forms differ";
  std::string s = point_to_string(*v.witness);
  if (v.lhs_value && v.rhs_value) s += ": lhs=" + v.lhs_value->get_str() + ", rhs=" + v.rhs_value->get_str();
  return s;
}

VerificationOutcome identity_outcome(std::string claim, const RationalExpr& lhs, const RationalExpr& rhs,
                                     IdentityMode mode, const RandomizedConfig& cfg) {
  VerificationOutcome out;
  out.claim = std::move(claim);
  out.mode = std::string(to_string(mode));
  const IdentityVerdict v = identity_check(lhs, rhs, mode, cfg);
  out.passed = v.equal;
  if (!v.equal) {
    out.witness = describe_witness(v);
    if (mode == IdentityMode::Exact) out.add("difference", (lhs - rhs).to_string());
  }
  return out;
}

void merge_outcome(VerificationOutcome& into, const VerificationOutcome& part, const std::string& label) {
  into.passed = into.passed && part.passed;
  if (!part.passed && !into.witness && part.witness) into.witness = label + ": " + *part.witness;
  into.add(label, part.passed ? "holds" : "fails");
  for (const auto& [k, v] : part.details) into.add(label + "." + k, v);
}

}  // namespace heunlab
