#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heunlab/heun.hpp"
#include "heunlab/painleve.hpp"

namespace heunlab {

/// One reduction of a Heun derivative equation to a Painleve linear equation.
struct MatchingCase {
  PainleveKind kind = PainleveKind::P6;
  HeunFamily family = HeunFamily::General;
  int branch = 1;  ///< sign in front of kappa_inf (P5, P6)

  /// Heun parameter -> expression in Painleve parameters, lambda and t.
  Bindings param_map;
  /// P6 only: alpha*beta, from which alpha = (alpha*beta)/beta.
  std::optional<RationalExpr> alpha_beta;
  std::optional<GaugeSpec> gauge;
  /// Values fixed on the Painleve side (P5: kappa at its bridge value).
  Bindings painleve_overrides;
  /// Painleve parameter values applied by specialize().
  Bindings values;

  RationalExpr mu_constraint;
  RationalExpr riccati_rhs;  ///< d lambda/dt
  RationalExpr condition;    ///< must vanish for the Riccati reduction
  /// Parameter choices making `condition` vanish (one per factor).
  std::vector<Bindings> classical;
  /// Expressions forced to zero by the classical condition: (alpha*beta or alpha, q).
  std::vector<std::pair<std::string, RationalExpr>> obstruction;

  /// Set when specialized parameters make beta vanish.
  bool not_applicable = false;
  /// The case uses a printed formula known not to hold (paper-literal flags).
  bool predicted_failure = false;
  std::vector<std::string> notes;

  std::string id() const;
};

/// The reduction data for a Painleve kind. `branch` is +1 or -1.
MatchingCase matching_case(PainleveKind kind, int branch = 1, const Conventions& conv = {});
/// Throws UnknownCase for names other than P2, P3prime, P4, P5, P6.
MatchingCase matching_case(std::string_view kind, int branch = 1, const Conventions& conv = {});

/// Substitutes values for Painleve parameters throughout the case.
MatchingCase specialize(const MatchingCase& c, const Bindings& values);

/// Heun derivative equation with gauge and parameter map applied.
LinearODE2 mapped_heun_side(const MatchingCase& c, HeunFamily family);
/// Painleve linear equation with mu replaced by the constraint.
LinearODE2 constrained_painleve_side(const MatchingCase& c, const Conventions& conv = {});

/// `relabel` renames lambda (and mu) on both sides before comparison.
VerificationOutcome verify_matching(const MatchingCase& c, const Conventions& conv = {},
                                    IdentityMode mode = IdentityMode::Exact, const RandomizedConfig& cfg = {},
                                    const Bindings& relabel = {});
/// The same comparison with the case bound to another Heun family.
VerificationOutcome verify_matching_family(const MatchingCase& c, HeunFamily family, const Conventions& conv = {},
                                           IdentityMode mode = IdentityMode::Exact, const RandomizedConfig& cfg = {});

struct RiccatiDefect {
  RationalExpr defect;    ///< consistency defect along the flow
  RationalExpr quotient;  ///< defect / condition
};
RiccatiDefect riccati_defect(const MatchingCase& c, const Conventions& conv = {});

VerificationOutcome verify_riccati(const MatchingCase& c, const Conventions& conv = {},
                                   IdentityMode mode = IdentityMode::Exact, const RandomizedConfig& cfg = {});
VerificationOutcome verify_obstruction(const MatchingCase& c);

}  // namespace heunlab
