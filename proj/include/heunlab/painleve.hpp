#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "heunlab/ode.hpp"
#include "heunlab/verification.hpp"

namespace heunlab {

enum class PainleveKind { P2, P3Prime, P4, P5, P6 };

std::string_view to_string(PainleveKind k);
/// Accepts "P2", "P3prime" (or "P3'"), "P4", "P5", "P6", case-insensitively.
std::optional<PainleveKind> parse_painleve_kind(std::string_view name);
constexpr PainleveKind kPainleveKinds[] = {PainleveKind::P2, PainleveKind::P3Prime, PainleveKind::P4,
                                           PainleveKind::P5, PainleveKind::P6};

/// Readings of two printed formulas that do not hold as printed.
struct Conventions {
  /// H_II with (lambda^2 + 1/t) mu instead of (lambda^2 + t/2) mu.
  bool paper_literal_h2 = false;
  /// delta5 = eta^2/2 instead of -eta^2/2; also the literal P5 mu-constraint and Riccati display.
  bool paper_literal_p5 = false;
};

/// Parameter names of a kind, e.g. P6: kappa0, kappa1, theta, kappa_inf.
/// P5 and P6 additionally carry "kappa" in the linear equation and Hamiltonian.
std::vector<std::string> painleve_parameter_names(PainleveKind k);

struct PainleveLinearSpec {
  PainleveKind kind = PainleveKind::P6;
  /// Overrides for parameters and for lambda, mu, t; anything absent stays symbolic.
  Bindings values;
};

/// p1, p2 with the Hamiltonian expanded in place. Throws InvalidSpec when t
/// or lambda sit on the kind's fixed singular locus.
LinearODE2 build_painleve_linear(const PainleveLinearSpec& spec, const Conventions& conv = {});

struct HamiltonianSystem {
  RationalExpr H;
  RationalExpr dlambda;  ///< dH/dmu
  RationalExpr dmu;      ///< -dH/dlambda
};

/// H with kappa (P5, P6) left as a free symbol.
HamiltonianSystem hamiltonian(PainleveKind k, const Conventions& conv = {});
/// Same, with kappa replaced by its bridge value in the other parameters.
HamiltonianSystem hamiltonian_bridged(PainleveKind k, const Conventions& conv = {});

/// Derived constants: alpha6.., alpha5.., alpha4, beta4, alpha3.., and kappa.
using PainleveBridge = std::map<std::string, RationalExpr>;
PainleveBridge bridge(PainleveKind k, const Conventions& conv = {});

/// Right-hand side of lambda'' in lambda, lambda_p (= lambda') and t, with
/// the bridge constants expressed through the kind's parameters.
RationalExpr painleve_rhs(PainleveKind k, const Conventions& conv = {});

/// P3' right-hand side with alpha3, beta3, gamma3, delta3 as free symbols.
RationalExpr p3prime_rhs_generic();
/// Standard P3 right-hand side with alpha3, beta3, gamma3, delta3 free.
RationalExpr p3_standard_rhs();

/// lambda'' along the Hamiltonian flow equals painleve_rhs at lambda' = dH/dmu.
/// The P2 check is a predicted failure under paper_literal_h2, the P5 one under paper_literal_p5.
VerificationOutcome verify_elimination(PainleveKind k, const Conventions& conv = {},
                                       IdentityMode mode = IdentityMode::Exact, const RandomizedConfig& cfg = {});

enum class P3Variant {
  Direct,           ///< P3 under lambda(t) -> lambda(t^2)/t gives P3'
  PerturbedDelta3,  ///< same with delta3 -> delta3 + 1 on the P3' side (predicted failure)
  Inverse,          ///< P3' under Lambda(tau) = s lambda(s), tau = s^2, gives P3 back
};

VerificationOutcome verify_p3_substitution(P3Variant variant = P3Variant::Direct,
                                           IdentityMode mode = IdentityMode::Exact,
                                           const RandomizedConfig& cfg = {});

}  // namespace heunlab
