#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "heunlab/ode.hpp"

namespace heunlab {

enum class HeunFamily { General, Confluent, DoubleConfluent, BiConfluent, TriConfluent };

std::string_view to_string(HeunFamily f);
/// Accepts "general", "confluent", "double-confluent", "bi-confluent", "tri-confluent".
std::optional<HeunFamily> parse_heun_family(std::string_view name);
constexpr HeunFamily kHeunFamilies[] = {HeunFamily::General, HeunFamily::Confluent, HeunFamily::DoubleConfluent,
                                        HeunFamily::BiConfluent, HeunFamily::TriConfluent};

/// Parameter names used by a family: beta and t only for General.
std::vector<std::string> heun_parameter_names(HeunFamily f);

struct HeunParams {
  RationalExpr gamma = RationalExpr::var("gamma");
  RationalExpr delta = RationalExpr::var("delta");
  RationalExpr epsilon = RationalExpr::var("epsilon");
  RationalExpr alpha = RationalExpr::var("alpha");
  RationalExpr beta = RationalExpr::var("beta");
  RationalExpr q = RationalExpr::var("q");
  RationalExpr t = RationalExpr::var("t");

  /// Overrides the named fields; unknown names throw InvalidSpec.
  void set(const std::string& name, RationalExpr value);
  const RationalExpr& get(const std::string& name) const;
  Bindings as_bindings(HeunFamily f) const;
};

struct HeunSpec {
  HeunFamily family = HeunFamily::General;
  HeunParams params;
  bool enforce_fuchsian = true;

  /// All parameters symbolic; for General, epsilon is tied by the Fuchsian relation.
  static HeunSpec symbolic(HeunFamily f);
};

/// epsilon = 1 + alpha + beta - gamma - delta.
RationalExpr fuchsian_epsilon(const RationalExpr& alpha, const RationalExpr& beta, const RationalExpr& gamma,
                              const RationalExpr& delta);
bool fuchsian_holds(const HeunParams& p);

/// Throws FuchsianViolation (General, enforcement on) and SingularConfluence
/// (General with t = 0 or t = 1).
LinearODE2 build_heun(const HeunSpec& spec);

/// Closed-form equation for v = u', written out per family with f, g, h, k, p.
/// Throws DegenerateDerivativeForm when the extra-singularity factor
/// (alpha beta z - q, or alpha z - q) vanishes identically.
LinearODE2 build_heun_derivative(const HeunSpec& spec);

enum class DegenerationCase { QZero, QAlphaBeta, QAlphaBetaT, AlphaBetaZero };

std::string_view to_string(DegenerationCase c);
constexpr DegenerationCase kDegenerationCases[] = {DegenerationCase::QZero, DegenerationCase::QAlphaBeta,
                                                   DegenerationCase::QAlphaBetaT, DegenerationCase::AlphaBetaZero};
/// q = 0 with q -> 0, q = alpha beta with q -> alpha*beta, and so on; alpha beta = 0 sets alpha = 0.
HeunSpec impose_degeneration(HeunSpec spec, DegenerationCase c);

struct DegenerationResult {
  /// Derivative equation after cancelling the (alpha beta z - q) factor.
  LinearODE2 cancelled;
  /// Gauge that removes the exponent-1 root at the merged point (identity for alpha beta = 0).
  GaugeSpec gauge;
  /// cancelled after the gauge; a general Heun equation when matched.
  LinearODE2 normalized;
  bool matched = false;
  /// Heun parameters read off `normalized`; valid only when matched.
  HeunParams shifted;
};

/// Throws CaseMismatch when the spec does not satisfy the case condition.
DegenerationResult degeneration_case(const HeunSpec& spec, DegenerationCase c);

/// Reads gamma, delta, epsilon, alpha, beta, q off an equation of the general
/// Heun form with singular points 0, 1, t. Requires alpha, beta to be rational
/// in the parameters (the discriminant must be a perfect square).
std::optional<HeunParams> match_general_heun(const LinearODE2& ode, const RationalExpr& t);

}  // namespace heunlab
