#pragma once

#include <string>
#include <vector>

#include "heunlab/rational_expr.hpp"

namespace heunlab {

/// v'' + p1 v' + p2 v = 0 with rational coefficients in `var`.
struct LinearODE2 {
  RationalExpr p1;
  RationalExpr p2;
  Var var = sym::z();

  std::string to_string() const;
};

/// m(z) = (a z + b) / (c z + d) with coefficients constant in z.
class Mobius {
 public:
  Mobius(RationalExpr a, RationalExpr b, RationalExpr c, RationalExpr d, Var var = sym::z());
  static Mobius identity(Var var = sym::z());

  const RationalExpr& a() const { return a_; }
  const RationalExpr& b() const { return b_; }
  const RationalExpr& c() const { return c_; }
  const RationalExpr& d() const { return d_; }
  Var var() const { return var_; }

  RationalExpr determinant() const { return a_ * d_ - b_ * c_; }
  /// m as an expression in var.
  RationalExpr as_expr() const;
  /// m applied to an arbitrary expression: (a e + b) / (c e + d).
  RationalExpr apply(const RationalExpr& e) const;
  /// (this o inner)(z) = this(inner(z)).
  Mobius after(const Mobius& inner) const;
  Mobius inverse() const;

 private:
  RationalExpr a_, b_, c_, d_;
  Var var_;
};

/// base(z)^exponent; only the logarithmic derivative exponent*base'/base is used.
struct PowerFactor {
  RationalExpr base;
  RationalExpr exponent;
};

/// w(z) = prod base_i(z)^exponent_i * v(m(z)).
struct GaugeSpec {
  Mobius mobius = Mobius::identity();
  std::vector<PowerFactor> factors;

  static GaugeSpec single(Mobius m, RationalExpr base, RationalExpr exponent);
  /// Sum of exponent_i * base_i' / base_i.
  RationalExpr log_derivative() const;
  /// Applying *this and then `next` equals applying the returned gauge.
  GaugeSpec then(const GaugeSpec& next) const;
  GaugeSpec inverse() const;
};

/// ODE for v = u' when u solves `ode`. Obtained by solving the equation for
/// u = -(v' + p1 v)/p2 and differentiating once more:
///   p1~ = p1 - p2'/p2,   p2~ = p2 + p1' - p1 p2'/p2.
/// Throws NoDerivativeEquation when p2 is identically zero.
LinearODE2 derivative_equation(const LinearODE2& ode);

/// ODE satisfied by w(z) = Phi(z) v(m(z)) when v solves `ode`. With
/// y = v o m, q1 = m' p1(m) - m''/m', q2 = m'^2 p2(m), and L = Phi'/Phi:
///   w'' + (q1 - 2L) w' + (q2 - q1 L + L^2 - L') w = 0.
/// Throws DegenerateMobius when ad - bc vanishes identically.
LinearODE2 gauge_mobius_transform(const LinearODE2& ode, const GaugeSpec& g);

LinearODE2 substitute(const LinearODE2& ode, const Bindings& bindings);

struct OdeComparison {
  bool equal = false;
  IdentityVerdict p1;
  IdentityVerdict p2;
  RationalExpr p1_diff;  ///< a.p1 - b.p1 (exact mode only)
  RationalExpr p2_diff;
};

OdeComparison ode_compare(const LinearODE2& a, const LinearODE2& b, IdentityMode mode = IdentityMode::Exact,
                          const RandomizedConfig& cfg = {});
bool ode_equal(const LinearODE2& a, const LinearODE2& b, IdentityMode mode = IdentityMode::Exact,
               const RandomizedConfig& cfg = {});

// ------------------------------------------------------------ singularities

enum class SingularityClass { RegularSingular, IrregularSingular };

enum class LocusKind {
  Exact,       ///< location is a rational expression (numeric or symbolic)
  Quadratic,   ///< conjugate pair: the two roots of an irreducible quadratic factor
  Unresolved,  ///< irreducible factor of higher degree, or not split symbolically
  Infinity,
};

struct SingularPoint {
  LocusKind kind = LocusKind::Exact;
  RationalExpr location;  ///< Exact kind only
  MultiPoly factor;       ///< denominator factor in var (finite kinds)
  SingularityClass classification = SingularityClass::RegularSingular;
  unsigned p1_order = 0;
  unsigned p2_order = 0;

  std::string describe() const;
};

/// Distinct poles of p1, p2 plus infinity, classified by the pole-order test
/// (p1 order <= 1 and p2 order <= 2 is regular). The trivial equation
/// p1 = p2 = 0 has none.
std::vector<SingularPoint> singular_points(const LinearODE2& ode);

/// Rational roots of a univariate polynomial with rational coefficients.
std::vector<Rational> rational_roots(const MultiPoly& p, Var v);

}  // namespace heunlab
