#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "heunlab/poly.hpp"

namespace heunlab {

/// Quotient of polynomials kept in canonical form: gcd(num, den) = 1 and den
/// has leading coefficient 1 under the grlex order. Structural equality is
/// therefore mathematical equality.
class RationalExpr {
 public:
  RationalExpr() : den_(1) {}
  RationalExpr(const Rational& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RationalExpr(long c) : RationalExpr(Rational(c)) {}    // NOLINT(google-explicit-constructor)
  RationalExpr(const MultiPoly& p) : num_(p), den_(1) {}  // NOLINT(google-explicit-constructor)
  /// Canonicalizes num/den; throws DivisionByZero when den is zero.
  RationalExpr(const MultiPoly& num, const MultiPoly& den);

  static RationalExpr var(Var v) { return MultiPoly::variable(v); }
  static RationalExpr var(std::string_view name) { return var(Var::of(name)); }

  const MultiPoly& num() const { return num_; }
  const MultiPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }
  Rational constant_value() const;  // requires is_constant()
  std::vector<Var> variables() const;
  bool depends_on(Var v) const { return num_.depends_on(v) || den_.depends_on(v); }

  RationalExpr operator-() const;
  RationalExpr operator+(const RationalExpr& o) const;
  RationalExpr operator-(const RationalExpr& o) const;
  RationalExpr operator*(const RationalExpr& o) const;
  RationalExpr operator/(const RationalExpr& o) const;
  RationalExpr& operator+=(const RationalExpr& o) { return *this = *this + o; }
  RationalExpr& operator-=(const RationalExpr& o) { return *this = *this - o; }
  RationalExpr& operator*=(const RationalExpr& o) { return *this = *this * o; }
  RationalExpr& operator/=(const RationalExpr& o) { return *this = *this / o; }
  RationalExpr pow(int n) const;

  std::string to_string() const;

  friend bool operator==(const RationalExpr& a, const RationalExpr& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  struct Canonical {};
  RationalExpr(MultiPoly num, MultiPoly den, Canonical) : num_(std::move(num)), den_(std::move(den)) {}

  MultiPoly num_;
  MultiPoly den_;
};

inline RationalExpr operator+(long a, const RationalExpr& b) { return RationalExpr(a) + b; }
inline RationalExpr operator-(long a, const RationalExpr& b) { return RationalExpr(a) - b; }
inline RationalExpr operator*(long a, const RationalExpr& b) { return RationalExpr(a) * b; }
inline RationalExpr operator/(long a, const RationalExpr& b) { return RationalExpr(a) / b; }
inline RationalExpr operator/(const RationalExpr& a, long b) { return a / RationalExpr(b); }

/// Exact rational constant p/q.
RationalExpr frac(long p, long q);

using Bindings = std::map<std::string, RationalExpr>;

/// d/d(var). Throws UnknownVariable for a name that was never registered.
RationalExpr differentiate(const RationalExpr& e, std::string_view var);
RationalExpr differentiate(const RationalExpr& e, Var var);

/// Simultaneous substitution. Throws DegenerateSubstitution when the result's
/// denominator vanishes identically.
RationalExpr substitute(const RationalExpr& e, const Bindings& bindings);
RationalExpr substitute(const RationalExpr& e, const std::map<Var, RationalExpr>& bindings);

/// Exact value at a rational point; throws PoleAtPoint when the denominator vanishes.
Rational eval_rational(const RationalExpr& e, const std::map<std::string, Rational>& point);
Rational eval_rational(const RationalExpr& e, const Point& point);

// ------------------------------------------------------------ identity tests

enum class IdentityMode { Exact, Randomized };

struct RandomizedConfig {
  std::uint64_t seed = 0x5eed;
  int trials = 20;
  long box = 1'000'000;  ///< samples are integers in [-box, box]
  int retry_factor = 10;
};

struct IdentityVerdict {
  bool equal = false;
  /// A point where both sides are finite and differ, when one was found.
  std::optional<Point> witness;
  std::optional<Rational> lhs_value;
  std::optional<Rational> rhs_value;
};

/// Exact mode compares canonical forms and, on failure, searches for a witness
/// point. Randomized mode only reports inequality on a witnessed difference;
/// throws SamplingExhausted when every sample hits a pole.
IdentityVerdict identity_check(const RationalExpr& a, const RationalExpr& b, IdentityMode mode,
                               const RandomizedConfig& cfg = {});

bool identity_test(const RationalExpr& a, const RationalExpr& b, IdentityMode mode = IdentityMode::Exact,
                   const RandomizedConfig& cfg = {});

std::string point_to_string(const Point& p);

}  // namespace heunlab
