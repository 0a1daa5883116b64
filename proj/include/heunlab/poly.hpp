#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "heunlab/symbol.hpp"

namespace heunlab {

using Rational = mpq_class;
using Point = std::map<Var, Rational>;

/// Parses "p", "-p" or "p/q" into a canonical rational.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& r);

struct VarPower {
  std::uint32_t var;
  std::uint32_t exp;
  friend bool operator==(const VarPower&, const VarPower&) = default;
};

/// Power product of indeterminates; sparse, sorted by variable id, no zero exponents.
class Monomial {
 public:
  Monomial() = default;
  static Monomial of(Var v, std::uint32_t exp = 1);

  const std::vector<VarPower>& powers() const { return powers_; }
  std::uint32_t degree() const { return degree_; }
  std::uint32_t exponent(Var v) const;
  bool is_one() const { return powers_.empty(); }

  Monomial operator*(const Monomial& other) const;
  /// nullopt when `other` does not divide *this.
  std::optional<Monomial> divide(const Monomial& other) const;
  /// Componentwise minimum.
  Monomial gcd(const Monomial& other) const;
  /// Drops the given variable.
  Monomial without(Var v) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;

 private:
  explicit Monomial(std::vector<VarPower> powers);
  std::vector<VarPower> powers_;
  std::uint32_t degree_ = 0;
};

/// Graded lexicographic order; returns <0, 0, >0.
int compare_grlex(const Monomial& a, const Monomial& b);

struct MonomialGreater {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare_grlex(a, b) > 0; }
};

/// Sparse multivariate polynomial over Q with terms sorted by descending grlex order.
class MultiPoly {
 public:
  struct Term {
    Monomial mono;
    Rational coeff;
  };

  MultiPoly() = default;
  MultiPoly(const Rational& c);  // NOLINT(google-explicit-constructor)
  MultiPoly(long c) : MultiPoly(Rational(c)) {}  // NOLINT(google-explicit-constructor)
  static MultiPoly variable(Var v);
  static MultiPoly term(Monomial m, Rational c);
  /// Accepts terms in any order; merges duplicates and drops zeros.
  static MultiPoly from_terms(std::vector<Term> terms);

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.is_one()); }
  Rational constant_value() const;  // requires is_constant()
  const Term& leading_term() const { return terms_.front(); }
  const Rational& leading_coefficient() const { return terms_.front().coeff; }

  std::uint32_t total_degree() const;
  std::uint32_t degree_in(Var v) const;
  bool depends_on(Var v) const { return degree_in(v) > 0; }
  std::vector<Var> variables() const;

  /// Coefficients of v^0, v^1, ..., v^deg.
  std::vector<MultiPoly> coefficients_in(Var v) const;
  MultiPoly coefficient_of(Var v, std::uint32_t k) const;
  /// Groups terms by their power product in `vars`.
  std::vector<MultiPoly> coefficients_wrt(const std::vector<Var>& vars) const;

  MultiPoly operator-() const;
  MultiPoly operator+(const MultiPoly& o) const;
  MultiPoly operator-(const MultiPoly& o) const;
  MultiPoly operator*(const MultiPoly& o) const;
  MultiPoly& operator+=(const MultiPoly& o) { return *this = *this + o; }
  MultiPoly& operator-=(const MultiPoly& o) { return *this = *this - o; }
  MultiPoly& operator*=(const MultiPoly& o) { return *this = *this * o; }
  MultiPoly scaled(const Rational& c) const;
  MultiPoly times_monomial(const Monomial& m) const;
  MultiPoly pow(unsigned n) const;

  MultiPoly derivative(Var v) const;
  /// Throws UnknownVariable when a variable of the polynomial has no value.
  Rational evaluate(const Point& point) const;
  /// Substitutes values for the bound variables only.
  MultiPoly partial_evaluate(const Point& point) const;
  /// Simultaneous substitution of polynomials for variables.
  MultiPoly compose(const std::map<Var, MultiPoly>& values) const;

  /// Exact quotient, or nullopt when `d` does not divide *this.
  std::optional<MultiPoly> divide_exact(const MultiPoly& d) const;

  /// Scaled so the leading coefficient is 1 (zero stays zero).
  MultiPoly monic() const;
  /// Scaled to integer coefficients with gcd 1 and positive leading coefficient.
  MultiPoly integer_primitive() const;

  std::string to_string() const;

  friend bool operator==(const MultiPoly& a, const MultiPoly& b);

 private:
  std::vector<Term> terms_;
};

inline MultiPoly operator*(const Rational& c, const MultiPoly& p) { return p.scaled(c); }
inline MultiPoly operator*(long c, const MultiPoly& p) { return p.scaled(Rational(c)); }

/// Monic greatest common divisor over Q; gcd(0, 0) = 0.
MultiPoly gcd(const MultiPoly& a, const MultiPoly& b);

/// Pseudo-remainder of a by b with respect to v.
MultiPoly pseudo_remainder(const MultiPoly& a, const MultiPoly& b, Var v);

/// Square-free factors f_1, f_2, ... with p = c * prod f_i^i with respect to v
/// (factors free of v are folded into the content and dropped).
std::vector<MultiPoly> squarefree_factors(const MultiPoly& p, Var v);

/// Exact square root, or nullopt when p is not a perfect square over Q.
std::optional<MultiPoly> try_sqrt(const MultiPoly& p);

}  // namespace heunlab
