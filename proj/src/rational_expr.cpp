#include "heunlab/rational_expr.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "heunlab/error.hpp"

namespace heunlab {

namespace {

MultiPoly quotient(const MultiPoly& a, const MultiPoly& b) {
  auto q = a.divide_exact(b);
  if (!q) throw std::logic_error("inexact division in canonicalization");
  return std::move(*q);
}

/// Numerator and denominator of P(bindings) with a common denominator built
/// from the binding denominators raised to P's partial degrees.
std::pair<MultiPoly, MultiPoly> substitute_poly(const MultiPoly& p, const std::map<Var, RationalExpr>& bindings) {
  struct Bound {
    Var var;
    const RationalExpr* value;
    std::uint32_t degree;
    std::vector<MultiPoly> num_pows;
    std::vector<MultiPoly> den_pows;
  };
  std::vector<Bound> bound;
  MultiPoly den(1);
  for (const auto& [v, value] : bindings) {
    const auto d = p.degree_in(v);
    if (d == 0) continue;
    Bound b{v, &value, d, {MultiPoly(1)}, {MultiPoly(1)}};
    for (std::uint32_t k = 1; k <= d; ++k) {
      b.num_pows.push_back(b.num_pows.back() * value.num());
      b.den_pows.push_back(b.den_pows.back() * value.den());
    }
    den *= b.den_pows[d];
    bound.push_back(std::move(b));
  }
  if (bound.empty()) return {p, MultiPoly(1)};

  std::vector<MultiPoly::Term> acc;
  for (const auto& t : p.terms()) {
    Monomial rest = t.mono;
    MultiPoly prod(t.coeff);
    for (const auto& b : bound) {
      const auto e = t.mono.exponent(b.var);
      rest = rest.without(b.var);
      prod *= b.num_pows[e];
      prod *= b.den_pows[b.degree - e];
    }
    for (const auto& pt : prod.terms()) acc.push_back({pt.mono * rest, pt.coeff});
  }
  return {MultiPoly::from_terms(std::move(acc)), den};
}

std::map<Var, RationalExpr> to_var_bindings(const Bindings& bindings) {
  std::map<Var, RationalExpr> out;
  for (const auto& [name, value] : bindings) out.emplace(Var::of(name), value);
  return out;
}

}  // namespace

RationalExpr::RationalExpr(const MultiPoly& num, const MultiPoly& den) {
  if (den.is_zero()) throw Error(ErrorCode::DivisionByZero, "zero denominator");
  if (num.is_zero()) {
    den_ = MultiPoly(1);
    return;
  }
  if (den.is_constant()) {
    num_ = num.scaled(1 / den.constant_value());
    den_ = MultiPoly(1);
    return;
  }
  const MultiPoly g = gcd(num, den);
  MultiPoly n = g.is_constant() ? num : quotient(num, g);
  MultiPoly d = g.is_constant() ? den : quotient(den, g);
  const Rational lc = d.leading_coefficient();
  num_ = n.scaled(1 / lc);
  den_ = d.scaled(1 / lc);
}

Rational RationalExpr::constant_value() const { return num_.constant_value() / den_.constant_value(); }

std::vector<Var> RationalExpr::variables() const {
  auto a = num_.variables();
  auto b = den_.variables();
  std::vector<Var> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

RationalExpr RationalExpr::operator-() const { return RationalExpr(-num_, den_, Canonical{}); }

RationalExpr RationalExpr::operator+(const RationalExpr& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  if (den_ == o.den_) {
    if (den_.is_constant()) return RationalExpr(num_ + o.num_, den_, Canonical{});
    return {num_ + o.num_, den_};
  }
  const MultiPoly g = gcd(den_, o.den_);
  const MultiPoly a_cof = quotient(den_, g);
  const MultiPoly b_cof = quotient(o.den_, g);
  MultiPoly n = num_ * b_cof + o.num_ * a_cof;
  if (g.is_constant()) {
    // Denominators coprime: the sum can only share factors with them trivially.
    MultiPoly d = den_ * o.den_;
    const Rational lc = d.leading_coefficient();
    return RationalExpr(n.scaled(1 / lc), d.scaled(1 / lc), Canonical{});
  }
  // Only factors of g can cancel.
  const MultiPoly h = gcd(n, g);
  MultiPoly d = a_cof * o.den_;
  if (!h.is_constant()) {
    n = quotient(n, h);
    d = quotient(d, h);
  }
  if (n.is_zero()) return {};
  const Rational lc = d.leading_coefficient();
  return RationalExpr(n.scaled(1 / lc), d.scaled(1 / lc), Canonical{});
}

RationalExpr RationalExpr::operator-(const RationalExpr& o) const { return *this + (-o); }

RationalExpr RationalExpr::operator*(const RationalExpr& o) const {
  if (is_zero() || o.is_zero()) return {};
  const MultiPoly g1 = gcd(num_, o.den_);
  const MultiPoly g2 = gcd(o.num_, den_);
  MultiPoly n = quotient(num_, g1) * quotient(o.num_, g2);
  MultiPoly d = quotient(den_, g2) * quotient(o.den_, g1);
  const Rational lc = d.leading_coefficient();
  return RationalExpr(n.scaled(1 / lc), d.scaled(1 / lc), Canonical{});
}

RationalExpr RationalExpr::operator/(const RationalExpr& o) const {
  if (o.is_zero()) throw Error(ErrorCode::DivisionByZero, "division by the zero expression");
  const Rational lc = o.num_.leading_coefficient();
  return *this * RationalExpr(o.den_.scaled(1 / lc), o.num_.scaled(1 / lc), Canonical{});
}

RationalExpr RationalExpr::pow(int n) const {
  if (n < 0) return RationalExpr(1) / pow(-n);
  return RationalExpr(num_.pow(static_cast<unsigned>(n)), den_.pow(static_cast<unsigned>(n)), Canonical{});
}

std::string RationalExpr::to_string() const {
  if (den_.is_constant()) return num_.to_string();
  std::ostringstream os;
  os << "(" << num_.to_string() << ")/(" << den_.to_string() << ")";
  return os.str();
}

RationalExpr frac(long p, long q) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

RationalExpr differentiate(const RationalExpr& e, std::string_view var) {
  auto v = Var::find(var);
  if (!v) throw Error(ErrorCode::UnknownVariable, "'" + std::string(var) + "' is not a registered indeterminate");
  return differentiate(e, *v);
}

RationalExpr differentiate(const RationalExpr& e, Var var) {
  const MultiPoly dn = e.num().derivative(var);
  if (e.is_polynomial()) return RationalExpr(dn, e.den());
  const MultiPoly dd = e.den().derivative(var);
  if (dd.is_zero()) return RationalExpr(dn, e.den());
  // (n/d)' = (n' d - n d') / d^2; with g = gcd(d, d') the common factor is d*(d/g).
  const MultiPoly g = gcd(e.den(), dd);
  const MultiPoly d_over_g = quotient(e.den(), g);
  const MultiPoly dd_over_g = quotient(dd, g);
  return {dn * d_over_g - e.num() * dd_over_g, e.den() * d_over_g};
}

RationalExpr substitute(const RationalExpr& e, const Bindings& bindings) {
  return substitute(e, to_var_bindings(bindings));
}

RationalExpr substitute(const RationalExpr& e, const std::map<Var, RationalExpr>& bindings) {
  auto [nn, nd] = substitute_poly(e.num(), bindings);
  auto [dn, dd] = substitute_poly(e.den(), bindings);
  MultiPoly den = nd * dn;
  if (den.is_zero()) {
    throw Error(ErrorCode::DegenerateSubstitution, "denominator " + e.den().to_string() + " vanishes identically");
  }
  return {nn * dd, den};
}

Rational eval_rational(const RationalExpr& e, const std::map<std::string, Rational>& point) {
  Point p;
  for (const auto& [name, value] : point) {
    if (auto v = Var::find(name)) p.emplace(*v, value);
  }
  return eval_rational(e, p);
}

Rational eval_rational(const RationalExpr& e, const Point& point) {
  const Rational d = e.den().evaluate(point);
  if (d == 0) throw Error(ErrorCode::PoleAtPoint, "denominator vanishes at " + point_to_string(point));
  return e.num().evaluate(point) / d;
}

std::string point_to_string(const Point& p) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (const auto& [v, value] : p) {
    if (!first) os << ", ";
    os << v.name() << "=" << value.get_str();
    first = false;
  }
  os << "}";
  return os.str();
}

namespace {

/// Samples points until one separates a and b or `successes` agreeing samples
/// are seen. Returns nullopt on agreement; throws SamplingExhausted.
std::optional<IdentityVerdict> sample_difference(const RationalExpr& a, const RationalExpr& b,
                                                 const std::vector<Var>& vars, std::mt19937_64& rng, long box,
                                                 int successes, int budget) {
  std::uniform_int_distribution<long> dist(-box, box);
  int agreed = 0;
  for (int attempt = 0; attempt < budget; ++attempt) {
    Point p;
    for (Var v : vars) p.emplace(v, Rational(dist(rng)));
    const Rational da = a.den().evaluate(p);
    const Rational db = b.den().evaluate(p);
    if (da == 0 || db == 0) continue;
    const Rational va = a.num().evaluate(p) / da;
    const Rational vb = b.num().evaluate(p) / db;
    if (va != vb) return IdentityVerdict{false, p, va, vb};
    if (++agreed == successes) return std::nullopt;
  }
  throw Error(ErrorCode::SamplingExhausted, "every sample point hit a pole");
}

}  // namespace

IdentityVerdict identity_check(const RationalExpr& a, const RationalExpr& b, IdentityMode mode,
                               const RandomizedConfig& cfg) {
  auto va = a.variables();
  auto vb = b.variables();
  std::vector<Var> vars;
  std::set_union(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(vars));
  std::mt19937_64 rng(cfg.seed);

  if (mode == IdentityMode::Randomized) {
    auto diff = sample_difference(a, b, vars, rng, cfg.box, cfg.trials, cfg.trials * cfg.retry_factor);
    if (diff) return *diff;
    return {true, std::nullopt, std::nullopt, std::nullopt};
  }

  if (a == b) return {true, std::nullopt, std::nullopt, std::nullopt};
  // Distinct canonical forms: look for a small, readable witness.
  for (long box : {10L, 1000L, cfg.box}) {
    try {
      auto diff = sample_difference(a, b, vars, rng, box, 64, 256);
      if (diff) return *diff;
    } catch (const Error&) {
      // all poles at this box size; widen it
    }
  }
  return {false, std::nullopt, std::nullopt, std::nullopt};
}

bool identity_test(const RationalExpr& a, const RationalExpr& b, IdentityMode mode, const RandomizedConfig& cfg) {
  return identity_check(a, b, mode, cfg).equal;
}

}  // namespace heunlab
