#include "heunlab/poly.hpp"

#include <algorithm>
#include <sstream>

#include "heunlab/error.hpp"

namespace heunlab {

Rational parse_rational(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (c != ' ' && c != '\t') s.push_back(c);
  }
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty rational literal");
  if (s.front() == '+') s.erase(s.begin());
  auto valid = [](const std::string& part, bool allow_sign) {
    if (part.empty()) return false;
    std::size_t i = (allow_sign && part[0] == '-') ? 1 : 0;
    if (i == part.size()) return false;
    return std::all_of(part.begin() + static_cast<long>(i), part.end(), [](char c) { return c >= '0' && c <= '9'; });
  };
  const auto slash = s.find('/');
  const std::string num = s.substr(0, slash);
  const std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid(num, true) || !valid(den, false)) throw Error(ErrorCode::ParseError, "not an exact rational: '" + text + "'");
  Rational r;
  r.get_num() = mpz_class(num);
  r.get_den() = mpz_class(den);
  if (r.get_den() == 0) throw Error(ErrorCode::DivisionByZero, "zero denominator in '" + text + "'");
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(std::vector<VarPower> powers) : powers_(std::move(powers)) {
  for (const auto& p : powers_) degree_ += p.exp;
}

Monomial Monomial::of(Var v, std::uint32_t exp) {
  if (exp == 0) return {};
  return Monomial({{v.id(), exp}});
}

std::uint32_t Monomial::exponent(Var v) const {
  for (const auto& p : powers_) {
    if (p.var == v.id()) return p.exp;
    if (p.var > v.id()) break;
  }
  return 0;
}

Monomial Monomial::operator*(const Monomial& other) const {
  std::vector<VarPower> out;
  out.reserve(powers_.size() + other.powers_.size());
  auto a = powers_.begin();
  auto b = other.powers_.begin();
  while (a != powers_.end() || b != other.powers_.end()) {
    if (b == other.powers_.end() || (a != powers_.end() && a->var < b->var)) {
      out.push_back(*a++);
    } else if (a == powers_.end() || b->var < a->var) {
      out.push_back(*b++);
    } else {
      out.push_back({a->var, a->exp + b->exp});
      ++a;
      ++b;
    }
  }
  return Monomial(std::move(out));
}

std::optional<Monomial> Monomial::divide(const Monomial& other) const {
  std::vector<VarPower> out;
  auto a = powers_.begin();
  for (const auto& d : other.powers_) {
    while (a != powers_.end() && a->var < d.var) out.push_back(*a++);
    if (a == powers_.end() || a->var != d.var || a->exp < d.exp) return std::nullopt;
    if (a->exp > d.exp) out.push_back({a->var, a->exp - d.exp});
    ++a;
  }
  while (a != powers_.end()) out.push_back(*a++);
  return Monomial(std::move(out));
}

Monomial Monomial::gcd(const Monomial& other) const {
  std::vector<VarPower> out;
  auto b = other.powers_.begin();
  for (const auto& a : powers_) {
    while (b != other.powers_.end() && b->var < a.var) ++b;
    if (b == other.powers_.end()) break;
    if (b->var == a.var) out.push_back({a.var, std::min(a.exp, b->exp)});
  }
  return Monomial(std::move(out));
}

Monomial Monomial::without(Var v) const {
  std::vector<VarPower> out;
  out.reserve(powers_.size());
  for (const auto& p : powers_) {
    if (p.var != v.id()) out.push_back(p);
  }
  return Monomial(std::move(out));
}

int compare_grlex(const Monomial& a, const Monomial& b) {
  if (a.degree() != b.degree()) return a.degree() < b.degree() ? -1 : 1;
  const auto& pa = a.powers();
  const auto& pb = b.powers();
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < pa.size() && j < pb.size()) {
    if (pa[i].var == pb[j].var) {
      if (pa[i].exp != pb[j].exp) return pa[i].exp > pb[j].exp ? 1 : -1;
      ++i;
      ++j;
    } else {
      return pa[i].var < pb[j].var ? 1 : -1;
    }
  }
  if (i < pa.size()) return 1;
  if (j < pb.size()) return -1;
  return 0;
}

// ---------------------------------------------------------------- MultiPoly

MultiPoly::MultiPoly(const Rational& c) {
  if (c != 0) terms_.push_back({Monomial(), c});
}

MultiPoly MultiPoly::variable(Var v) { return term(Monomial::of(v), 1); }

MultiPoly MultiPoly::term(Monomial m, Rational c) {
  MultiPoly p;
  if (c != 0) p.terms_.push_back({std::move(m), std::move(c)});
  return p;
}

MultiPoly MultiPoly::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return compare_grlex(a.mono, b.mono) > 0; });
  MultiPoly p;
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff += t.coeff;
    } else {
      if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
  return p;
}

Rational MultiPoly::constant_value() const {
  if (terms_.empty()) return 0;
  return terms_.front().coeff;
}

std::uint32_t MultiPoly::total_degree() const {
  return terms_.empty() ? 0 : terms_.front().mono.degree();
}

std::uint32_t MultiPoly::degree_in(Var v) const {
  std::uint32_t d = 0;
  for (const auto& t : terms_) d = std::max(d, t.mono.exponent(v));
  return d;
}

std::vector<Var> MultiPoly::variables() const {
  std::vector<std::uint32_t> ids;
  for (const auto& t : terms_) {
    for (const auto& p : t.mono.powers()) ids.push_back(p.var);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::vector<Var> out;
  for (auto id : ids) out.push_back(Var::from_id(id));
  return out;
}

std::vector<MultiPoly> MultiPoly::coefficients_in(Var v) const {
  std::vector<std::vector<Term>> buckets(degree_in(v) + 1);
  for (const auto& t : terms_) buckets[t.mono.exponent(v)].push_back({t.mono.without(v), t.coeff});
  std::vector<MultiPoly> out;
  out.reserve(buckets.size());
  for (auto& b : buckets) out.push_back(from_terms(std::move(b)));
  return out;
}

MultiPoly MultiPoly::coefficient_of(Var v, std::uint32_t k) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    if (t.mono.exponent(v) == k) out.push_back({t.mono.without(v), t.coeff});
  }
  return from_terms(std::move(out));
}

std::vector<MultiPoly> MultiPoly::coefficients_wrt(const std::vector<Var>& vars) const {
  std::map<Monomial, std::vector<Term>, MonomialGreater> groups;
  for (const auto& t : terms_) {
    Monomial key;
    Monomial rest = t.mono;
    for (Var v : vars) {
      if (auto e = rest.exponent(v); e > 0) {
        key = key * Monomial::of(v, e);
        rest = rest.without(v);
      }
    }
    groups[key].push_back({rest, t.coeff});
  }
  std::vector<MultiPoly> out;
  out.reserve(groups.size());
  for (auto& [_, ts] : groups) out.push_back(from_terms(std::move(ts)));
  return out;
}

MultiPoly MultiPoly::operator-() const {
  MultiPoly p = *this;
  for (auto& t : p.terms_) t.coeff = -t.coeff;
  return p;
}

MultiPoly MultiPoly::operator+(const MultiPoly& o) const {
  MultiPoly out;
  out.terms_.reserve(terms_.size() + o.terms_.size());
  auto a = terms_.begin();
  auto b = o.terms_.begin();
  while (a != terms_.end() && b != o.terms_.end()) {
    const int c = compare_grlex(a->mono, b->mono);
    if (c > 0) {
      out.terms_.push_back(*a++);
    } else if (c < 0) {
      out.terms_.push_back(*b++);
    } else {
      Rational s = a->coeff + b->coeff;
      if (s != 0) out.terms_.push_back({a->mono, std::move(s)});
      ++a;
      ++b;
    }
  }
  out.terms_.insert(out.terms_.end(), a, terms_.end());
  out.terms_.insert(out.terms_.end(), b, o.terms_.end());
  return out;
}

MultiPoly MultiPoly::operator-(const MultiPoly& o) const { return *this + (-o); }

MultiPoly MultiPoly::operator*(const MultiPoly& o) const {
  if (is_zero() || o.is_zero()) return {};
  if (o.is_constant()) return scaled(o.constant_value());
  if (is_constant()) return o.scaled(constant_value());
  std::vector<Term> prods;
  prods.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) prods.push_back({a.mono * b.mono, a.coeff * b.coeff});
  }
  return from_terms(std::move(prods));
}

MultiPoly MultiPoly::scaled(const Rational& c) const {
  if (c == 0) return {};
  MultiPoly p = *this;
  for (auto& t : p.terms_) t.coeff *= c;
  return p;
}

MultiPoly MultiPoly::times_monomial(const Monomial& m) const {
  MultiPoly p = *this;
  for (auto& t : p.terms_) t.mono = t.mono * m;
  return p;
}

MultiPoly MultiPoly::pow(unsigned n) const {
  MultiPoly result(1);
  MultiPoly base = *this;
  while (n > 0) {
    if (n & 1U) result *= base;
    n >>= 1U;
    if (n > 0) base *= base;
  }
  return result;
}

MultiPoly MultiPoly::derivative(Var v) const {
  std::vector<Term> out;
  for (const auto& t : terms_) {
    const auto e = t.mono.exponent(v);
    if (e == 0) continue;
    out.push_back({t.mono.without(v) * Monomial::of(v, e - 1), t.coeff * e});
  }
  return from_terms(std::move(out));
}

namespace {

Rational rational_pow(const Rational& base, std::uint32_t e) {
  Rational r;
  mpz_pow_ui(r.get_num_mpz_t(), base.get_num_mpz_t(), e);
  mpz_pow_ui(r.get_den_mpz_t(), base.get_den_mpz_t(), e);
  return r;
}

}  // namespace

Rational MultiPoly::evaluate(const Point& point) const {
  Rational sum = 0;
  for (const auto& t : terms_) {
    Rational v = t.coeff;
    for (const auto& p : t.mono.powers()) {
      auto it = std::find_if(point.begin(), point.end(), [&](const auto& kv) { return kv.first.id() == p.var; });
      if (it == point.end()) throw Error(ErrorCode::UnknownVariable, "no value for '" + Var::from_id(p.var).name() + "'");
      v *= rational_pow(it->second, p.exp);
    }
    sum += v;
  }
  return sum;
}

MultiPoly MultiPoly::partial_evaluate(const Point& point) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) {
    Rational c = t.coeff;
    std::vector<VarPower> rest;
    for (const auto& p : t.mono.powers()) {
      auto it = std::find_if(point.begin(), point.end(), [&](const auto& kv) { return kv.first.id() == p.var; });
      if (it == point.end()) {
        rest.push_back(p);
      } else {
        c *= rational_pow(it->second, p.exp);
      }
    }
    Monomial m;
    for (const auto& p : rest) m = m * Monomial::of(Var::from_id(p.var), p.exp);
    out.push_back({std::move(m), std::move(c)});
  }
  return from_terms(std::move(out));
}

MultiPoly MultiPoly::compose(const std::map<Var, MultiPoly>& values) const {
  std::map<std::pair<std::uint32_t, std::uint32_t>, MultiPoly> power_cache;
  auto power = [&](Var v, const MultiPoly& base, std::uint32_t e) -> const MultiPoly& {
    auto key = std::make_pair(v.id(), e);
    auto it = power_cache.find(key);
    if (it != power_cache.end()) return it->second;
    return power_cache.emplace(key, base.pow(e)).first->second;
  };
  std::vector<Term> acc;
  for (const auto& t : terms_) {
    MultiPoly prod(t.coeff);
    Monomial rest;
    for (const auto& p : t.mono.powers()) {
      auto it = std::find_if(values.begin(), values.end(), [&](const auto& kv) { return kv.first.id() == p.var; });
      if (it == values.end()) {
        rest = rest * Monomial::of(Var::from_id(p.var), p.exp);
      } else {
        prod *= power(it->first, it->second, p.exp);
      }
    }
    for (const auto& pt : prod.terms()) acc.push_back({pt.mono * rest, pt.coeff});
  }
  return from_terms(std::move(acc));
}

std::optional<MultiPoly> MultiPoly::divide_exact(const MultiPoly& d) const {
  if (d.is_zero()) throw Error(ErrorCode::DivisionByZero, "polynomial division by zero");
  if (is_zero()) return MultiPoly();
  if (d.is_constant()) return scaled(1 / d.constant_value());
  if (total_degree() < d.total_degree()) return std::nullopt;
  for (Var v : d.variables()) {
    if (degree_in(v) < d.degree_in(v)) return std::nullopt;
  }
  std::vector<Term> quotient;
  MultiPoly rem = *this;
  const auto& lt = d.leading_term();
  while (!rem.is_zero()) {
    auto m = rem.leading_term().mono.divide(lt.mono);
    if (!m) return std::nullopt;
    Rational c = rem.leading_coefficient() / lt.coeff;
    rem -= d.times_monomial(*m).scaled(c);
    quotient.push_back({std::move(*m), std::move(c)});
  }
  return from_terms(std::move(quotient));
}

MultiPoly MultiPoly::monic() const {
  if (is_zero()) return {};
  return scaled(1 / leading_coefficient());
}

MultiPoly MultiPoly::integer_primitive() const {
  if (is_zero()) return {};
  mpz_class den_lcm = 1;
  mpz_class num_gcd = 0;
  for (const auto& t : terms_) {
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), t.coeff.get_den_mpz_t());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), t.coeff.get_num_mpz_t());
  }
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  if (leading_coefficient() < 0) scale = -scale;
  return scaled(scale);
}

std::string MultiPoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Rational c = t.coeff;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    c = abs(c);
    const bool one = (c == 1);
    if (!one || t.mono.is_one()) {
      os << c.get_str();
      if (!t.mono.is_one()) os << "*";
    }
    bool first_var = true;
    for (const auto& p : t.mono.powers()) {
      if (!first_var) os << "*";
      os << Var::from_id(p.var).name();
      if (p.exp > 1) os << "^" << p.exp;
      first_var = false;
    }
    first = false;
  }
  return os.str();
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i) {
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  }
  return true;
}

}  // namespace heunlab
