// Multivariate GCD over Q.
//
// Strategy: variables present in only one argument are eliminated by taking
// the gcd of the other argument with the coefficients of the first with
// respect to those variables. When both arguments share the same variable
// set, a subresultant remainder sequence runs in the variable of lowest
// degree, with contents computed recursively.

#include <algorithm>
#include <random>
#include <set>

#include "heunlab/error.hpp"
#include "heunlab/poly.hpp"

namespace heunlab {

namespace {

MultiPoly exact_quotient(const MultiPoly& a, const MultiPoly& b) {
  auto q = a.divide_exact(b);
  if (!q) throw std::logic_error("gcd: inexact division " + a.to_string() + " / " + b.to_string());
  return std::move(*q);
}

MultiPoly gcd_impl(const MultiPoly& a, const MultiPoly& b);

/// gcd of b and every coefficient of a with respect to `extra`.
MultiPoly gcd_with_coefficients(const MultiPoly& a, const std::vector<Var>& extra, MultiPoly g) {
  auto coeffs = a.coefficients_wrt(extra);
  std::sort(coeffs.begin(), coeffs.end(), [](const MultiPoly& x, const MultiPoly& y) {
    if (x.total_degree() != y.total_degree()) return x.total_degree() < y.total_degree();
    return x.size() < y.size();
  });
  for (const auto& c : coeffs) {
    g = gcd_impl(g, c);
    if (g.is_constant()) return MultiPoly(1);
  }
  return g;
}

MultiPoly content_in(const MultiPoly& p, Var v) {
  auto coeffs = p.coefficients_in(v);
  std::sort(coeffs.begin(), coeffs.end(), [](const MultiPoly& x, const MultiPoly& y) { return x.size() < y.size(); });
  MultiPoly g;
  for (const auto& c : coeffs) {
    if (c.is_zero()) continue;
    g = g.is_zero() ? c.monic() : gcd_impl(g, c);
    if (g.is_constant()) return MultiPoly(1);
  }
  return g;
}

MultiPoly univariate_gcd(MultiPoly a, MultiPoly b, Var v) {
  if (a.degree_in(v) < b.degree_in(v)) std::swap(a, b);
  while (!b.is_zero()) {
    // Monic remainder sequence over Q.
    const auto db = b.degree_in(v);
    const Rational lcb = b.leading_coefficient();
    MultiPoly r = a;
    while (!r.is_zero() && r.degree_in(v) >= db) {
      const auto dr = r.degree_in(v);
      const Rational c = r.leading_coefficient() / lcb;
      r -= b.times_monomial(Monomial::of(v, dr - db)).scaled(c);
    }
    a = std::move(b);
    b = r.integer_primitive();
  }
  return a.monic();
}


std::optional<std::uint32_t> specialized_degree(const MultiPoly& a, const MultiPoly& b, Var main) {
  static thread_local std::mt19937_64 rng(0x9cd);
  std::uniform_int_distribution<long> dist(-1000, 1000);
  const auto vars = a.variables();
  for (int attempt = 0; attempt < 3; ++attempt) {
    Point pt;
    for (Var v : vars) {
      if (v != main) pt.emplace(v, Rational(dist(rng)));
    }
    for (Var v : b.variables()) {
      if (v != main && !pt.count(v)) pt.emplace(v, Rational(dist(rng)));
    }
    const MultiPoly sa = a.partial_evaluate(pt);
    const MultiPoly sb = b.partial_evaluate(pt);
    if (sa.degree_in(main) != a.degree_in(main) || sb.degree_in(main) != b.degree_in(main)) continue;
    return univariate_gcd(sa, sb, main).degree_in(main);
  }
  return std::nullopt;
}

/// Subresultant remainder sequence on primitive inputs with deg a >= deg b;
/// returns the primitive gcd.
MultiPoly subresultant_gcd(MultiPoly a, MultiPoly b, Var v) {
  MultiPoly g(1);
  MultiPoly h(1);
  while (true) {
    const auto delta = a.degree_in(v) - b.degree_in(v);
    MultiPoly r = pseudo_remainder(a, b, v);
    if (r.is_zero()) break;
    if (r.degree_in(v) == 0) return MultiPoly(1);
    a = std::move(b);
    b = exact_quotient(r, g * h.pow(delta));
    g = a.coefficient_of(v, a.degree_in(v));
    if (delta == 0) continue;
    h = delta == 1 ? g : exact_quotient(g.pow(delta), h.pow(delta - 1));
  }
  return exact_quotient(b, content_in(b, v)).integer_primitive();
}

MultiPoly gcd_impl(const MultiPoly& a, const MultiPoly& b) {
  if (a.is_zero()) return b.monic();
  if (b.is_zero()) return a.monic();
  if (a.is_constant() || b.is_constant()) return MultiPoly(1);
  if (a == b) return a.monic();

  if (a.size() == 1 || b.size() == 1) {
    const MultiPoly& single = a.size() == 1 ? a : b;
    const MultiPoly& other = a.size() == 1 ? b : a;
    Monomial g = single.leading_term().mono;
    for (const auto& t : other.terms()) {
      g = g.gcd(t.mono);
      if (g.is_one()) break;
    }
    return MultiPoly::term(g, 1);
  }

  const auto va = a.variables();
  const auto vb = b.variables();
  std::vector<Var> only_a;
  std::vector<Var> only_b;
  std::vector<Var> common;
  std::set_difference(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(only_a));
  std::set_difference(vb.begin(), vb.end(), va.begin(), va.end(), std::back_inserter(only_b));
  std::set_intersection(va.begin(), va.end(), vb.begin(), vb.end(), std::back_inserter(common));
  if (common.empty()) return MultiPoly(1);
  if (!only_a.empty()) return gcd_with_coefficients(a, only_a, b).monic();
  if (!only_b.empty()) return gcd_with_coefficients(b, only_b, a).monic();

  Var main = common.front();
  std::uint32_t best = ~0U;
  for (Var v : common) {
    const auto d = std::max(a.degree_in(v), b.degree_in(v));
    if (d < best) {
      best = d;
      main = v;
    }
  }
  if (common.size() == 1) return univariate_gcd(a, b, main);

  const MultiPoly ca = content_in(a, main);
  const MultiPoly cb = content_in(b, main);
  const MultiPoly c = gcd_impl(ca, cb);
  MultiPoly pa = exact_quotient(a, ca).integer_primitive();
  MultiPoly pb = exact_quotient(b, cb).integer_primitive();
  if (pa.degree_in(main) < pb.degree_in(main)) std::swap(pa, pb);

  // A specialization of the other variables bounds the degree of the gcd in
  // main from above whenever both leading coefficients survive.
  if (auto bound = specialized_degree(pa, pb, main)) {
    if (*bound == 0) return c.monic();
    if (*bound == pb.degree_in(main)) {
      if (pa.divide_exact(pb)) return (c * pb).monic();
    }
  }
  return (c * subresultant_gcd(std::move(pa), std::move(pb), main)).monic();
}

Rational rational_sqrt_or_zero(const Rational& r, bool& ok) {
  ok = false;
  if (r < 0) return 0;
  if (!mpz_perfect_square_p(r.get_num_mpz_t()) || !mpz_perfect_square_p(r.get_den_mpz_t())) return 0;
  Rational s;
  mpz_sqrt(s.get_num_mpz_t(), r.get_num_mpz_t());
  mpz_sqrt(s.get_den_mpz_t(), r.get_den_mpz_t());
  s.canonicalize();
  ok = true;
  return s;
}

}  // namespace

MultiPoly gcd(const MultiPoly& a, const MultiPoly& b) { return gcd_impl(a, b); }

MultiPoly pseudo_remainder(const MultiPoly& a, const MultiPoly& b, Var v) {
  const auto db = b.degree_in(v);
  if (db == 0) return {};
  const MultiPoly lcb = b.coefficient_of(v, db);
  MultiPoly r = a;
  while (!r.is_zero() && r.degree_in(v) >= db) {
    const auto dr = r.degree_in(v);
    const MultiPoly lcr = r.coefficient_of(v, dr);
    r = r * lcb - (lcr * b).times_monomial(Monomial::of(v, dr - db));
  }
  return r;
}

std::vector<MultiPoly> squarefree_factors(const MultiPoly& p, Var v) {
  std::vector<MultiPoly> out;
  if (p.degree_in(v) == 0) return out;
  const MultiPoly f = exact_quotient(p, content_in(p, v));
  const MultiPoly df = f.derivative(v);
  const MultiPoly g = gcd(f, df);
  MultiPoly c = exact_quotient(f, g);
  MultiPoly d = exact_quotient(df, g) - c.derivative(v);
  while (c.degree_in(v) > 0) {
    MultiPoly a = gcd(c, d);
    c = exact_quotient(c, a);
    d = exact_quotient(d, a) - c.derivative(v);
    out.push_back(a.degree_in(v) > 0 ? a.integer_primitive() : MultiPoly(1));
  }
  return out;
}

std::optional<MultiPoly> try_sqrt(const MultiPoly& p) {
  if (p.is_zero()) return MultiPoly();
  const auto& lt = p.leading_term();
  for (const auto& vp : lt.mono.powers()) {
    if (vp.exp % 2 != 0) return std::nullopt;
  }
  bool ok = false;
  Rational c = rational_sqrt_or_zero(lt.coeff, ok);
  if (!ok) return std::nullopt;
  Monomial half;
  for (const auto& vp : lt.mono.powers()) half = half * Monomial::of(Var::from_id(vp.var), vp.exp / 2);
  const MultiPoly lead = MultiPoly::term(half, c);
  std::uint32_t min_degree = lt.mono.degree();
  for (const auto& t : p.terms()) min_degree = std::min(min_degree, t.mono.degree());

  MultiPoly root = lead;
  MultiPoly rem = p - root * root;
  while (!rem.is_zero()) {
    const auto& rt = rem.leading_term();
    auto m = rt.mono.divide(half);
    if (!m) return std::nullopt;
    if (2 * m->degree() < min_degree || compare_grlex(*m, half) >= 0) return std::nullopt;
    const MultiPoly step = MultiPoly::term(*m, rt.coeff / (2 * c));
    root += step;
    rem = p - root * root;
  }
  return root;
}

}  // namespace heunlab
