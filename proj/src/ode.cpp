#include "heunlab/ode.hpp"

#include <algorithm>
#include <deque>
#include <random>
#include <sstream>

#include "heunlab/error.hpp"

namespace heunlab {

std::string LinearODE2::to_string() const {
  std::ostringstream os;
  os << "p1 = " << p1.to_string() << "\np2 = " << p2.to_string();
  return os.str();
}

// ---------------------------------------------------------------- Mobius

Mobius::Mobius(RationalExpr a, RationalExpr b, RationalExpr c, RationalExpr d, Var var)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)), var_(var) {
  for (const auto* e : {&a_, &b_, &c_, &d_}) {
    if (e->depends_on(var_)) throw Error(ErrorCode::InvalidSpec, "Mobius coefficient depends on " + var_.name());
  }
  if (determinant().is_zero()) throw Error(ErrorCode::DegenerateMobius, "ad - bc vanishes identically");
}

Mobius Mobius::identity(Var var) { return {1, 0, 0, 1, var}; }

RationalExpr Mobius::as_expr() const { return apply(RationalExpr::var(var_)); }

RationalExpr Mobius::apply(const RationalExpr& e) const { return (a_ * e + b_) / (c_ * e + d_); }

Mobius Mobius::after(const Mobius& inner) const {
  return {a_ * inner.a_ + b_ * inner.c_, a_ * inner.b_ + b_ * inner.d_, c_ * inner.a_ + d_ * inner.c_,
          c_ * inner.b_ + d_ * inner.d_, var_};
}

Mobius Mobius::inverse() const { return {d_, -b_, -c_, a_, var_}; }

// ---------------------------------------------------------------- GaugeSpec

GaugeSpec GaugeSpec::single(Mobius m, RationalExpr base, RationalExpr exponent) {
  return {std::move(m), {{std::move(base), std::move(exponent)}}};
}

RationalExpr GaugeSpec::log_derivative() const {
  RationalExpr sum;
  for (const auto& f : factors) {
    if (f.base.is_zero()) throw Error(ErrorCode::InvalidSpec, "gauge prefactor base is identically zero");
    if (f.exponent.depends_on(mobius.var())) throw Error(ErrorCode::InvalidSpec, "gauge exponent depends on z");
    sum += f.exponent * differentiate(f.base, mobius.var()) / f.base;
  }
  return sum;
}

GaugeSpec GaugeSpec::then(const GaugeSpec& next) const {
  // w2(z) = Phi2(z) w1(m2 z) = Phi2(z) Phi1(m2 z) v(m1(m2 z))
  GaugeSpec out{mobius.after(next.mobius), next.factors};
  const Bindings at_m2{{next.mobius.var().name(), next.mobius.as_expr()}};
  for (const auto& f : factors) out.factors.push_back({substitute(f.base, at_m2), f.exponent});
  return out;
}

GaugeSpec GaugeSpec::inverse() const {
  const Mobius inv = mobius.inverse();
  GaugeSpec out{inv, {}};
  const Bindings at_inv{{inv.var().name(), inv.as_expr()}};
  for (const auto& f : factors) out.factors.push_back({substitute(f.base, at_inv), -f.exponent});
  return out;
}

// ---------------------------------------------------------------- transforms

LinearODE2 derivative_equation(const LinearODE2& ode) {
  if (ode.p2.is_zero()) {
    throw Error(ErrorCode::NoDerivativeEquation, "p2 is identically zero; u' solves a first-order equation");
  }
  const RationalExpr log_p2 = differentiate(ode.p2, ode.var) / ode.p2;
  return {ode.p1 - log_p2, ode.p2 + differentiate(ode.p1, ode.var) - ode.p1 * log_p2, ode.var};
}

LinearODE2 gauge_mobius_transform(const LinearODE2& ode, const GaugeSpec& g) {
  const Var z = ode.var;
  const RationalExpr m = g.mobius.as_expr();
  const RationalExpr dm = differentiate(m, z);
  const RationalExpr ddm = differentiate(dm, z);
  const Bindings at_m{{z.name(), m}};
  const RationalExpr q1 = dm * substitute(ode.p1, at_m) - ddm / dm;
  const RationalExpr q2 = dm * dm * substitute(ode.p2, at_m);
  const RationalExpr L = g.log_derivative();
  if (L.is_zero()) return {q1, q2, z};
  return {q1 - 2 * L, q2 - q1 * L + L * L - differentiate(L, z), z};
}

LinearODE2 substitute(const LinearODE2& ode, const Bindings& bindings) {
  return {substitute(ode.p1, bindings), substitute(ode.p2, bindings), ode.var};
}

OdeComparison ode_compare(const LinearODE2& a, const LinearODE2& b, IdentityMode mode, const RandomizedConfig& cfg) {
  OdeComparison out;
  out.p1 = identity_check(a.p1, b.p1, mode, cfg);
  out.p2 = identity_check(a.p2, b.p2, mode, cfg);
  out.equal = out.p1.equal && out.p2.equal;
  if (mode == IdentityMode::Exact) {
    out.p1_diff = a.p1 - b.p1;
    out.p2_diff = a.p2 - b.p2;
  }
  return out;
}

bool ode_equal(const LinearODE2& a, const LinearODE2& b, IdentityMode mode, const RandomizedConfig& cfg) {
  if (a.var != b.var) throw Error(ErrorCode::InvalidSpec, "ODEs use different independent variables");
  return ode_compare(a, b, mode, cfg).equal;
}

// ---------------------------------------------------------------- singularities

namespace {

std::vector<mpz_class> divisors(const mpz_class& n) {
  std::vector<mpz_class> out;
  mpz_class m = abs(n);
  if (m == 0) return out;
  for (mpz_class d = 1; d * d <= m; ++d) {
    if (m % d == 0) {
      out.push_back(d);
      if (d * d != m) out.push_back(m / d);
    }
  }
  return out;
}

/// Normalized so the coefficient of the highest power of v is positive and the
/// integer content is 1.
MultiPoly normalize_factor(const MultiPoly& f, Var v) {
  MultiPoly p = f.integer_primitive();
  const MultiPoly lead = p.coefficient_of(v, p.degree_in(v));
  if (lead.leading_coefficient() < 0) p = -p;
  return p;
}

unsigned multiplicity(MultiPoly d, const MultiPoly& f) {
  unsigned k = 0;
  while (true) {
    auto q = d.divide_exact(f);
    if (!q) return k;
    d = std::move(*q);
    ++k;
  }
}

/// Splits the square-free parts of the inputs into a pairwise coprime set.
std::vector<MultiPoly> coprime_base(const std::vector<MultiPoly>& inputs, Var v) {
  std::vector<MultiPoly> base;
  std::deque<MultiPoly> queue(inputs.begin(), inputs.end());
  while (!queue.empty()) {
    MultiPoly x = normalize_factor(queue.front(), v);
    queue.pop_front();
    if (x.degree_in(v) == 0) continue;
    bool absorbed = false;
    for (std::size_t i = 0; i < base.size(); ++i) {
      const MultiPoly g = gcd(x, base[i]);
      if (g.degree_in(v) == 0) continue;
      absorbed = true;
      if (normalize_factor(g, v) == base[i] && base[i] == x) break;
      MultiPoly old = base[i];
      base.erase(base.begin() + static_cast<long>(i));
      queue.push_back(g);
      queue.push_back(*old.divide_exact(g));
      queue.push_back(*x.divide_exact(g));
      break;
    }
    if (!absorbed) base.push_back(x);
  }
  return base;
}

/// Lowest power of w in p (p != 0).
unsigned order_at_zero(const MultiPoly& p, Var w) {
  unsigned lowest = ~0U;
  for (const auto& t : p.terms()) lowest = std::min(lowest, t.mono.exponent(w));
  return lowest;
}

unsigned pole_order_at_zero(const RationalExpr& e, Var w) {
  if (e.is_zero()) return 0;
  const unsigned dn = order_at_zero(e.den(), w);
  const unsigned nn = order_at_zero(e.num(), w);
  return dn > nn ? dn - nn : 0;
}

struct SplitFactor {
  MultiPoly factor;
  std::optional<RationalExpr> root;
};

/// Breaks a square-free factor into linear pieces where possible.
std::vector<SplitFactor> split_factor(MultiPoly f, Var v) {
  std::vector<SplitFactor> out;
  const MultiPoly x = MultiPoly::variable(v);
  auto peel = [&](const MultiPoly& root_poly, const RationalExpr& root) {
    const MultiPoly lin = x - root_poly;
    while (f.degree_in(v) > 1) {
      auto q = f.divide_exact(lin);
      if (!q) break;
      out.push_back({lin, root});
      f = std::move(*q);
    }
  };

  std::vector<Var> params;
  for (Var p : f.variables()) {
    if (p != v) params.push_back(p);
  }
  if (params.empty()) {
    for (const Rational& r : rational_roots(f, v)) peel(MultiPoly(r), RationalExpr(r));
  } else if (f.degree_in(v) > 1) {
    // Candidate linear factors v - c and v - p, read off two specializations.
    std::mt19937_64 rng(0xC0FFEE);
    std::uniform_int_distribution<long> dist(-997, 997);
    std::vector<Point> specs(2);
    std::vector<std::vector<Rational>> roots(2);
    for (int s = 0; s < 2; ++s) {
      for (int attempt = 0; attempt < 16; ++attempt) {
        Point pt;
        for (Var p : params) pt.emplace(p, Rational(dist(rng)));
        MultiPoly spec = f.partial_evaluate(pt);
        if (spec.degree_in(v) != f.degree_in(v)) continue;
        specs[s] = pt;
        roots[s] = rational_roots(spec, v);
        break;
      }
    }
    auto contains = [](const std::vector<Rational>& rs, const Rational& r) {
      return std::find(rs.begin(), rs.end(), r) != rs.end();
    };
    for (const Rational& r : roots[0]) {
      if (contains(roots[1], r)) peel(MultiPoly(r), RationalExpr(r));
    }
    for (Var p : params) {
      if (specs[0].empty() || specs[1].empty()) break;
      if (contains(roots[0], specs[0].at(p)) && contains(roots[1], specs[1].at(p))) {
        peel(MultiPoly::variable(p), RationalExpr::var(p));
      }
    }
  }
  if (f.degree_in(v) == 1) {
    const auto c = f.coefficients_in(v);
    out.push_back({f, RationalExpr(-c[0], c[1])});
  } else if (f.degree_in(v) > 1) {
    out.push_back({f, std::nullopt});
  }
  return out;
}

}  // namespace

std::vector<Rational> rational_roots(const MultiPoly& p, Var v) {
  std::vector<Rational> roots;
  if (p.degree_in(v) == 0) return roots;
  for (Var u : p.variables()) {
    if (u != v) throw Error(ErrorCode::InvalidSpec, "rational_roots expects a univariate polynomial");
  }
  MultiPoly f = p.integer_primitive();
  const MultiPoly x = MultiPoly::variable(v);
  if (f.coefficient_of(v, 0).is_zero()) {
    roots.push_back(0);
    while (f.coefficient_of(v, 0).is_zero()) f = *f.divide_exact(x);
  }
  if (f.degree_in(v) == 0) return roots;
  const mpz_class a0 = f.coefficient_of(v, 0).constant_value().get_num();
  const mpz_class an = f.coefficient_of(v, f.degree_in(v)).constant_value().get_num();
  static const mpz_class limit("1000000000000");
  if (abs(a0) > limit || abs(an) > limit) return roots;
  for (const auto& num : divisors(a0)) {
    for (const auto& den : divisors(an)) {
      for (int sign : {1, -1}) {
        Rational r(mpz_class(sign * num), den);
        r.canonicalize();
        if (std::find(roots.begin(), roots.end(), r) != roots.end()) continue;
        if (f.evaluate({{v, r}}) == 0) roots.push_back(r);
      }
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::string SingularPoint::describe() const {
  std::string cls = classification == SingularityClass::RegularSingular ? "regular" : "irregular";
  switch (kind) {
    case LocusKind::Exact: return location.to_string() + " (" + cls + ")";
    case LocusKind::Quadratic: return "roots of " + factor.to_string() + " (" + cls + ")";
    case LocusKind::Unresolved: return "unresolved roots of " + factor.to_string() + " (" + cls + ")";
    case LocusKind::Infinity: return "infinity (" + cls + ")";
  }
  return {};
}

std::vector<SingularPoint> singular_points(const LinearODE2& ode) {
  std::vector<SingularPoint> out;
  if (ode.p1.is_zero() && ode.p2.is_zero()) return out;
  const Var z = ode.var;

  std::vector<MultiPoly> sqfree;
  for (const auto* d : {&ode.p1.den(), &ode.p2.den()}) {
    for (auto& f : squarefree_factors(*d, z)) sqfree.push_back(std::move(f));
  }
  std::vector<SplitFactor> pieces;
  for (const auto& f : coprime_base(sqfree, z)) {
    for (auto& s : split_factor(f, z)) pieces.push_back(std::move(s));
  }

  auto classify = [](SingularPoint& sp) {
    sp.classification = (sp.p1_order <= 1 && sp.p2_order <= 2) ? SingularityClass::RegularSingular
                                                                : SingularityClass::IrregularSingular;
  };
  for (const auto& piece : pieces) {
    SingularPoint sp;
    sp.factor = piece.factor;
    sp.p1_order = multiplicity(ode.p1.den(), piece.factor);
    sp.p2_order = multiplicity(ode.p2.den(), piece.factor);
    if (piece.root) {
      sp.kind = LocusKind::Exact;
      sp.location = *piece.root;
    } else {
      const bool numeric = piece.factor.variables().size() == 1;
      sp.kind = (numeric && piece.factor.degree_in(z) == 2) ? LocusKind::Quadratic : LocusKind::Unresolved;
    }
    classify(sp);
    out.push_back(std::move(sp));
  }
  std::sort(out.begin(), out.end(), [](const SingularPoint& a, const SingularPoint& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.location.is_constant() && b.location.is_constant()) {
      return a.location.constant_value() < b.location.constant_value();
    }
    if (a.location.is_constant() != b.location.is_constant()) return a.location.is_constant();
    return a.location.to_string() < b.location.to_string();
  });

  // Infinity through z = 1/w.
  const Var w = Var::of("w");
  const Bindings inv{{z.name(), RationalExpr(1) / RationalExpr::var(w)}};
  const RationalExpr W = RationalExpr::var(w);
  const RationalExpr P1 = 2 / W - substitute(ode.p1, inv) / (W * W);
  const RationalExpr P2 = substitute(ode.p2, inv) / W.pow(4);
  SingularPoint inf;
  inf.kind = LocusKind::Infinity;
  inf.p1_order = pole_order_at_zero(P1, w);
  inf.p2_order = pole_order_at_zero(P2, w);
  if (inf.p1_order > 0 || inf.p2_order > 0) {
    classify(inf);
    out.push_back(std::move(inf));
  }
  return out;
}

}  // namespace heunlab
