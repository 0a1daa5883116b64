#include <random>

#include "doctest.h"
#include "heunlab/error.hpp"
#include "heunlab/ode.hpp"
#include "test_support.hpp"

using namespace heunlab;

namespace {
RationalExpr V(const char* n) { return RationalExpr::var(n); }

LinearODE2 general_heun_symbolic() {
  const auto z = V("z");
  const auto t = V("t");
  const auto ep = 1 + V("alpha") + V("beta") - V("gamma") - V("delta");
  return {V("gamma") / z + V("delta") / (z - 1) + ep / (z - t),
          (V("alpha") * V("beta") * z - V("q")) / (z * (z - 1) * (z - t))};
}

Bindings standard_general() {
  return {{"alpha", 2}, {"beta", 1}, {"gamma", 1}, {"delta", 1}, {"q", 1}, {"t", 2}};
}

std::vector<RationalExpr> finite_locations(const std::vector<SingularPoint>& pts) {
  std::vector<RationalExpr> out;
  for (const auto& p : pts) {
    if (p.kind == LocusKind::Exact) out.push_back(p.location);
  }
  return out;
}

bool all_regular(const std::vector<SingularPoint>& pts) {
  for (const auto& p : pts) {
    if (p.classification != SingularityClass::RegularSingular) return false;
  }
  return true;
}
}  // namespace

TEST_CASE("derivative of a harmonic oscillator solution solves the same equation") {
  const LinearODE2 osc{0, 1};
  const auto d = derivative_equation(osc);
  CHECK(d.p1.is_zero());
  CHECK(d.p2 == RationalExpr(1));
}

TEST_CASE("no derivative equation when p2 vanishes") {
  const LinearODE2 first_order{V("z"), 0};
  try {
    derivative_equation(first_order);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoDerivativeEquation);
  }
}

TEST_CASE("general Heun derivative equation has the closed form with f(z)") {
  const auto z = V("z");
  const auto t = V("t");
  const auto al = V("alpha");
  const auto be = V("beta");
  const auto ga = V("gamma");
  const auto de = V("delta");
  const auto q = V("q");
  const auto ep = 1 + al + be - ga - de;
  const auto ab = al * be;
  const auto f = z * (ab * z - 2 * q) * (ab + ga + de + ep) + (q * q + q * (ga + t * (ga + de) + ep) - ab * ga * t);
  const LinearODE2 closed{(ga + 1) / z + (de + 1) / (z - 1) + (ep + 1) / (z - t) - ab / (ab * z - q),
                          f / (z * (z - 1) * (z - t) * (ab * z - q))};
  const auto derived = derivative_equation(general_heun_symbolic());
  CHECK(ode_equal(derived, closed));
  CHECK(ode_equal(derived, closed, IdentityMode::Randomized));

  const auto perturbed = substitute(closed, {{"q", q + 1}});
  const auto cmp = ode_compare(derived, perturbed);
  CHECK_FALSE(cmp.equal);
  CHECK(cmp.p1.witness.has_value());
}

TEST_CASE("derivative equation commutes with parameter substitution") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<long> d(-9, 9);
  const auto ode = general_heun_symbolic();
  for (int i = 0; i < 10; ++i) {
    Bindings b;
    for (const char* n : {"alpha", "beta", "gamma", "delta"}) b[n] = frac(d(rng), 1 + (d(rng) + 9) % 4);
    b["q"] = V("q") + d(rng);
    b["t"] = V("t") * d(rng) + 3;
    const auto lhs = substitute(derivative_equation(ode), b);
    const auto rhs = derivative_equation(substitute(ode, b));
    CHECK(ode_equal(lhs, rhs));
  }
}

TEST_CASE("identity gauge leaves the equation unchanged") {
  const auto ode = general_heun_symbolic();
  const GaugeSpec id;
  CHECK(ode_equal(gauge_mobius_transform(ode, id), ode));
  const auto zero_power = GaugeSpec::single(Mobius::identity(), V("z") - 3, 0);
  CHECK(ode_equal(gauge_mobius_transform(ode, zero_power), ode));
}

TEST_CASE("gauge followed by its inverse is the identity") {
  const auto z = V("z");
  const auto ode = general_heun_symbolic();
  const auto g = GaugeSpec::single(Mobius(1, 0, 1, -1), 1 - z / (z - 1), V("sigma"));
  const auto there = gauge_mobius_transform(ode, g);
  const auto back = gauge_mobius_transform(there, g.inverse());
  CHECK(ode_equal(back, ode));
}

TEST_CASE("gauge transforms compose as a group action") {
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<long> d(-4, 4);
  const auto z = V("z");
  const LinearODE2 ode{V("gamma") / z + 1 / (z - 1), V("q") / (z * (z - 1))};
  int done = 0;
  while (done < 6) {
    try {
      const Mobius m1(d(rng), d(rng), d(rng), d(rng));
      const Mobius m2(d(rng), d(rng), d(rng), d(rng));
      const GaugeSpec g1{m1, {{z - d(rng), V("sigma")}, {z * z + 1, frac(d(rng), 2)}}};
      const GaugeSpec g2{m2, {{z + d(rng), frac(1, 3)}}};
      const auto stepwise = gauge_mobius_transform(gauge_mobius_transform(ode, g1), g2);
      const auto composite = gauge_mobius_transform(ode, g1.then(g2));
      CHECK(ode_equal(stepwise, composite));
      ++done;
    } catch (const Error& e) {
      CHECK((e.code() == ErrorCode::DegenerateMobius || e.code() == ErrorCode::InvalidSpec ||
             e.code() == ErrorCode::DegenerateSubstitution));
    }
  }
}

TEST_CASE("degenerate and invalid Mobius maps are rejected") {
  auto code_of = [](auto&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ParseError;
  };
  CHECK(code_of([] { return Mobius(2, 4, 1, 2); }) == ErrorCode::DegenerateMobius);
  CHECK(code_of([] { return Mobius(V("alpha"), V("alpha"), 1, 1); }) == ErrorCode::DegenerateMobius);
  CHECK(code_of([] { return Mobius(V("z"), 0, 0, 1); }) == ErrorCode::InvalidSpec);
  const GaugeSpec zero_base{Mobius::identity(), {{0, 1}}};
  CHECK(code_of([&] { return zero_base.log_derivative(); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("singular points of the general Heun equation and its derivative") {
  const auto ode = substitute(general_heun_symbolic(), standard_general());
  CHECK(ode.p1 == 1 / V("z") + 1 / (V("z") - 1) + 2 / (V("z") - 2));
  const auto pts = singular_points(ode);
  REQUIRE(pts.size() == 4);
  CHECK(finite_locations(pts) == std::vector<RationalExpr>{0, 1, 2});
  CHECK(pts.back().kind == LocusKind::Infinity);
  CHECK(all_regular(pts));

  const auto dpts = singular_points(derivative_equation(ode));
  REQUIRE(dpts.size() == 5);
  CHECK(finite_locations(dpts) == std::vector<RationalExpr>{0, frac(1, 2), 1, 2});
  CHECK(all_regular(dpts));
}

TEST_CASE("symbolic pole loci") {
  const auto pts = singular_points(derivative_equation(general_heun_symbolic()));
  REQUIRE(pts.size() == 5);
  const auto locs = finite_locations(pts);
  REQUIRE(locs.size() == 4);
  CHECK(std::find(locs.begin(), locs.end(), V("t")) != locs.end());
  CHECK(std::find(locs.begin(), locs.end(), V("q") / (V("alpha") * V("beta"))) != locs.end());
  CHECK(all_regular(pts));
}

TEST_CASE("singular points are unchanged by eliminating epsilon through the Fuchsian relation") {
  const auto z = V("z");
  const auto t = V("t");
  const LinearODE2 free_eps{V("gamma") / z + V("delta") / (z - 1) + V("epsilon") / (z - t),
                            (V("alpha") * V("beta") * z - V("q")) / (z * (z - 1) * (z - t))};
  const auto tied = substitute(free_eps, {{"epsilon", 1 + V("alpha") + V("beta") - V("gamma") - V("delta")}});
  const auto a = singular_points(free_eps);
  const auto b = singular_points(tied);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].kind == b[i].kind);
    CHECK(a[i].location == b[i].location);
    CHECK(a[i].classification == b[i].classification);
  }
}

TEST_CASE("singular point classification and unresolved loci") {
  const auto z = V("z");
  CHECK(singular_points(LinearODE2{0, 0}).empty());

  // irregular at 0 and infinity
  const auto irregular = singular_points(LinearODE2{1 / (z * z), z});
  REQUIRE(irregular.size() == 2);
  CHECK(irregular[0].classification == SingularityClass::IrregularSingular);
  CHECK(irregular[0].p1_order == 2);
  CHECK(irregular[1].kind == LocusKind::Infinity);
  CHECK(irregular[1].classification == SingularityClass::IrregularSingular);

  const auto quad = singular_points(LinearODE2{1 / (z * z + 1), 0});
  REQUIRE(quad.size() == 2);
  CHECK(quad[0].kind == LocusKind::Quadratic);

  const auto cubic = singular_points(LinearODE2{0, 1 / (z * z * z - 2)});
  REQUIRE(cubic.size() == 2);
  CHECK(cubic[0].kind == LocusKind::Unresolved);

  // harmonic oscillator: only infinity
  const auto osc = singular_points(LinearODE2{0, 1});
  REQUIRE(osc.size() == 1);
  CHECK(osc[0].kind == LocusKind::Infinity);
}

TEST_CASE("rational roots") {
  const auto z = V("z").num();
  const auto p = (2 * z - 1) * (z + 3) * (z * z + 1) * z;
  CHECK(rational_roots(p, Var::of("z")) == std::vector<Rational>{-3, 0, Rational(1, 2)});
}
