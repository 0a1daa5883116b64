#include "doctest.h"
#include "heunlab/error.hpp"
#include "heunlab/matching.hpp"

using namespace heunlab;

namespace {
RationalExpr V(const char* n) { return RationalExpr::var(n); }

std::string detail(const VerificationOutcome& o, const std::string& key) {
  for (const auto& [k, v] : o.details)
    if (k == key) return v;
  return {};
}
}  // namespace

TEST_CASE("every case matches on both branches") {
  for (PainleveKind k : kPainleveKinds) {
    for (int branch : {1, -1}) {
      CAPTURE(to_string(k));
      CAPTURE(branch);
      const auto c = matching_case(k, branch);
      const auto out = verify_matching(c);
      CHECK(out.passed);
      CHECK(out.verdict() == Verdict::Pass);
      CHECK(verify_matching(c, {}, IdentityMode::Randomized).passed);
    }
  }
}

TEST_CASE("Riccati reduction and defect quotient") {
  const auto l = V("lambda");
  const auto t = V("t");
  for (PainleveKind k : kPainleveKinds) {
    for (int branch : {1, -1}) {
      CAPTURE(to_string(k));
      CAPTURE(branch);
      const auto c = matching_case(k, branch);
      const auto out = verify_riccati(c);
      CHECK(out.passed);
      const auto d = riccati_defect(c);
      CHECK(d.defect == d.quotient * c.condition);
    }
  }
  CHECK(riccati_defect(matching_case(PainleveKind::P6)).quotient == 1 / (t * (t - 1)));
  CHECK(riccati_defect(matching_case(PainleveKind::P5)).quotient == -1 / (2 * (l - 1) * (l - 1)));
  CHECK(riccati_defect(matching_case(PainleveKind::P3Prime)).quotient == 1 / (2 * t));
  CHECK(riccati_defect(matching_case(PainleveKind::P2)).quotient == frac(-1, 2));
  const auto p4 = riccati_defect(matching_case(PainleveKind::P4)).quotient;
  CHECK(p4.is_constant());
  CHECK_FALSE(p4.is_zero());
}

TEST_CASE("classical condition forces alpha and q to vanish") {
  for (PainleveKind k : kPainleveKinds) {
    for (int branch : {1, -1}) {
      CAPTURE(to_string(k));
      const auto c = matching_case(k, branch);
      CHECK(verify_obstruction(c).passed);
      for (const auto& sol : c.classical) {
        CHECK(substitute(c.condition, sol).is_zero());
      }
    }
  }
}

TEST_CASE("unknown case names") {
  CHECK(matching_case("p3'").kind == PainleveKind::P3Prime);
  try {
    matching_case("P1");
    FAIL("expected UnknownCase");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownCase);
  }
  CHECK_THROWS_AS(matching_case(PainleveKind::P6, 0), Error);
}

TEST_CASE("P3' is bound to the double-confluent family only") {
  const auto c = matching_case(PainleveKind::P3Prime);
  CHECK(c.family == HeunFamily::DoubleConfluent);
  CHECK_FALSE(verify_matching_family(c, HeunFamily::BiConfluent).passed);
  CHECK(detail(verify_matching(c), "bi-confluent binding") == "fails");
}

TEST_CASE("P2 polynomial part carries -2H") {
  const auto out = verify_matching(matching_case(PainleveKind::P2));
  CHECK(detail(out, "constant_term_is_minus_2H") == "holds");
}

TEST_CASE("literal H_II breaks the P2 reduction") {
  const Conventions lit{.paper_literal_h2 = true};
  const auto c = matching_case(PainleveKind::P2, 1, lit);
  const auto m = verify_matching(c, lit);
  CHECK_FALSE(m.passed);
  CHECK(m.verdict() == Verdict::FailAsPredicted);
  CHECK(verify_riccati(c, lit).verdict() == Verdict::FailAsPredicted);
  // the obstruction does not involve H
  CHECK(verify_obstruction(c).passed);
}

TEST_CASE("literal P5 constraint and Riccati display fail") {
  const Conventions lit{.paper_literal_p5 = true};
  for (int branch : {1, -1}) {
    const auto c = matching_case(PainleveKind::P5, branch, lit);
    const auto m = verify_matching(c, lit);
    CHECK_FALSE(m.passed);
    CHECK(m.witness.has_value());
    CHECK(m.verdict() == Verdict::FailAsPredicted);
    CHECK(verify_riccati(c, lit).verdict() == Verdict::FailAsPredicted);
  }
}

TEST_CASE("relabelling lambda does not change the verdict") {
  const Bindings relabel{{"lambda", V("ell")}};
  for (PainleveKind k : kPainleveKinds) {
    CAPTURE(to_string(k));
    const auto c = matching_case(k, -1);
    CHECK(verify_matching(c, {}, IdentityMode::Exact, {}, relabel).passed);
  }
  const Conventions lit{.paper_literal_p5 = true};
  CHECK_FALSE(verify_matching(matching_case(PainleveKind::P5, 1, lit), lit, IdentityMode::Exact, {}, relabel).passed);
}

TEST_CASE("specialized parameters") {
  const auto c = specialize(matching_case(PainleveKind::P6),
                            {{"kappa0", frac(1, 3)}, {"kappa1", 2}, {"theta", -1}, {"kappa_inf", 5}});
  CHECK(verify_matching(c).passed);
  CHECK(verify_riccati(c).passed);
  const auto p5 = specialize(matching_case(PainleveKind::P5, -1), {{"eta", 3}, {"theta", frac(1, 2)}});
  CHECK(verify_matching(p5).passed);
  CHECK(verify_riccati(p5).passed);
}

TEST_CASE("beta = 0 is not applicable") {
  // beta = (kappa_inf - 1 - kappa0 - kappa1 - theta)/2 vanishes at kappa_inf = 4 here
  const auto c = specialize(matching_case(PainleveKind::P6),
                            {{"kappa0", 1}, {"kappa1", 1}, {"theta", 1}, {"kappa_inf", 4}});
  CHECK(c.not_applicable);
  const auto out = verify_matching(c);
  CHECK(out.verdict() == Verdict::NotApplicable);
  const auto other = specialize(matching_case(PainleveKind::P6, -1),
                                {{"kappa0", 1}, {"kappa1", 1}, {"theta", 1}, {"kappa_inf", 4}});
  CHECK_FALSE(other.not_applicable);
}

TEST_CASE("Riccati condition zero on a classical solution") {
  const auto c = specialize(matching_case(PainleveKind::P4), {{"theta_inf", -1}});
  CHECK(c.condition.is_zero());
  CHECK(riccati_defect(c).defect.is_zero());
  CHECK(verify_riccati(c).passed);
}

TEST_CASE("case ids") {
  CHECK(matching_case(PainleveKind::P6, -1).id() == "P6-");
  CHECK(matching_case(PainleveKind::P4).id() == "P4");
}
