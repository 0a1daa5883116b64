// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "heunlab/error.hpp"
#include "heunlab/matching.hpp"
#include "heunlab/numeric.hpp"

using namespace heunlab;

namespace {

struct Result {
  bool ok = true;
  std::string note;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

void fold(Result& r, bool ok, const std::string& what) {
  if (!ok) {
    r.ok = false;
    r.note += (r.note.empty() ? "failed: " : ", ") + what;
  }
}

Result derivative_closed_forms() {
  Result r;
  for (HeunFamily f : kHeunFamilies) {
    const auto spec = HeunSpec::symbolic(f);
    fold(r, ode_equal(build_heun_derivative(spec), derivative_equation(build_heun(spec))), std::string(to_string(f)));
  }
  if (r.ok) r.note = "5/5 families equal exactly";
  return r;
}

Result degenerations() {
  Result r;
  const RationalExpr t = RationalExpr::var("t");
  for (DegenerationCase c : kDegenerationCases) {
    const auto d = degeneration_case(impose_degeneration(HeunSpec::symbolic(HeunFamily::General), c), c);
    const auto pts = singular_points(d.cancelled);
    bool ok = pts.size() == 4 && pts[3].kind == LocusKind::Infinity;
    const RationalExpr expected[] = {0, 1, t};
    for (int i = 0; ok && i < 3; ++i) ok = pts[i].kind == LocusKind::Exact && pts[i].location == expected[i];
    fold(r, ok, std::string(to_string(c)));
  }
  if (r.ok) r.note = "4/4 cases leave exactly {0, 1, t, infinity}";
  return r;
}

Result elimination() {
  Result r;
  for (PainleveKind k : kPainleveKinds) fold(r, verify_elimination(k).verdict() == Verdict::Pass, std::string(to_string(k)));
  const auto lit = verify_elimination(PainleveKind::P2, {.paper_literal_h2 = true});
  fold(r, lit.verdict() == Verdict::FailAsPredicted && lit.witness.has_value(), "literal H_II should fail with a witness");
  if (r.ok) r.note = "5/5 exact; 1/t H_II fails as predicted at " + *lit.witness;
  return r;
}

Result p3_substitution() {
  Result r;
  fold(r, verify_p3_substitution().verdict() == Verdict::Pass, "lambda(t) -> lambda(t^2)/t");
  if (r.ok) r.note = "P3 -> P3' exact";
  return r;
}

Result for_all_cases(const std::function<VerificationOutcome(const MatchingCase&)>& check, const std::string& what) {
  Result r;
  int n = 0;
  for (PainleveKind k : kPainleveKinds) {
    const bool signed_case = k == PainleveKind::P5 || k == PainleveKind::P6;
    const std::vector<int> branches = signed_case ? std::vector<int>{1, -1} : std::vector<int>{1};
    for (int b : branches) {
      const auto c = matching_case(k, b);
      fold(r, check(c).verdict() == Verdict::Pass, c.id());
      ++n;
    }
  }
  if (r.ok) r.note = std::to_string(n) + "/" + std::to_string(n) + " cases and branches " + what;
  return r;
}

Result riccati() {
  Result r = for_all_cases([](const MatchingCase& c) { return verify_riccati(c); }, "reduce exactly");
  // the defect is the stated condition times a nonzero factor in lambda and t
  for (PainleveKind k : kPainleveKinds) {
    const auto c = matching_case(k);
    const auto d = riccati_defect(c);
    fold(r, !d.quotient.is_zero() && d.defect == d.quotient * c.condition, "defect factorization " + c.id());
  }
  if (r.ok) r.note += "; defects factor through the conditions";
  return r;
}

Result numeric_derivative() {
  Result r;
  double worst = 0;
  for (const auto& ex : standard_derivative_examples()) {
    const double res = verify_derivative_numeric(ex.spec, ex.path, ex.init);
    worst = std::max(worst, res);
    fold(r, res <= 1e-8 && ex.path.length() >= 1.0, std::string(to_string(ex.spec.family)) + " " + sci(res));
  }
  if (r.ok) r.note = "max relative residual " + sci(worst) + " over 5 families";
  return r;
}

Result numeric_riccati() {
  Result r;
  const auto c = specialize(matching_case(PainleveKind::P2), {{"alpha2", frac(1, 2)}});
  const auto traj = integrate_riccati(c, ComplexPath::segment(0.0, 1.0), 0.0);
  const double good = painleve_residual(PainleveKind::P2, traj, {{"alpha2", frac(1, 2)}});
  const double bad = painleve_residual(PainleveKind::P2, traj, {{"alpha2", frac(51, 100)}});
  fold(r, !traj.pole && good <= 1e-6, "residual " + sci(good));
  fold(r, bad > 1e-4, "perturbed residual " + sci(bad));
  if (r.ok) r.note = "P_II residual " + sci(good) + "; alpha2 = 0.51 gives " + sci(bad);
  return r;
}

Result numeric_hamiltonian() {
  Result r;
  double worst = 0;
  for (const auto& ex : standard_hamiltonian_examples()) {
    IntegrationConfig cfg;
    cfg.output_step = ex.output_step;
    const auto traj = integrate_hamiltonian(ex.kind, ex.params, ex.init, ex.t_path, cfg);
    const double res = painleve_residual(ex.kind, traj, ex.params);
    worst = std::max(worst, res);
    fold(r, !traj.pole && res <= 1e-6, std::string(to_string(ex.kind)) + " " + sci(res));
  }
  if (r.ok) r.note = "max residual " + sci(worst) + " over 5 kinds";
  return r;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Result()> run;
    bool symbolic;
  };
  const Criterion criteria[] = {
      {"derivative closed forms", derivative_closed_forms, true},
      {"degenerations", degenerations, true},
      {"elimination identities", elimination, true},
      {"P3 to P3' substitution", p3_substitution, true},
      {"Heun-Painleve matchings",
       [] { return for_all_cases([](const MatchingCase& c) { return verify_matching(c); }, "match exactly"); }, true},
      {"Riccati reductions", riccati, true},
      {"obstruction",
       [] {
         return for_all_cases([](const MatchingCase& c) { return verify_obstruction(c); },
                              "force alpha*beta (or alpha) = 0 and q = 0");
       },
       true},
      {"numeric derivative witness", numeric_derivative, false},
      {"numeric Riccati to Painleve", numeric_riccati, false},
      {"numeric Hamiltonian witness", numeric_hamiltonian, false},
  };
  bool all = true;
  double symbolic_s = 0, numeric_s = 0;
  int i = 0;
  for (const auto& c : criteria) {
    ++i;
    const auto start = std::chrono::steady_clock::now();
    Result r;
    try {
      r = c.run();
    } catch (const Error& e) {
      r = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    (c.symbolic ? symbolic_s : numeric_s) += secs;
    all = all && r.ok;
    std::printf("[%s] %2d %-28s %s\n", r.ok ? "PASS" : "FAIL", i, c.name, r.note.c_str());
  }
  const bool fast = symbolic_s < 60 && numeric_s < 120;
  std::printf("symbolic %.2f s (limit 60), numeric %.2f s (limit 120)%s\n", symbolic_s, numeric_s,
              fast ? "" : " [FAIL: over budget]");
  return all && fast ? 0 : 1;
}
