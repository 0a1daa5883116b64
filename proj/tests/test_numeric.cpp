#include <cmath>
#include <numbers>

#include "doctest.h"
#include "heunlab/error.hpp"
#include "heunlab/numeric.hpp"

using namespace heunlab;

namespace {
RationalExpr V(const char* n) { return RationalExpr::var(n); }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ParseError;
}

LinearODE2 oscillator() { return {RationalExpr(0), RationalExpr(1)}; }

HeunSpec general_standard() { return standard_derivative_examples().front().spec; }
}  // namespace

TEST_CASE("complex evaluation and roots") {
  const auto e = (V("z") * V("z") + 1) / (V("z") - 2);
  const ComplexEvaluator ev(e, {sym::z()});
  const Complex i(0, 1);
  CHECK(std::abs(ev(i)) < 1e-15);
  CHECK(std::abs(ev(3.0) - 10.0) < 1e-14);
  CHECK(code_of([&] { ComplexEvaluator(V("alpha") * V("z"), {sym::z()}); }) == ErrorCode::UnknownVariable);
  auto roots = complex_roots((V("z") * (V("z") - 1) * (V("z") * V("z") + 4)).num(), sym::z());
  REQUIRE(roots.size() == 4);
  for (Complex expect : {Complex(0), Complex(1), Complex(0, 2), Complex(0, -2)}) {
    double best = 1;
    for (Complex r : roots) best = std::min(best, std::abs(r - expect));
    CHECK(best < 1e-10);
  }
}

TEST_CASE("sin/cos on [0, pi]") {
  const auto traj = integrate_linear(oscillator(), ComplexPath::segment(0.0, std::numbers::pi), {0.0, 1.0});
  const auto& last = traj.samples.back();
  CHECK(std::abs(last.x - std::numbers::pi) < 1e-15);
  CHECK(std::abs(last.y[0]) < 1e-9);
  CHECK(std::abs(last.y[1] + 1.0) < 1e-9);
  for (std::size_t i = 1; i < traj.samples.size(); ++i) CHECK(traj.samples[i].s > traj.samples[i - 1].s);
}

TEST_CASE("general Heun self-residual") {
  const auto ode = build_heun(general_standard());
  const auto traj = integrate_linear(ode, ComplexPath::segment({0.5, 0.3}, {1.5, 0.3}), {1.0, 0.5});
  CHECK(linear_residual(ode, traj) <= 1e-8);
}

TEST_CASE("path checks") {
  const auto ode = build_heun(general_standard());
  CHECK(code_of([&] { integrate_linear(ode, ComplexPath::segment({-0.5, 0}, {0.5, 0}), {1.0, 0.0}); }) ==
        ErrorCode::PathTooClose);
  CHECK(code_of([&] { integrate_linear(ode, ComplexPath{{0.5}}, {1.0, 0.0}); }) == ErrorCode::InvalidSpec);
  // q/(alpha beta) = 1/2 is singular only for the derivative equation
  const ComplexPath through_half = ComplexPath::segment({0.3, 0.2}, {0.7, -0.2});
  CHECK_NOTHROW(integrate_linear(ode, through_half, {1.0, 0.0}));
  CHECK(code_of([&] { verify_derivative_numeric(general_standard(), through_half, {1.0, 0.0}); }) ==
        ErrorCode::PathTooClose);
}

TEST_CASE("step underflow is reported") {
  IntegrationConfig cfg;
  cfg.max_steps = 50;
  const auto traj = [&] { integrate_linear(oscillator(), ComplexPath::segment(0.0, 100.0), {0.0, 1.0}, cfg); };
  CHECK(code_of(traj) == ErrorCode::StiffnessAbort);
}

TEST_CASE("derivative witness on the standard sets") {
  for (const auto& ex : standard_derivative_examples()) {
    CAPTURE(to_string(ex.spec.family));
    CHECK(ex.path.length() >= 1.0);
    const double r = verify_derivative_numeric(ex.spec, ex.path, ex.init);
    CHECK(r <= 1e-8);
  }
}

TEST_CASE("tolerance scaling") {
  for (const auto& ex : standard_derivative_examples()) {
    IntegrationConfig loose;
    loose.rel_tol = 1e-8;
    IntegrationConfig tight = loose;
    tight.rel_tol = loose.rel_tol / 2;
    const double a = verify_derivative_numeric(ex.spec, ex.path, ex.init, loose);
    const double b = verify_derivative_numeric(ex.spec, ex.path, ex.init, tight);
    CAPTURE(to_string(ex.spec.family));
    CHECK(b <= 4 * a + 1e-13);
  }
}

TEST_CASE("homotopic paths agree") {
  const auto ode = build_heun(general_standard());
  const auto a = integrate_linear(ode, ComplexPath::segment({0.25, 0.5}, {1.5, 0.5}), {1.0, 0.5}).samples.back();
  const IntegrationConfig cfg;
  // neither detour encloses 0, 1 or 2
  for (Complex via : {Complex(0.9, 0.9), Complex(0.9, 0.1)}) {
    const auto b = integrate_linear(ode, ComplexPath{{{0.25, 0.5}, via, {1.5, 0.5}}}, {1.0, 0.5}).samples.back();
    for (int k = 0; k < 2; ++k) {
      CHECK(std::abs(a.y[k] - b.y[k]) <= 10 * (cfg.abs_tol + cfg.rel_tol * std::abs(a.y[k])));
    }
  }
}

TEST_CASE("P2 Riccati trajectory solves P_II") {
  const auto c = specialize(matching_case(PainleveKind::P2), {{"alpha2", frac(1, 2)}});
  const auto traj = integrate_riccati(c, ComplexPath::segment(0.0, 1.0), 0.0);
  CHECK_FALSE(traj.pole);
  const double r = painleve_residual(PainleveKind::P2, traj, {{"alpha2", frac(1, 2)}});
  CHECK(r <= 1e-6);
  const double perturbed = painleve_residual(PainleveKind::P2, traj, {{"alpha2", frac(51, 100)}});
  CHECK(perturbed > 1e-4);
}

TEST_CASE("P4 Riccati trajectories") {
  const Bindings p{{"theta_inf", -1}, {"kappa0", frac(1, 4)}};
  const auto c = specialize(matching_case(PainleveKind::P4), p);
  // lambda' = lambda^2 + 2 t lambda + 1/2 > lambda^2 from lambda(1) = 1: a movable pole before t = 2
  const auto up = integrate_riccati(c, ComplexPath::segment(1.0, 2.0), 1.0);
  CHECK(up.pole);
  REQUIRE(up.pole_near.has_value());
  CHECK(up.pole_near->real() == doctest::Approx(1.49).epsilon(0.01));
  const auto down = integrate_riccati(c, ComplexPath::segment(1.0, 2.0), -1.0);
  CHECK_FALSE(down.pole);
  CHECK(std::abs(down.samples.back().x - 2.0) < 1e-15);
  CHECK(painleve_residual(PainleveKind::P4, down, p) <= 1e-6);
}

TEST_CASE("standard Riccati examples") {
  for (const auto& ex : standard_riccati_examples()) {
    CAPTURE(to_string(ex.kind));
    const auto traj = integrate_riccati(specialize(matching_case(ex.kind), ex.params), ex.t_path, ex.lambda0);
    CHECK_FALSE(traj.pole);
    CHECK(painleve_residual(ex.kind, traj, ex.params) <= 1e-6);
  }
}

TEST_CASE("Riccati preconditions") {
  const auto generic = matching_case(PainleveKind::P2);
  CHECK(code_of([&] { integrate_riccati(generic, ComplexPath::segment(0.0, 1.0), 0.0); }) == ErrorCode::InvalidSpec);
  const auto off = specialize(generic, {{"alpha2", frac(1, 3)}});
  CHECK(code_of([&] { integrate_riccati(off, ComplexPath::segment(0.0, 1.0), 0.0); }) == ErrorCode::InvalidSpec);
  const auto p6 = specialize(matching_case(PainleveKind::P6),
                             {{"kappa0", frac(1, 3)}, {"kappa1", frac(1, 5)}, {"theta", frac(1, 7)},
                              {"kappa", -frac(1, 3) - frac(1, 5) - frac(1, 7)}});
  CHECK(p6.condition.is_zero());
  CHECK(code_of([&] { integrate_riccati(p6, ComplexPath::segment(0.5, 1.5), 2.0); }) == ErrorCode::PathTooClose);
  CHECK(code_of([&] { integrate_riccati(p6, ComplexPath::segment(2.0, 3.0), 2.0); }) == ErrorCode::InvalidSpec);
  const auto p4 = specialize(matching_case(PainleveKind::P4), {{"theta_inf", -1}, {"kappa0", 1}});
  CHECK(code_of([&] { integrate_riccati(p4, ComplexPath::segment(1.0, 2.0), 0.0); }) == ErrorCode::InvalidSpec);
}

TEST_CASE("Riccati blow-up is flagged") {
  // lambda' = lambda^2 + t/2 from lambda(0) = 1 blows up before t = 1
  const auto c = specialize(matching_case(PainleveKind::P2), {{"alpha2", frac(1, 2)}});
  const auto traj = integrate_riccati(c, ComplexPath::segment(0.0, 3.0), 1.0);
  CHECK(traj.pole);
  REQUIRE(traj.pole_near.has_value());
  CHECK(traj.pole_near->real() < 1.0);
  for (const auto& s : traj.samples) CHECK(std::abs(s.y[0]) <= kPoleThreshold);
}

TEST_CASE("residual meter on constant trajectories") {
  ODETrajectory traj;
  traj.components = {"lambda"};
  const double lam = 0.7;
  for (int i = 0; i <= 10; ++i) {
    const double t = 0.1 * i;
    traj.samples.push_back({t, t, {lam}, {0.0}});
  }
  const Bindings p{{"alpha2", 2}};
  const double r = painleve_residual(PainleveKind::P2, traj, p);
  // max over interior t in [0.2, 0.8] of |2 lam^3 + t lam + alpha2|
  CHECK(std::abs(r - (2 * lam * lam * lam + 0.8 * lam + 2)) < 1e-9);
  traj.samples.resize(4);
  CHECK(code_of([&] { painleve_residual(PainleveKind::P2, traj, p); }) == ErrorCode::InsufficientSamples);
}

TEST_CASE("non-uniform trajectories are resampled") {
  const auto c = specialize(matching_case(PainleveKind::P2), {{"alpha2", frac(1, 2)}});
  IntegrationConfig cfg;
  cfg.output_step = 1.0 / 2048;
  auto traj = integrate_riccati(c, ComplexPath::segment(0.0, 1.0), 0.0, cfg);
  ODETrajectory thinned = traj;
  thinned.samples.clear();
  for (std::size_t i = 0; i < traj.samples.size(); ++i) {
    if (i % 3 != 1) thinned.samples.push_back(traj.samples[i]);
  }
  CHECK(painleve_residual(PainleveKind::P2, thinned, {{"alpha2", frac(1, 2)}}) <= 1e-5);
  CHECK(painleve_residual(PainleveKind::P2, thinned, {{"alpha2", frac(51, 100)}}) > 1e-4);
}

TEST_CASE("Hamiltonian witnesses") {
  for (const auto& ex : standard_hamiltonian_examples()) {
    CAPTURE(to_string(ex.kind));
    IntegrationConfig cfg;
    cfg.output_step = ex.output_step;
    const auto traj = integrate_hamiltonian(ex.kind, ex.params, ex.init, ex.t_path, cfg);
    CHECK_FALSE(traj.pole);
    CHECK(painleve_residual(ex.kind, traj, ex.params) <= 1e-6);
  }
}

TEST_CASE("literal H_II is visible numerically") {
  const Conventions lit{.paper_literal_h2 = true};
  const Bindings p{{"alpha2", 2}};
  const auto traj = integrate_hamiltonian(PainleveKind::P2, p, {1.0, 1.0}, ComplexPath::segment(1.0, 2.0), {}, lit);
  CHECK(painleve_residual(PainleveKind::P2, traj, p) > 1e-2);
  // the 1/t term makes t = 0 a fixed singularity
  CHECK(code_of([&] {
          integrate_hamiltonian(PainleveKind::P2, p, {1.0, 1.0}, ComplexPath::segment(0.0, 1.0), {}, lit);
        }) == ErrorCode::PathTooClose);
}

TEST_CASE("Hamiltonian init on lambda = 0 is accepted for P4") {
  const Bindings p{{"kappa0", frac(1, 3)}, {"theta_inf", frac(1, 5)}};
  CHECK_NOTHROW(integrate_hamiltonian(PainleveKind::P4, p, {0.0, 1.0}, ComplexPath::segment(1.0, 1.2)));
  const Bindings p6{{"kappa0", frac(1, 3)}, {"kappa1", frac(1, 5)}, {"theta", frac(1, 7)}, {"kappa_inf", frac(1, 11)}};
  CHECK(code_of([&] {
          integrate_hamiltonian(PainleveKind::P6, p6, {0.5, 0.5}, ComplexPath::segment(0.5, 1.5));
        }) == ErrorCode::PathTooClose);
}

TEST_CASE("trajectory export") {
  const auto traj = integrate_linear(oscillator(), ComplexPath::segment(0.0, 0.05), {0.0, 1.0});
  const auto csv = trajectory_csv(traj);
  CHECK(csv.rfind("s,x_re,x_im,u_re,u_im,up_re,up_im,u_x_re,u_x_im,up_x_re,up_x_im\n", 0) == 0);
  std::size_t lines = 0;
  for (char ch : csv) lines += ch == '\n';
  CHECK(lines == traj.samples.size() + 1);
  const auto json = trajectory_json(traj);
  CHECK(json.find("\"components\"") != std::string::npos);
}

TEST_CASE("deterministic") {
  const auto a = integrate_linear(oscillator(), ComplexPath::segment(0.0, 1.0), {0.0, 1.0});
  const auto b = integrate_linear(oscillator(), ComplexPath::segment(0.0, 1.0), {0.0, 1.0});
  CHECK(trajectory_csv(a) == trajectory_csv(b));
}
