#include "heunlab/painleve.hpp"

#include <algorithm>
#include <cctype>

#include "heunlab/error.hpp"

namespace heunlab {

namespace {

RationalExpr S(const char* name) { return RationalExpr::var(name); }
RationalExpr half(const RationalExpr& e) { return e / 2; }

struct Symbols {
  RationalExpr z = S("z"), t = S("t"), lam = S("lambda"), mu = S("mu"), lp = S("lambda_p");
  RationalExpr k0 = S("kappa0"), k1 = S("kappa1"), th = S("theta"), kinf = S("kappa_inf"), kap = S("kappa");
  RationalExpr eta = S("eta"), e0 = S("eta0"), einf = S("eta_inf"), th0 = S("theta0"), thinf = S("theta_inf");
  RationalExpr a2 = S("alpha2");
};

const Symbols& syms() {
  static const Symbols s;
  return s;
}

/// d/dt of a jet expression when lambda, lambda_p depend on t through `chain`:
/// chain * (lambda_p d/dlambda + lambda_pp d/dlambda_p).
RationalExpr total_derivative(const RationalExpr& e, const RationalExpr& chain) {
  const RationalExpr lp = S("lambda_p");
  const RationalExpr lpp = S("lambda_pp");
  return differentiate(e, "t") + chain * (lp * differentiate(e, "lambda") + lpp * differentiate(e, "lambda_p"));
}

}  // namespace

std::string_view to_string(PainleveKind k) {
  switch (k) {
    case PainleveKind::P2: return "P2";
    case PainleveKind::P3Prime: return "P3prime";
    case PainleveKind::P4: return "P4";
    case PainleveKind::P5: return "P5";
    case PainleveKind::P6: return "P6";
  }
  return "?";
}

std::optional<PainleveKind> parse_painleve_kind(std::string_view name) {
  std::string s(name);
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "p3'" || s == "p3p") s = "p3prime";
  for (PainleveKind k : kPainleveKinds) {
    std::string n(to_string(k));
    std::transform(n.begin(), n.end(), n.begin(), [](unsigned char c) { return std::tolower(c); });
    if (n == s) return k;
  }
  return std::nullopt;
}

std::vector<std::string> painleve_parameter_names(PainleveKind k) {
  switch (k) {
    case PainleveKind::P2: return {"alpha2"};
    case PainleveKind::P3Prime: return {"eta0", "eta_inf", "theta0", "theta_inf"};
    case PainleveKind::P4: return {"kappa0", "theta_inf"};
    case PainleveKind::P5: return {"kappa0", "theta", "kappa_inf", "eta"};
    case PainleveKind::P6: return {"kappa0", "kappa1", "theta", "kappa_inf"};
  }
  return {};
}

HamiltonianSystem hamiltonian(PainleveKind k, const Conventions& conv) {
  const auto& s = syms();
  const auto& l = s.lam;
  const auto& m = s.mu;
  const auto& t = s.t;
  RationalExpr H;
  switch (k) {
    case PainleveKind::P6:
      H = (l * (l - 1) * (l - t) * m * m -
           (s.k0 * (l - 1) * (l - t) + s.k1 * l * (l - t) + (s.th - 1) * l * (l - 1)) * m + s.kap * (l - t)) /
          (t * (t - 1));
      break;
    case PainleveKind::P5:
      H = (l * (l - 1) * (l - 1) * m * m - (s.k0 * (l - 1) * (l - 1) + s.th * l * (l - 1) - s.eta * t * l) * m +
           s.kap * (l - 1)) /
          t;
      break;
    case PainleveKind::P4:
      H = 2 * l * m * m - (l * l + 2 * t * l + 2 * s.k0) * m + s.thinf * l;
      break;
    case PainleveKind::P3Prime:
      H = (l * l * m * m - (s.einf * l * l + s.th0 * l - s.e0 * t) * m + half(s.einf * (s.th0 + s.thinf)) * l) / t;
      break;
    case PainleveKind::P2: {
      const RationalExpr shift = conv.paper_literal_h2 ? 1 / t : t / 2;
      H = half(m * m) - (l * l + shift) * m - (s.a2 + frac(1, 2)) * l;
      break;
    }
  }
  return {H, differentiate(H, sym::mu()), -differentiate(H, sym::lambda())};
}

PainleveBridge bridge(PainleveKind k, const Conventions& conv) {
  const auto& s = syms();
  switch (k) {
    case PainleveKind::P6:
      return {{"alpha6", half(s.kinf * s.kinf)},
              {"beta6", -half(s.k0 * s.k0)},
              {"gamma6", half(s.k1 * s.k1)},
              {"delta6", half(1 - s.th * s.th)},
              {"kappa", ((s.k0 + s.k1 + s.th - 1).pow(2) - s.kinf * s.kinf) / 4}};
    case PainleveKind::P5:
      return {{"alpha5", half(s.kinf * s.kinf)},
              {"beta5", -half(s.k0 * s.k0)},
              {"gamma5", (1 + s.th) * s.eta},
              {"delta5", conv.paper_literal_p5 ? half(s.eta * s.eta) : -half(s.eta * s.eta)},
              {"kappa", ((s.k0 + s.th).pow(2) - s.kinf * s.kinf) / 4}};
    case PainleveKind::P4:
      return {{"alpha4", -s.k0 + 2 * s.thinf + 1}, {"beta4", -2 * s.k0 * s.k0}};
    case PainleveKind::P3Prime:
      return {{"alpha3", -4 * s.einf * s.thinf},
              {"beta3", 4 * s.e0 * (1 + s.th0)},
              {"gamma3", 4 * s.einf * s.einf},
              {"delta3", -4 * s.e0 * s.e0}};
    case PainleveKind::P2:
      return {{"alpha2", s.a2}};
  }
  return {};
}

HamiltonianSystem hamiltonian_bridged(PainleveKind k, const Conventions& conv) {
  HamiltonianSystem h = hamiltonian(k, conv);
  if (k != PainleveKind::P5 && k != PainleveKind::P6) return h;
  const Bindings kb{{"kappa", bridge(k, conv).at("kappa")}};
  return {substitute(h.H, kb), substitute(h.dlambda, kb), substitute(h.dmu, kb)};
}

RationalExpr p3prime_rhs_generic() {
  const auto& s = syms();
  const auto& l = s.lam;
  const auto& t = s.t;
  return s.lp * s.lp / l - s.lp / t + (S("alpha3") * l * l + S("gamma3") * l * l * l) / (4 * t * t) +
         S("beta3") / (4 * t) + S("delta3") / (4 * l);
}

RationalExpr p3_standard_rhs() {
  const auto& s = syms();
  const auto& l = s.lam;
  const auto& t = s.t;
  return s.lp * s.lp / l - s.lp / t + (S("alpha3") * l * l + S("beta3")) / t + S("gamma3") * l * l * l +
         S("delta3") / l;
}

RationalExpr painleve_rhs(PainleveKind k, const Conventions& conv) {
  const auto& s = syms();
  const auto& l = s.lam;
  const auto& t = s.t;
  const auto& lp = s.lp;
  const PainleveBridge b = bridge(k, conv);
  switch (k) {
    case PainleveKind::P6:
      return half(1 / l + 1 / (l - 1) + 1 / (l - t)) * lp * lp - (1 / t + 1 / (t - 1) + 1 / (l - t)) * lp +
             l * (l - 1) * (l - t) / (t * t * (t - 1) * (t - 1)) *
                 (b.at("alpha6") + b.at("beta6") * t / (l * l) + b.at("gamma6") * (t - 1) / ((l - 1) * (l - 1)) +
                  b.at("delta6") * t * (t - 1) / ((l - t) * (l - t)));
    case PainleveKind::P5:
      return (1 / (2 * l) + 1 / (l - 1)) * lp * lp - lp / t +
             (l - 1) * (l - 1) / (t * t) * (b.at("alpha5") * l + b.at("beta5") / l) + b.at("gamma5") * l / t +
             b.at("delta5") * l * (l + 1) / (l - 1);
    case PainleveKind::P4:
      return lp * lp / (2 * l) + frac(3, 2) * l * l * l + 4 * t * l * l + 2 * (t * t - b.at("alpha4")) * l +
             b.at("beta4") / l;
    case PainleveKind::P3Prime: {
      Bindings params;
      for (const auto& [name, value] : b) params.emplace(name, value);
      return substitute(p3prime_rhs_generic(), params);
    }
    case PainleveKind::P2:
      return 2 * l * l * l + t * l + s.a2;
  }
  return {};
}

LinearODE2 build_painleve_linear(const PainleveLinearSpec& spec, const Conventions& conv) {
  const auto& s = syms();
  const auto& z = s.z;
  const auto& l = s.lam;
  const auto& m = s.mu;
  const auto& t = s.t;
  const RationalExpr H = hamiltonian(spec.kind, conv).H;

  auto value_of = [&](const char* name) {
    auto it = spec.values.find(name);
    return it == spec.values.end() ? S(name) : it->second;
  };
  const RationalExpr tv = value_of("t");
  const RationalExpr lv = value_of("lambda");
  std::vector<RationalExpr> forbidden;
  switch (spec.kind) {
    case PainleveKind::P6:
      if (tv.is_zero() || (tv - 1).is_zero()) throw Error(ErrorCode::InvalidSpec, "P6 requires t not in {0, 1}");
      forbidden = {0, 1, tv};
      break;
    case PainleveKind::P5: forbidden = {0, 1}; break;
    case PainleveKind::P4:
    case PainleveKind::P3Prime: forbidden = {0}; break;
    case PainleveKind::P2: break;
  }
  for (const auto& f : forbidden) {
    if ((lv - f).is_zero()) {
      throw Error(ErrorCode::InvalidSpec, "lambda = " + lv.to_string() + " lies on the fixed singular locus");
    }
  }

  LinearODE2 ode;
  switch (spec.kind) {
    case PainleveKind::P6:
      ode = {(1 - s.k0) / z + (1 - s.k1) / (z - 1) + (1 - s.th) / (z - t) - 1 / (z - l),
             s.kap / (z * (z - 1)) - t * (t - 1) * H / (z * (z - 1) * (z - t)) +
                 l * (l - 1) * m / (z * (z - 1) * (z - l))};
      break;
    case PainleveKind::P5:
      ode = {(1 - s.k0) / z + s.eta * t / ((z - 1) * (z - 1)) + (1 - s.th) / (z - 1) - 1 / (z - l),
             s.kap / (z * (z - 1)) - t * H / (z * (z - 1) * (z - 1)) + l * (l - 1) * m / (z * (z - 1) * (z - l))};
      break;
    case PainleveKind::P4:
      ode = {(1 - s.k0) / z - (z + 2 * t) / 2 - 1 / (z - l), half(s.thinf) - H / (2 * z) + l * m / (z * (z - l))};
      break;
    case PainleveKind::P3Prime:
      ode = {s.e0 * t / (z * z) + (1 - s.th0) / z - s.einf - 1 / (z - l),
             s.einf * (s.th0 + s.thinf) / (2 * z) - t * H / (z * z) + l * m / (z * (z - l))};
      break;
    case PainleveKind::P2:
      ode = {-2 * z * z - t - 1 / (z - l), -(2 * s.a2 + 1) * z - 2 * H + m / (z - l)};
      break;
  }
  if (spec.values.empty()) return ode;
  return substitute(ode, spec.values);
}

VerificationOutcome verify_elimination(PainleveKind k, const Conventions& conv, IdentityMode mode,
                                       const RandomizedConfig& cfg) {
  const HamiltonianSystem h = hamiltonian_bridged(k, conv);
  const RationalExpr& Hm = h.dlambda;
  const RationalExpr Hl = -h.dmu;
  const RationalExpr lpp = differentiate(Hm, "t") + differentiate(Hm, "lambda") * Hm - differentiate(Hm, "mu") * Hl;
  const RationalExpr rhs = substitute(painleve_rhs(k, conv), {{"lambda_p", Hm}});
  VerificationOutcome out = identity_outcome(
      "eliminating mu from the " + std::string(to_string(k)) + " Hamiltonian system gives " + std::string(to_string(k)),
      lpp, rhs, mode, cfg);
  if (k == PainleveKind::P2) {
    out.predicted_failure = conv.paper_literal_h2;
    out.add("h2_convention", conv.paper_literal_h2 ? "literal (lambda^2 + 1/t) mu" : "(lambda^2 + t/2) mu");
  }
  if (k == PainleveKind::P5) {
    out.predicted_failure = conv.paper_literal_p5;
    out.add("delta5", conv.paper_literal_p5 ? "eta^2/2 (literal)" : "-eta^2/2");
  }
  if (k == PainleveKind::P5 || k == PainleveKind::P6) out.add("kappa", "bridge value");
  return out;
}

VerificationOutcome verify_p3_substitution(P3Variant variant, IdentityMode mode, const RandomizedConfig& cfg) {
  const auto& s = syms();
  const RationalExpr& t = s.t;
  const RationalExpr& l0 = s.lam;
  const RationalExpr l2 = S("lambda_pp");

  RationalExpr residual;  // linear in lambda_pp
  RationalExpr target;    // expected second derivative
  std::string claim;
  if (variant == P3Variant::Inverse) {
    // Lambda(tau) = s lambda(s), tau = s^2, with t playing the role of s.
    const RationalExpr L = t * l0;
    const RationalExpr L1 = total_derivative(L, 1) / (2 * t);
    const RationalExpr L2 = total_derivative(L1, 1) / (2 * t);
    residual = L2 - substitute(p3prime_rhs_generic(), {{"t", t * t}, {"lambda", L}, {"lambda_p", L1}});
    target = p3_standard_rhs();
    claim = "P3' under Lambda(tau) = s lambda(s), tau = s^2 is P3";
  } else {
    // y(t) = Lambda(t^2)/t; lambda, lambda_p, lambda_pp are Lambda and its tau-derivatives.
    const RationalExpr y = l0 / t;
    const RationalExpr y1 = total_derivative(y, 2 * t);
    const RationalExpr y2 = total_derivative(y1, 2 * t);
    residual = y2 - substitute(p3_standard_rhs(), {{"lambda", y}, {"lambda_p", y1}});
    RationalExpr p3p = p3prime_rhs_generic();
    if (variant == P3Variant::PerturbedDelta3) p3p = substitute(p3p, {{"delta3", S("delta3") + 1}});
    target = substitute(p3p, {{"t", t * t}});
    claim = "P3 under lambda(t) -> lambda(t^2)/t, tau = t^2 renamed t, is P3'";
  }
  const RationalExpr c = differentiate(residual, "lambda_pp");
  VerificationOutcome out = identity_outcome(claim, residual, c * (l2 - target), mode, cfg);
  out.add("leading_factor", c.to_string());
  if (variant == P3Variant::PerturbedDelta3) {
    out.predicted_failure = true;
    out.add("variant", "delta3 perturbed by 1");
  }
  if (variant == P3Variant::Inverse) out.add("variant", "inverse substitution");
  return out;
}

}  // namespace heunlab
