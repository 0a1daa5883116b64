#include "heunlab/heun.hpp"

#include "heunlab/error.hpp"

namespace heunlab {

namespace {

RationalExpr Z() { return RationalExpr::var(sym::z()); }

bool numeric_in(const RationalExpr& e, const Rational& value) { return e.is_constant() && e.constant_value() == value; }

void check_general(const HeunSpec& spec) {
  const auto& p = spec.params;
  if (numeric_in(p.t, 0) || numeric_in(p.t, 1)) {
    throw Error(ErrorCode::SingularConfluence, "t = " + p.t.to_string() + " merges two singular points");
  }
  if (spec.enforce_fuchsian && !fuchsian_holds(p)) {
    throw Error(ErrorCode::FuchsianViolation,
                "1 + alpha + beta - gamma - delta - epsilon = " +
                    (1 + p.alpha + p.beta - p.gamma - p.delta - p.epsilon).to_string());
  }
}

/// alpha beta z - q for General, alpha z - q otherwise.
RationalExpr extra_factor(const HeunSpec& spec) {
  const auto& p = spec.params;
  const RationalExpr a = spec.family == HeunFamily::General ? p.alpha * p.beta : p.alpha;
  const RationalExpr f = a * Z() - p.q;
  if (f.is_zero()) {
    throw Error(ErrorCode::DegenerateDerivativeForm,
                "the extra-singularity factor vanishes identically (alpha = q = 0)");
  }
  return f;
}

RationalExpr residue_at(const RationalExpr& p1, const RationalExpr& point) {
  const RationalExpr z = Z();
  return substitute((z - point) * p1, {{"z", point}});
}

}  // namespace

std::string_view to_string(HeunFamily f) {
  switch (f) {
    case HeunFamily::General: return "general";
    case HeunFamily::Confluent: return "confluent";
    case HeunFamily::DoubleConfluent: return "double-confluent";
    case HeunFamily::BiConfluent: return "bi-confluent";
    case HeunFamily::TriConfluent: return "tri-confluent";
  }
  return "?";
}

std::optional<HeunFamily> parse_heun_family(std::string_view name) {
  for (HeunFamily f : kHeunFamilies) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

std::vector<std::string> heun_parameter_names(HeunFamily f) {
  if (f == HeunFamily::General) return {"alpha", "beta", "gamma", "delta", "epsilon", "q", "t"};
  return {"alpha", "gamma", "delta", "epsilon", "q"};
}

void HeunParams::set(const std::string& name, RationalExpr value) {
  if (name == "gamma") gamma = std::move(value);
  else if (name == "delta") delta = std::move(value);
  else if (name == "epsilon") epsilon = std::move(value);
  else if (name == "alpha") alpha = std::move(value);
  else if (name == "beta") beta = std::move(value);
  else if (name == "q") q = std::move(value);
  else if (name == "t") t = std::move(value);
  else throw Error(ErrorCode::InvalidSpec, "unknown Heun parameter '" + name + "'");
}

const RationalExpr& HeunParams::get(const std::string& name) const {
  if (name == "gamma") return gamma;
  if (name == "delta") return delta;
  if (name == "epsilon") return epsilon;
  if (name == "alpha") return alpha;
  if (name == "beta") return beta;
  if (name == "q") return q;
  if (name == "t") return t;
  throw Error(ErrorCode::InvalidSpec, "unknown Heun parameter '" + name + "'");
}

Bindings HeunParams::as_bindings(HeunFamily f) const {
  Bindings out;
  for (const auto& name : heun_parameter_names(f)) out.emplace(name, get(name));
  return out;
}

HeunSpec HeunSpec::symbolic(HeunFamily f) {
  HeunSpec spec{f, {}, true};
  if (f == HeunFamily::General) {
    auto& p = spec.params;
    p.epsilon = fuchsian_epsilon(p.alpha, p.beta, p.gamma, p.delta);
  }
  return spec;
}

RationalExpr fuchsian_epsilon(const RationalExpr& alpha, const RationalExpr& beta, const RationalExpr& gamma,
                              const RationalExpr& delta) {
  return 1 + alpha + beta - gamma - delta;
}

bool fuchsian_holds(const HeunParams& p) {
  return p.epsilon == fuchsian_epsilon(p.alpha, p.beta, p.gamma, p.delta);
}

LinearODE2 build_heun(const HeunSpec& spec) {
  const auto& p = spec.params;
  const RationalExpr z = Z();
  switch (spec.family) {
    case HeunFamily::General:
      check_general(spec);
      return {p.gamma / z + p.delta / (z - 1) + p.epsilon / (z - p.t),
              (p.alpha * p.beta * z - p.q) / (z * (z - 1) * (z - p.t))};
    case HeunFamily::Confluent:
      return {p.gamma / z + p.delta / (z - 1) + p.epsilon, (p.alpha * z - p.q) / (z * (z - 1))};
    case HeunFamily::DoubleConfluent:
      return {p.gamma / (z * z) + p.delta / z + p.epsilon, (p.alpha * z - p.q) / (z * z)};
    case HeunFamily::BiConfluent:
      return {p.gamma / z + p.delta + p.epsilon * z, (p.alpha * z - p.q) / z};
    case HeunFamily::TriConfluent:
      return {p.gamma + p.delta * z + p.epsilon * z * z, p.alpha * z - p.q};
  }
  throw Error(ErrorCode::InvalidSpec, "unknown Heun family");
}

LinearODE2 build_heun_derivative(const HeunSpec& spec) {
  const auto& p = spec.params;
  const RationalExpr z = Z();
  const RationalExpr& al = p.alpha;
  const RationalExpr& ga = p.gamma;
  const RationalExpr& de = p.delta;
  const RationalExpr& ep = p.epsilon;
  const RationalExpr& q = p.q;
  const RationalExpr extra = extra_factor(spec);
  switch (spec.family) {
    case HeunFamily::General: {
      check_general(spec);
      const RationalExpr& t = p.t;
      const RationalExpr ab = al * p.beta;
      const RationalExpr f = z * (ab * z - 2 * q) * (ab + ga + de + ep) + (q * q + q * (ga + t * (ga + de) + ep) - ab * ga * t);
      return {(ga + 1) / z + (de + 1) / (z - 1) + (ep + 1) / (z - t) - ab / extra,
              f / (z * (z - 1) * (z - t) * extra)};
    }
    case HeunFamily::Confluent: {
      const RationalExpr g = (al + ep) * (al * z * z - 2 * q * z) + (q * q - (ga + de - ep) * q + al * ga);
      return {(ga + 1) / z + (de + 1) / (z - 1) + ep - al / extra, g / (z * (z - 1) * extra)};
    }
    case HeunFamily::DoubleConfluent: {
      const RationalExpr h = (al + ep) * (al * z * z - 2 * q * z) + (q * q - de * q - al * ga);
      return {ga / (z * z) + (de + 2) / z + ep - al / extra, h / (z * z * extra)};
    }
    case HeunFamily::BiConfluent: {
      const RationalExpr k = (al + ep) * z * (al * z - 2 * q) + (q * q - de * q - al * ga);
      return {(ga + 1) / z + de + ep * z - al / extra, k / (z * extra)};
    }
    case HeunFamily::TriConfluent: {
      const RationalExpr pz = (al + ep) * (al * z * z - 2 * q * z) + (q * q - de * q - al * ga);
      return {ga + de * z + ep * z * z - al / extra, pz / extra};
    }
  }
  throw Error(ErrorCode::InvalidSpec, "unknown Heun family");
}

std::string_view to_string(DegenerationCase c) {
  switch (c) {
    case DegenerationCase::QZero: return "q=0";
    case DegenerationCase::QAlphaBeta: return "q=alpha*beta";
    case DegenerationCase::QAlphaBetaT: return "q=alpha*beta*t";
    case DegenerationCase::AlphaBetaZero: return "alpha*beta=0";
  }
  return "?";
}

HeunSpec impose_degeneration(HeunSpec spec, DegenerationCase c) {
  auto& p = spec.params;
  const bool tied = spec.family == HeunFamily::General && fuchsian_holds(p);
  switch (c) {
    case DegenerationCase::QZero: p.q = 0; break;
    case DegenerationCase::QAlphaBeta: p.q = p.alpha * p.beta; break;
    case DegenerationCase::QAlphaBetaT: p.q = p.alpha * p.beta * p.t; break;
    case DegenerationCase::AlphaBetaZero: p.alpha = 0; break;
  }
  if (tied) p.epsilon = fuchsian_epsilon(p.alpha, p.beta, p.gamma, p.delta);
  return spec;
}

DegenerationResult degeneration_case(const HeunSpec& spec, DegenerationCase c) {
  if (spec.family != HeunFamily::General) {
    throw Error(ErrorCode::InvalidSpec, "degeneration cases are defined for the general Heun equation");
  }
  const auto& p = spec.params;
  const RationalExpr ab = p.alpha * p.beta;
  RationalExpr condition;
  std::optional<RationalExpr> merged;  // singular point whose exponent-1 root is removed
  switch (c) {
    case DegenerationCase::QZero:
      condition = p.q;
      merged = RationalExpr(0);
      break;
    case DegenerationCase::QAlphaBeta:
      condition = p.q - ab;
      merged = RationalExpr(1);
      break;
    case DegenerationCase::QAlphaBetaT:
      condition = p.q - ab * p.t;
      merged = p.t;
      break;
    case DegenerationCase::AlphaBetaZero: condition = ab; break;
  }
  if (!condition.is_zero()) {
    throw Error(ErrorCode::CaseMismatch,
                std::string(to_string(c)) + " does not hold: residual " + condition.to_string());
  }

  DegenerationResult out;
  out.cancelled = derivative_equation(build_heun(spec));
  if (merged) out.gauge = GaugeSpec::single(Mobius::identity(), Z() - *merged, -1);
  out.normalized = gauge_mobius_transform(out.cancelled, out.gauge);
  if (auto shifted = match_general_heun(out.normalized, p.t)) {
    out.matched = true;
    out.shifted = *shifted;
  }
  return out;
}

std::optional<HeunParams> match_general_heun(const LinearODE2& ode, const RationalExpr& t) {
  const RationalExpr z = Z();
  HeunParams h;
  try {
    h.gamma = residue_at(ode.p1, 0);
    h.delta = residue_at(ode.p1, 1);
    h.epsilon = residue_at(ode.p1, t);
  } catch (const Error&) {
    return std::nullopt;  // pole of order > 1
  }
  if (ode.p1 != h.gamma / z + h.delta / (z - 1) + h.epsilon / (z - t)) return std::nullopt;

  const RationalExpr n = ode.p2 * z * (z - 1) * (z - t);
  if (n.den().depends_on(sym::z()) || n.num().degree_in(sym::z()) > 1) return std::nullopt;
  const auto coeffs = n.num().coefficients_in(sym::z());
  const RationalExpr product = coeffs.size() > 1 ? RationalExpr(coeffs[1], n.den()) : RationalExpr(0);
  h.q = -RationalExpr(coeffs.empty() ? MultiPoly() : coeffs[0], n.den());

  // alpha, beta: roots of x^2 - s x + product with s from the Fuchsian relation.
  const RationalExpr s = h.gamma + h.delta + h.epsilon - 1;
  const RationalExpr disc = s * s - 4 * product;
  const auto rn = try_sqrt(disc.num());
  const auto rd = try_sqrt(disc.den());
  if (!rn || !rd) return std::nullopt;
  const RationalExpr root(*rn, *rd);
  h.alpha = (s + root) / 2;
  h.beta = (s - root) / 2;
  h.t = t;
  return h;
}

}  // namespace heunlab
