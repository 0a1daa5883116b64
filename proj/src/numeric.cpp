#include "heunlab/numeric.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

#include "heunlab/error.hpp"
#include "json.hpp"

namespace heunlab {

namespace {

Complex to_complex(const Rational& r) { return {to_double(r), 0.0}; }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string fmt(Complex c) { return "(" + fmt(c.real()) + ", " + fmt(c.imag()) + ")"; }

bool finite(const std::vector<Complex>& v) {
  return std::all_of(v.begin(), v.end(), [](Complex c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

// Five-point centered first derivative in x with uniform complex step h.
Complex five_point(const Complex f[5], Complex h) { return (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * h); }

bool uniform_window(const std::vector<Sample>& s, std::size_t i) {
  const Complex h = s[i + 1].x - s[i].x;
  for (std::size_t k = i - 2; k < i + 2; ++k) {
    if (std::abs((s[k + 1].x - s[k].x) - h) > 1e-9 * std::abs(h)) return false;
  }
  return true;
}

}  // namespace

// ------------------------------------------------------------ evaluation

double to_double(const Rational& r) {
  const std::size_t nb = mpz_sizeinbase(r.get_num_mpz_t(), 2);
  const std::size_t db = mpz_sizeinbase(r.get_den_mpz_t(), 2);
  if (nb <= 53 && db <= 53) return r.get_num().get_d() / r.get_den().get_d();
  return r.get_d();
}

ComplexEvaluator::ComplexEvaluator(const RationalExpr& e, std::vector<Var> args) : arity_(args.size()) {
  for (Var v : e.variables()) {
    if (std::find(args.begin(), args.end(), v) == args.end()) {
      throw Error(ErrorCode::UnknownVariable, "numeric evaluation needs a value for " + v.name());
    }
  }
  auto compile = [&](const MultiPoly& p) {
    std::vector<Term> out;
    for (const auto& term : p.terms()) {
      Term t{to_complex(term.coeff), std::vector<unsigned>(args.size(), 0)};
      for (std::size_t i = 0; i < args.size(); ++i) t.exps[i] = term.mono.exponent(args[i]);
      out.push_back(std::move(t));
    }
    return out;
  };
  num_ = compile(e.num());
  den_ = compile(e.den());
}

Complex ComplexEvaluator::eval(const std::vector<Term>& terms, const std::vector<Complex>& args) {
  Complex sum = 0;
  for (const auto& t : terms) {
    Complex v = t.coeff;
    for (std::size_t i = 0; i < args.size(); ++i) {
      for (unsigned k = 0; k < t.exps[i]; ++k) v *= args[i];
    }
    sum += v;
  }
  return sum;
}

Complex ComplexEvaluator::operator()(const std::vector<Complex>& args) const {
  if (args.size() != arity_) throw Error(ErrorCode::InvalidSpec, "wrong number of arguments");
  return eval(num_, args) / eval(den_, args);
}

Complex ComplexEvaluator::denominator(const std::vector<Complex>& args) const { return eval(den_, args); }

std::vector<Complex> complex_roots(const MultiPoly& p, Var v) {
  if (p.variables().size() > 1 || (!p.variables().empty() && p.variables()[0] != v)) {
    throw Error(ErrorCode::UnknownVariable, "complex_roots needs a univariate polynomial");
  }
  std::vector<Complex> c;
  for (const auto& k : p.coefficients_in(v)) c.push_back(to_complex(k.is_zero() ? Rational(0) : k.constant_value()));
  while (!c.empty() && c.back() == 0.0) c.pop_back();
  if (c.size() <= 1) return {};
  const std::size_t n = c.size() - 1;
  for (auto& x : c) x /= c.back();
  auto eval = [&](Complex z) {
    Complex r = 0;
    for (std::size_t i = c.size(); i-- > 0;) r = r * z + c[i];
    return r;
  };
  std::vector<Complex> roots(n);
  const Complex seed(0.4, 0.9);
  double radius = 1;
  for (std::size_t i = 0; i < n; ++i) radius = std::max(radius, std::abs(c[i]) + 1);
  for (std::size_t i = 0; i < n; ++i) roots[i] = radius * std::pow(seed, static_cast<double>(i));
  for (int iter = 0; iter < 2000; ++iter) {
    double change = 0;
    for (std::size_t i = 0; i < n; ++i) {
      Complex den = 1;
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) den *= roots[i] - roots[j];
      if (den == 0.0) den = 1e-300;
      const Complex step = eval(roots[i]) / den;
      roots[i] -= step;
      change = std::max(change, std::abs(step));
    }
    if (change < 1e-15) break;
  }
  return roots;
}

// ------------------------------------------------------------ paths

double ComplexPath::length() const {
  double L = 0;
  for (std::size_t i = 1; i < waypoints.size(); ++i) L += std::abs(waypoints[i] - waypoints[i - 1]);
  return L;
}

double ComplexPath::distance_to(Complex p) const {
  double best = waypoints.empty() ? INFINITY : std::abs(p - waypoints[0]);
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    const Complex a = waypoints[i - 1];
    const Complex d = waypoints[i] - a;
    double s = std::real((p - a) * std::conj(d)) / std::norm(d);
    s = std::clamp(s, 0.0, 1.0);
    best = std::min(best, std::abs(p - (a + s * d)));
  }
  return best;
}

void ComplexPath::validate() const {
  if (waypoints.size() < 2) throw Error(ErrorCode::InvalidSpec, "a path needs at least two waypoints");
  for (std::size_t i = 1; i < waypoints.size(); ++i) {
    if (waypoints[i] == waypoints[i - 1]) throw Error(ErrorCode::InvalidSpec, "repeated waypoint");
  }
}

namespace {

void check_points(const std::vector<Complex>& points, const ComplexPath& path, double min_distance,
                  const std::string& what) {
  for (Complex p : points) {
    const double d = path.distance_to(p);
    if (d < min_distance) {
      throw Error(ErrorCode::PathTooClose, "path passes within " + fmt(d) + " of " + what + " " + fmt(p));
    }
  }
}

}  // namespace

void check_path(const LinearODE2& ode, const ComplexPath& path, const IntegrationConfig& cfg) {
  path.validate();
  std::vector<Complex> poles;
  for (const auto* e : {&ode.p1, &ode.p2}) {
    auto r = complex_roots(e->den(), ode.var);
    poles.insert(poles.end(), r.begin(), r.end());
  }
  check_points(poles, path, cfg.min_singularity_distance, "singular point");
}

// ------------------------------------------------------------ integrator

ODETrajectory integrate_system(const OdeRhs& f, const ComplexPath& path, std::vector<Complex> y0,
                               std::vector<std::string> components, const IntegrationConfig& cfg,
                               std::optional<double> pole_threshold) {
  if (!(cfg.abs_tol > 0) || !(cfg.rel_tol > 0) || !(cfg.output_step > 0)) {
    throw Error(ErrorCode::InvalidSpec, "tolerances and output step must be positive");
  }
  path.validate();
  // Dormand-Prince 5(4)
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                          b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                          e6 = 22.0 / 525, e7 = -1.0 / 40;

  const std::size_t n = y0.size();
  ODETrajectory out;
  out.components = std::move(components);
  std::vector<Complex> y = std::move(y0), k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), ynew(n);

  auto record = [&](double s, Complex x, const std::vector<Complex>& state, const std::vector<Complex>& d) {
    out.samples.push_back({s, x, state, d});
  };
  auto blown = [&](const std::vector<Complex>& v) {
    if (!pole_threshold) return false;
    if (!finite(v)) return true;
    return std::any_of(v.begin(), v.end(), [&](Complex c) { return std::abs(c) > *pole_threshold; });
  };

  f(path.waypoints[0], y, k1);
  if (!finite(k1)) throw Error(ErrorCode::PathTooClose, "right-hand side is not finite at the start");
  record(0, path.waypoints[0], y, k1);

  double s_base = 0;
  double h = 0;
  double err_prev = 1e-4;
  for (std::size_t seg = 1; seg < path.waypoints.size(); ++seg) {
    const Complex a = path.waypoints[seg - 1];
    const Complex b = path.waypoints[seg];
    const double L = std::abs(b - a);
    const Complex dir = (b - a) / L;
    const auto pieces = static_cast<long>(std::ceil(L / cfg.output_step - 1e-9));
    if (h == 0) h = std::min(L / pieces, 1e-3);
    // dy/ds = dir * f(x, y); k-vectors below hold f, scaled by dir at use.
    double s = 0;
    for (long piece = 1; piece <= pieces; ++piece) {
      const double target = L * static_cast<double>(piece) / static_cast<double>(pieces);
      while (s < target) {
        if (++out.steps > cfg.max_steps) throw Error(ErrorCode::StiffnessAbort, "step budget exhausted");
        const bool clipped = s + h >= target;
        const double hs = clipped ? target - s : h;
        const Complex hd = hs * dir;
        const Complex x = a + s * dir;
        auto stage = [&](std::vector<Complex>& k, double c, std::initializer_list<std::pair<double, const std::vector<Complex>*>> terms) {
          for (std::size_t i = 0; i < n; ++i) {
            Complex acc = y[i];
            for (const auto& [coef, kv] : terms) acc += hd * coef * (*kv)[i];
            tmp[i] = acc;
          }
          f(x + c * hd, tmp, k);
        };
        stage(k2, 1.0 / 5, {{a21, &k1}});
        stage(k3, 3.0 / 10, {{a31, &k1}, {a32, &k2}});
        stage(k4, 4.0 / 5, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
        stage(k5, 8.0 / 9, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
        stage(k6, 1.0, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});
        for (std::size_t i = 0; i < n; ++i) {
          ynew[i] = y[i] + hd * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        }
        f(x + hd, ynew, k7);
        double err = 0;
        for (std::size_t i = 0; i < n; ++i) {
          const Complex e = hd * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
          const double sc = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
          err += std::norm(e) / (sc * sc);
        }
        err = std::sqrt(err / static_cast<double>(n));
        if (!std::isfinite(err) || !finite(k7)) err = 1e10;

        if (err <= 1.0) {
          if (blown(ynew)) {
            out.pole = true;
            out.pole_near = x + hd;
            return out;
          }
          s += hs;
          y = ynew;
          k1 = k7;
          out.error_estimate = std::max(out.error_estimate, err);
          double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5) * std::pow(err_prev, 0.4 / 5);
          fac = std::clamp(fac, 0.2, 5.0);
          err_prev = std::max(err, 1e-4);
          // a clipped step says nothing about the natural step size
          if (!clipped || hs >= h) h *= fac;
        } else {
          h *= std::clamp(0.9 * std::pow(err, -1.0 / 5), 0.1, 0.9);
        }
        if (h < 1e-14 * std::max(1.0, L)) {
          if (pole_threshold) {
            out.pole = true;
            out.pole_near = x;
            return out;
          }
          throw Error(ErrorCode::StiffnessAbort, "step size underflow near " + fmt(x));
        }
      }
      s = target;
      record(s_base + s, piece == pieces ? b : a + s * dir, y, k1);
    }
    s_base += L;
  }
  return out;
}

// ------------------------------------------------------------ linear equations

ODETrajectory integrate_linear(const LinearODE2& ode, const ComplexPath& path, std::pair<Complex, Complex> init,
                               const IntegrationConfig& cfg) {
  check_path(ode, path, cfg);
  const ComplexEvaluator p1(ode.p1, {ode.var});
  const ComplexEvaluator p2(ode.p2, {ode.var});
  auto f = [&](Complex z, const std::vector<Complex>& y, std::vector<Complex>& dy) {
    dy[0] = y[1];
    dy[1] = -p1(z) * y[1] - p2(z) * y[0];
  };
  return integrate_system(f, path, {init.first, init.second}, {"u", "up"}, cfg);
}

namespace {

// |second + p1 first + p2 value| relative to the largest term, max over uniform windows.
double second_order_residual(const ComplexEvaluator& p1, const ComplexEvaluator& p2, const std::vector<Sample>& s,
                             std::size_t value_index) {
  double worst = 0;
  bool any = false;
  for (std::size_t i = 2; i + 2 < s.size(); ++i) {
    if (!uniform_window(s, i)) continue;
    Complex w[5];
    for (int k = 0; k < 5; ++k) w[k] = s[i - 2 + k].dy[value_index];
    const Complex second = five_point(w, s[i + 1].x - s[i].x);
    const Complex first = s[i].dy[value_index];
    const Complex value = s[i].y[value_index];
    const Complex a = p1(s[i].x) * first;
    const Complex b = p2(s[i].x) * value;
    const double scale = std::max({std::abs(second), std::abs(a), std::abs(b), 1e-300});
    worst = std::max(worst, std::abs(second + a + b) / scale);
    any = true;
  }
  if (!any) throw Error(ErrorCode::InsufficientSamples, "no uniform five-sample window");
  return worst;
}

}  // namespace

double linear_residual(const LinearODE2& ode, const ODETrajectory& traj) {
  if (traj.samples.size() < 5) throw Error(ErrorCode::InsufficientSamples, "need at least 5 samples");
  const ComplexEvaluator p1(ode.p1, {ode.var});
  const ComplexEvaluator p2(ode.p2, {ode.var});
  // u' is dy[0]; u'' is differenced from the u' column (dy[0]) directly.
  return second_order_residual(p1, p2, traj.samples, 0);
}

double verify_derivative_numeric(const HeunSpec& spec, const ComplexPath& path, std::pair<Complex, Complex> init,
                                 const IntegrationConfig& cfg) {
  const LinearODE2 heun = build_heun(spec);
  const LinearODE2 deriv = build_heun_derivative(spec);
  check_path(deriv, path, cfg);
  const ODETrajectory traj = integrate_linear(heun, path, init, cfg);
  // Re-state the samples in terms of v = u': value v, derivative v' = u''.
  std::vector<Sample> vs;
  vs.reserve(traj.samples.size());
  for (const auto& s : traj.samples) vs.push_back({s.s, s.x, {s.y[1]}, {s.dy[1]}});
  const ComplexEvaluator P1(deriv.p1, {deriv.var});
  const ComplexEvaluator P2(deriv.p2, {deriv.var});
  if (vs.size() < 5) throw Error(ErrorCode::InsufficientSamples, "path too short for the residual");
  return second_order_residual(P1, P2, vs, 0);
}

// ------------------------------------------------------------ Painleve side

std::vector<Complex> fixed_t_singularities(const RationalExpr& e) {
  const Var t = sym::t();
  MultiPoly content;
  for (const auto& c : e.den().coefficients_wrt({sym::lambda(), sym::mu()})) content = gcd(content, c);
  for (Var v : content.variables()) {
    if (v != t) throw Error(ErrorCode::UnknownVariable, "parameters must be numeric: " + v.name());
  }
  return complex_roots(content, t);
}

namespace {

bool numeric_in(const RationalExpr& e, std::initializer_list<Var> allowed) {
  for (Var v : e.variables()) {
    if (std::find(allowed.begin(), allowed.end(), v) == allowed.end()) return false;
  }
  return true;
}

void check_locus(const RationalExpr& e, const std::vector<Complex>& args, const std::string& what) {
  const ComplexEvaluator ev(e, {sym::lambda(), sym::t()});
  if (std::abs(ev.denominator(args)) < 1e-12) {
    throw Error(ErrorCode::InvalidSpec, what + " is singular at the initial point");
  }
}

}  // namespace

ODETrajectory integrate_riccati(const MatchingCase& c, const ComplexPath& t_path, Complex lambda0,
                                const IntegrationConfig& cfg) {
  if (!numeric_in(c.riccati_rhs, {sym::lambda(), sym::t()}) || !numeric_in(c.mu_constraint, {sym::lambda(), sym::t()})) {
    throw Error(ErrorCode::InvalidSpec, "Riccati integration needs numeric parameters");
  }
  if (!c.condition.is_zero()) {
    throw Error(ErrorCode::InvalidSpec, "condition " + c.condition.to_string() + " does not vanish");
  }
  t_path.validate();
  check_points(fixed_t_singularities(c.riccati_rhs), t_path, cfg.min_singularity_distance, "fixed singularity t =");
  check_points(fixed_t_singularities(c.mu_constraint), t_path, cfg.min_singularity_distance, "fixed singularity t =");
  const std::vector<Complex> start{lambda0, t_path.waypoints[0]};
  check_locus(c.mu_constraint, start, "the mu-constraint");
  check_locus(c.riccati_rhs, start, "the Riccati equation");
  const ComplexEvaluator rhs(c.riccati_rhs, {sym::lambda(), sym::t()});
  auto f = [&](Complex t, const std::vector<Complex>& y, std::vector<Complex>& dy) { dy[0] = rhs({y[0], t}); };
  return integrate_system(f, t_path, {lambda0}, {"lambda"}, cfg, kPoleThreshold);
}

ODETrajectory integrate_hamiltonian(PainleveKind kind, const Bindings& params, std::pair<Complex, Complex> init,
                                    const ComplexPath& t_path, const IntegrationConfig& cfg,
                                    const Conventions& conv) {
  const RationalExpr H = substitute(hamiltonian_bridged(kind, conv).H, params);
  if (!numeric_in(H, {sym::lambda(), sym::mu(), sym::t()})) {
    throw Error(ErrorCode::InvalidSpec, "Hamiltonian integration needs numeric values for every parameter");
  }
  t_path.validate();
  check_points(fixed_t_singularities(H), t_path, cfg.min_singularity_distance, "fixed singularity t =");
  const std::vector<Var> args{sym::lambda(), sym::mu(), sym::t()};
  const ComplexEvaluator Hm(differentiate(H, sym::mu()), args);
  const ComplexEvaluator Hl(differentiate(H, sym::lambda()), args);
  const std::vector<Complex> start{init.first, init.second, t_path.waypoints[0]};
  if (std::abs(ComplexEvaluator(H, args).denominator(start)) < 1e-12) {
    throw Error(ErrorCode::InvalidSpec, "initial point on the singular locus of the Hamiltonian");
  }
  auto f = [&](Complex t, const std::vector<Complex>& y, std::vector<Complex>& dy) {
    const std::vector<Complex> a{y[0], y[1], t};
    dy[0] = Hm(a);
    dy[1] = -Hl(a);
  };
  return integrate_system(f, t_path, {init.first, init.second}, {"lambda", "mu"}, cfg, kPoleThreshold);
}

namespace {

// Local cubic (four-point Lagrange) interpolation of column values at parameter s.
Complex cubic_at(const std::vector<double>& ss, const std::vector<Complex>& vals, double s) {
  const std::size_t n = ss.size();
  auto it = std::upper_bound(ss.begin(), ss.end(), s);
  std::size_t j = it == ss.begin() ? 0 : static_cast<std::size_t>(it - ss.begin()) - 1;
  std::size_t lo = j >= 1 ? j - 1 : 0;
  lo = std::min(lo, n - 4);
  Complex acc = 0;
  for (std::size_t a = lo; a < lo + 4; ++a) {
    double w = 1;
    for (std::size_t b = lo; b < lo + 4; ++b)
      if (b != a) w *= (s - ss[b]) / (ss[a] - ss[b]);
    acc += w * vals[a];
  }
  return acc;
}

std::vector<Sample> uniform_resample(const std::vector<Sample>& in, std::size_t component) {
  const Complex dir = in.back().x - in.front().x;
  const double L = std::abs(dir);
  if (L == 0) throw Error(ErrorCode::InvalidSpec, "degenerate trajectory");
  for (const auto& s : in) {
    // straight path only: every point must lie on the chord
    const double off = std::abs(std::imag((s.x - in.front().x) * std::conj(dir))) / L;
    if (off > 1e-9 * std::max(1.0, L)) throw Error(ErrorCode::InvalidSpec, "resampling needs a straight path");
  }
  std::vector<double> ss;
  std::vector<Complex> value, deriv;
  for (const auto& s : in) {
    const double p = std::real((s.x - in.front().x) * std::conj(dir)) / L;
    if (!ss.empty() && p <= ss.back()) throw Error(ErrorCode::InvalidSpec, "samples must be ordered along the path");
    ss.push_back(p);
    value.push_back(s.y[component]);
    deriv.push_back(s.dy[component]);
  }
  std::vector<Sample> out;
  const std::size_t n = in.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double p = L * static_cast<double>(i) / static_cast<double>(n - 1);
    const Complex x = in.front().x + p * dir / L;
    out.push_back({p, x, {cubic_at(ss, value, p)}, {cubic_at(ss, deriv, p)}});
  }
  return out;
}

}  // namespace

double painleve_residual(PainleveKind kind, const ODETrajectory& traj, const Bindings& params,
                         const Conventions& conv, std::size_t component) {
  if (traj.samples.size() < 5) {
    throw Error(ErrorCode::InsufficientSamples,
                "painleve_residual needs at least 5 samples, got " + std::to_string(traj.samples.size()));
  }
  const RationalExpr rhs_expr = substitute(painleve_rhs(kind, conv), params);
  const Var lp = Var::of("lambda_p");
  if (!numeric_in(rhs_expr, {sym::lambda(), lp, sym::t()})) {
    throw Error(ErrorCode::InvalidSpec, "painleve_residual needs numeric values for every parameter");
  }
  const ComplexEvaluator rhs(rhs_expr, {sym::lambda(), lp, sym::t()});

  std::vector<Sample> s;
  bool uniform = true;
  for (std::size_t i = 2; i + 2 < traj.samples.size() && uniform; ++i) uniform = uniform_window(traj.samples, i);
  if (uniform) {
    for (const auto& x : traj.samples) s.push_back({x.s, x.x, {x.y[component]}, {x.dy[component]}});
  } else {
    s = uniform_resample(traj.samples, component);
  }
  double worst = 0;
  for (std::size_t i = 2; i + 2 < s.size(); ++i) {
    const Complex w[5] = {s[i - 2].dy[0], s[i - 1].dy[0], s[i].dy[0], s[i + 1].dy[0], s[i + 2].dy[0]};
    const Complex second = five_point(w, s[i + 1].x - s[i].x);
    worst = std::max(worst, std::abs(second - rhs({s[i].y[0], s[i].dy[0], s[i].x})));
  }
  return worst;
}

// ------------------------------------------------------------ export

std::string trajectory_csv(const ODETrajectory& traj) {
  std::ostringstream os;
  os.precision(17);
  os << "s,x_re,x_im";
  for (const auto& c : traj.components) os << ',' << c << "_re," << c << "_im";
  for (const auto& c : traj.components) os << ',' << c << "_x_re," << c << "_x_im";
  os << '\n';
  for (const auto& s : traj.samples) {
    os << s.s << ',' << s.x.real() << ',' << s.x.imag();
    for (Complex v : s.y) os << ',' << v.real() << ',' << v.imag();
    for (Complex v : s.dy) os << ',' << v.real() << ',' << v.imag();
    os << '\n';
  }
  return os.str();
}

std::string trajectory_json(const ODETrajectory& traj) {
  using nlohmann::json;
  auto pair = [](Complex c) { return json::array({c.real(), c.imag()}); };
  json samples = json::array();
  for (const auto& s : traj.samples) {
    json y = json::array(), dy = json::array();
    for (Complex v : s.y) y.push_back(pair(v));
    for (Complex v : s.dy) dy.push_back(pair(v));
    samples.push_back({{"s", s.s}, {"x", pair(s.x)}, {"y", y}, {"dy", dy}});
  }
  json j{{"components", traj.components},
         {"error_estimate", traj.error_estimate},
         {"steps", traj.steps},
         {"pole", traj.pole},
         {"samples", samples}};
  if (traj.pole_near) j["pole_near"] = pair(*traj.pole_near);
  return j.dump(2);
}

// ------------------------------------------------------------ standard sets

std::vector<DerivativeExample> standard_derivative_examples() {
  auto spec = [](HeunFamily f, std::initializer_list<std::pair<const char*, RationalExpr>> values) {
    HeunSpec s{f, {}, true};
    for (const auto& [k, v] : values) s.params.set(k, v);
    return s;
  };
  const ComplexPath path = ComplexPath::segment({0.25, 0.5}, {1.5, 0.5});
  const std::pair<Complex, Complex> init{1.0, 0.5};
  std::vector<DerivativeExample> out;
  out.push_back({spec(HeunFamily::General,
                      {{"alpha", 2}, {"beta", 1}, {"gamma", 1}, {"delta", 1}, {"epsilon", 2}, {"q", 1}, {"t", 2}}),
                 path, init});
  for (HeunFamily f : {HeunFamily::Confluent, HeunFamily::DoubleConfluent, HeunFamily::BiConfluent}) {
    out.push_back({spec(f, {{"alpha", 2}, {"gamma", 1}, {"delta", 1}, {"epsilon", 1}, {"q", 1}}), path, init});
  }
  out.push_back({spec(HeunFamily::TriConfluent,
                      {{"alpha", 1}, {"gamma", -1}, {"delta", 0}, {"epsilon", -2}, {"q", frac(1, 2)}}),
                 ComplexPath::segment(1.0, 2.25), init});
  return out;
}

std::vector<HamiltonianExample> standard_hamiltonian_examples() {
  using P = PainleveKind;
  return {
      // lambda reaches about 12 at t = 1, a movable pole lies just beyond
      {P::P2, {{"alpha2", 2}}, {1.0, 1.0}, ComplexPath::segment(0.0, 1.0), 1.0 / 8192},
      {P::P3Prime,
       {{"eta0", 1}, {"eta_inf", 1}, {"theta0", frac(1, 3)}, {"theta_inf", frac(1, 5)}},
       {1.0, 0.5},
       ComplexPath::segment(1.0, 1.5)},
      {P::P4, {{"kappa0", frac(1, 3)}, {"theta_inf", frac(1, 5)}}, {1.0, 0.5}, ComplexPath::segment(1.0, 1.5)},
      {P::P5,
       {{"kappa0", frac(1, 3)}, {"kappa_inf", frac(1, 5)}, {"theta", frac(1, 7)}, {"eta", 1}},
       {2.0, 0.5},
       ComplexPath::segment(1.0, 1.5)},
      {P::P6,
       {{"kappa0", frac(1, 3)}, {"kappa1", frac(1, 5)}, {"theta", frac(1, 7)}, {"kappa_inf", frac(1, 11)}},
       {0.5, 1.0 / 3},
       ComplexPath::segment(2.0, 2.5)},
  };
}

std::vector<RiccatiExample> standard_riccati_examples() {
  return {
      {PainleveKind::P2, {{"alpha2", frac(1, 2)}}, 0.0, ComplexPath::segment(0.0, 1.0)},
      // from lambda(1) = +1 this Riccati equation blows up near t = 1.49
      {PainleveKind::P4, {{"theta_inf", -1}, {"kappa0", frac(1, 4)}}, -1.0, ComplexPath::segment(1.0, 2.0)},
  };
}

}  // namespace heunlab
