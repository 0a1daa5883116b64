#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "heunlab/heun.hpp"
#include "heunlab/matching.hpp"
#include "heunlab/painleve.hpp"

namespace heunlab {

using Complex = std::complex<double>;

/// Nearest double when numerator and denominator are exact doubles (mpq's get_d truncates).
double to_double(const Rational& r);

/// Double-precision evaluation of a rational expression in a fixed list of variables.
/// Every other variable must already be substituted away.
class ComplexEvaluator {
 public:
  ComplexEvaluator() = default;
  ComplexEvaluator(const RationalExpr& e, std::vector<Var> args);

  Complex operator()(const std::vector<Complex>& args) const;
  Complex operator()(Complex a) const { return (*this)(std::vector<Complex>{a}); }
  /// Denominator alone; zero on a pole.
  Complex denominator(const std::vector<Complex>& args) const;

 private:
  struct Term {
    Complex coeff;
    std::vector<unsigned> exps;  // one per arg
  };
  static Complex eval(const std::vector<Term>& terms, const std::vector<Complex>& args);
  std::vector<Term> num_;
  std::vector<Term> den_;
  std::size_t arity_ = 0;
};

/// Complex roots of a univariate polynomial (Durand-Kerner); constant input gives none.
std::vector<Complex> complex_roots(const MultiPoly& p, Var v);

/// Polyline through the waypoints.
struct ComplexPath {
  std::vector<Complex> waypoints;

  static ComplexPath segment(Complex a, Complex b) { return {{a, b}}; }
  double length() const;
  double distance_to(Complex p) const;
  /// Throws InvalidSpec for fewer than two waypoints or repeated consecutive waypoints.
  void validate() const;
};

struct IntegrationConfig {
  double abs_tol = 1e-12;
  double rel_tol = 1e-10;
  long max_steps = 2'000'000;
  double min_singularity_distance = 1e-2;
  /// Samples are recorded on a uniform grid of at most this spacing per path segment.
  double output_step = 1.0 / 1024;
};

struct Sample {
  double s = 0;  ///< arclength along the path
  Complex x;     ///< z or t
  std::vector<Complex> y;
  std::vector<Complex> dy;  ///< dy/dx
};

struct ODETrajectory {
  std::vector<std::string> components;
  std::vector<Sample> samples;
  double error_estimate = 0;  ///< largest accepted local error norm (in tolerance units)
  long steps = 0;
  /// Set when a component exceeded the movable-pole threshold; samples stop before it.
  bool pole = false;
  std::optional<Complex> pole_near;
};

constexpr double kPoleThreshold = 1e8;

using OdeRhs = std::function<void(Complex x, const std::vector<Complex>& y, std::vector<Complex>& dy)>;

/// Dormand-Prince 4(5) with PI step control along the path. With a pole
/// threshold, blow-up of any component truncates the trajectory instead of throwing.
ODETrajectory integrate_system(const OdeRhs& f, const ComplexPath& path, std::vector<Complex> y0,
                               std::vector<std::string> components, const IntegrationConfig& cfg,
                               std::optional<double> pole_threshold = std::nullopt);

/// Poles of p1, p2 (numerically located) closer than the configured distance raise PathTooClose.
void check_path(const LinearODE2& ode, const ComplexPath& path, const IntegrationConfig& cfg);

/// u'' + p1 u' + p2 u = 0 with u(start) = init[0], u'(start) = init[1]. Components: u, up (= u').
ODETrajectory integrate_linear(const LinearODE2& ode, const ComplexPath& path, std::pair<Complex, Complex> init,
                               const IntegrationConfig& cfg = {});

/// Largest relative residual |u'' + p1 u' + p2 u| / scale over samples, u'' from
/// five-point differences of the u' column (windows across path corners are skipped).
double linear_residual(const LinearODE2& ode, const ODETrajectory& traj);

/// Integrates the Heun equation, sets v = u', v' = -p1 u' - p2 u and returns the
/// largest relative residual of the derivative equation along the samples.
double verify_derivative_numeric(const HeunSpec& spec, const ComplexPath& path, std::pair<Complex, Complex> init,
                                 const IntegrationConfig& cfg = {});

/// Roots in t of the t-only part of a denominator (fixed singularities).
std::vector<Complex> fixed_t_singularities(const RationalExpr& e);

/// lambda' = riccati_rhs along the t-path; the case must be numeric and its condition zero.
ODETrajectory integrate_riccati(const MatchingCase& c, const ComplexPath& t_path, Complex lambda0,
                                const IntegrationConfig& cfg = {});

/// (lambda, mu) along the flow of the bridged Hamiltonian with numeric parameters.
ODETrajectory integrate_hamiltonian(PainleveKind kind, const Bindings& params, std::pair<Complex, Complex> init,
                                    const ComplexPath& t_path, const IntegrationConfig& cfg = {},
                                    const Conventions& conv = {});

/// Max over interior samples of |lambda'' - painleve_rhs|, lambda'' by five-point
/// differences of the lambda' column. Non-uniform trajectories on a straight path are
/// first resampled by local cubic interpolation. Throws InsufficientSamples below 5 samples.
double painleve_residual(PainleveKind kind, const ODETrajectory& traj, const Bindings& params,
                         const Conventions& conv = {}, std::size_t component = 0);

/// Columns: s, re/im of x, then re/im of every state component c, then of dc/dx as c_x.
std::string trajectory_csv(const ODETrajectory& traj);
std::string trajectory_json(const ODETrajectory& traj);

/// The fixed parameter sets of the numeric suite.
struct DerivativeExample {
  HeunSpec spec;
  ComplexPath path;
  std::pair<Complex, Complex> init;
};
std::vector<DerivativeExample> standard_derivative_examples();

struct HamiltonianExample {
  PainleveKind kind;
  Bindings params;
  std::pair<Complex, Complex> init;
  ComplexPath t_path;
  /// Finer grids where the trajectory runs close to a movable pole.
  double output_step = 1.0 / 1024;
};
std::vector<HamiltonianExample> standard_hamiltonian_examples();

struct RiccatiExample {
  PainleveKind kind;
  Bindings params;
  Complex lambda0;
  ComplexPath t_path;
};
/// P2 at alpha2 = 1/2 from lambda(0) = 0 and P4 at theta_inf = -1, kappa0 = 1/4 from lambda(1) = -1.
std::vector<RiccatiExample> standard_riccati_examples();

}  // namespace heunlab
