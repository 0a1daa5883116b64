// heunlab command-line front end: verify, derive, integrate, singularities.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "heunlab/error.hpp"
#include "heunlab/report.hpp"

using namespace heunlab;

namespace {

struct Common {
  std::string params_path;
  std::string format;
  bool literal_h2 = false;
  bool literal_p5 = false;

  Conventions conv() const { return {literal_h2, literal_p5}; }
  Bindings params(bool allow_decimal) const {
    return params_path.empty() ? Bindings{} : load_params(params_path, allow_decimal);
  }
};

void add_convention_flags(CLI::App* cmd, Common& c) {
  cmd->add_flag("--paper-literal-h2", c.literal_h2, "use H_II with (lambda^2 + 1/t) mu (fails as predicted)");
  cmd->add_flag("--paper-literal-p5", c.literal_p5,
                "use delta5 = eta^2/2 and the printed P5 constraint (fails as predicted)");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::vector<Complex> complex_list(const std::string& s) {
  std::vector<Complex> out;
  for (const auto& part : split(s, ',')) out.push_back(parse_complex(part));
  return out;
}

HeunSpec spec_from(HeunFamily f, const Bindings& params) {
  HeunSpec spec = HeunSpec::symbolic(f);
  for (const auto& [k, v] : params) {
    const auto names = heun_parameter_names(f);
    if (std::find(names.begin(), names.end(), k) == names.end()) {
      throw Error(ErrorCode::InvalidSpec, "'" + k + "' is not a parameter of the " + std::string(to_string(f)) +
                                              " Heun equation");
    }
    spec.params.set(k, v);
  }
  if (f == HeunFamily::General && !params.count("epsilon")) {
    const auto& p = spec.params;
    spec.params.epsilon = fuchsian_epsilon(p.alpha, p.beta, p.gamma, p.delta);
  }
  return spec;
}

HeunFamily family_of(const std::string& name) {
  auto f = parse_heun_family(name);
  if (!f) throw Error(ErrorCode::UnknownCase, "unknown Heun family '" + name + "'");
  return *f;
}

PainleveKind kind_of(const std::string& name) {
  auto k = parse_painleve_kind(name);
  if (!k) throw Error(ErrorCode::UnknownCase, "unknown Painleve case '" + name + "'");
  return *k;
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(output);
    if (!f) throw Error(ErrorCode::ParseError, "cannot write " + output);
    f << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact and numeric checks for Heun derivative equations and Painleve reductions"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  // verify
  Common vc;
  std::string suite = "all", case_id, branch, mode = "exact", output;
  std::uint64_t seed = RandomizedConfig{}.seed;
  bool timings = false;
  auto* verify = app.add_subcommand("verify", "run verification suites and print a report");
  verify->add_option("--suite", suite, "suite to run")
      ->check(CLI::IsMember({"all", "matching", "riccati", "obstruction", "elimination", "derivative",
                             "degeneration", "numeric"}));
  verify->add_option("--case", case_id, "restrict to one case, e.g. P6 or general");
  verify->add_option("--branch", branch, "sign of kappa_inf for P5/P6 (+ or -)")->check(CLI::IsMember({"+", "-"}));
  verify->add_option("--format", vc.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  verify->add_option("--seed", seed, "seed for randomized identity testing");
  verify->add_option("--mode", mode, "identity testing mode")->check(CLI::IsMember({"exact", "randomized"}));
  verify->add_option("--params", vc.params_path, "key = value parameter file");
  verify->add_option("--output", output, "write the report to a file");
  verify->add_flag("--timings", timings, "include wall time per record");
  add_convention_flags(verify, vc);

  // derive
  Common dc;
  std::string d_family, d_equation = "derivative";
  auto* derive = app.add_subcommand("derive", "print p1, p2 of a Heun equation or its derivative equation");
  derive->add_option("--family", d_family, "general, confluent, double-confluent, bi-confluent, tri-confluent")
      ->required();
  derive->add_option("--params", dc.params_path, "key = value parameter file");
  derive->add_option("--equation", d_equation, "heun or derivative")->check(CLI::IsMember({"heun", "derivative"}));
  derive->add_option("--format", dc.format, "json or text")->check(CLI::IsMember({"json", "text"}));

  // integrate
  Common ic;
  std::string i_system = "heun", i_family = "general", i_case, i_path, i_init;
  IntegrationConfig icfg;
  bool i_residual = false;
  auto* integrate = app.add_subcommand("integrate", "integrate along a path and print the trajectory (CSV or JSON)");
  integrate->add_option("--system", i_system, "heun, riccati or hamiltonian")
      ->check(CLI::IsMember({"heun", "riccati", "hamiltonian"}));
  integrate->add_option("--family", i_family, "Heun family for --system heun");
  integrate->add_option("--case", i_case, "Painleve case for riccati/hamiltonian");
  integrate->add_option("--params", ic.params_path, "key = value parameter file (decimals allowed)");
  integrate->add_option("--path", i_path, "comma-separated waypoints, e.g. 0.25+0.5i,1.5+0.5i")->required();
  integrate->add_option("--init", i_init, "u0,du0 (heun), lambda0 (riccati) or lambda0,mu0 (hamiltonian)")
      ->required();
  integrate->add_option("--format", ic.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  integrate->add_option("--abs-tol", icfg.abs_tol)->check(CLI::PositiveNumber);
  integrate->add_option("--rel-tol", icfg.rel_tol)->check(CLI::PositiveNumber);
  integrate->add_option("--output-step", icfg.output_step)->check(CLI::PositiveNumber);
  integrate->add_option("--min-distance", icfg.min_singularity_distance)->check(CLI::NonNegativeNumber);
  integrate->add_flag("--residual", i_residual, "print the residual to stderr");
  add_convention_flags(integrate, ic);

  // singularities
  Common sc;
  std::string s_family, s_painleve, s_equation = "heun";
  auto* sing = app.add_subcommand("singularities", "list and classify singular points");
  sing->add_option("--family", s_family, "Heun family");
  sing->add_option("--painleve", s_painleve, "Painleve linear equation instead of a Heun family");
  sing->add_option("--equation", s_equation, "heun or derivative")->check(CLI::IsMember({"heun", "derivative"}));
  sing->add_option("--params", sc.params_path, "key = value parameter file");
  sing->add_option("--format", sc.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  add_convention_flags(sing, sc);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*verify) {
      SuiteOptions opt;
      opt.suite = *parse_suite(suite);
      if (!case_id.empty()) opt.case_filter = case_id;
      opt.branch = branch.empty() ? 0 : (branch == "+" ? 1 : -1);
      opt.mode = mode == "exact" ? IdentityMode::Exact : IdentityMode::Randomized;
      opt.seed = seed;
      opt.conv = vc.conv();
      opt.params = vc.params(false);
      opt.timings = timings;
      const Report report = run_suite(opt);
      emit(vc.format == "text" ? render_text(report) : to_json(report).dump(2) + "\n", output);
      return exit_status(report);
    }
    if (*derive) {
      const HeunSpec spec = spec_from(family_of(d_family), dc.params(false));
      const LinearODE2 ode = d_equation == "heun" ? build_heun(spec) : build_heun_derivative(spec);
      if (dc.format == "json") {
        nlohmann::json j{{"family", std::string(to_string(spec.family))},
                         {"equation", d_equation},
                         {"p1", ode.p1.to_string()},
                         {"p2", ode.p2.to_string()}};
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "p1 = " << ode.p1.to_string() << "\np2 = " << ode.p2.to_string() << "\n";
      }
      return 0;
    }
    if (*integrate) {
      const Bindings params = ic.params(true);
      ComplexPath path{complex_list(i_path)};
      const auto init = complex_list(i_init);
      ODETrajectory traj;
      std::optional<double> residual;
      if (i_system == "heun") {
        if (init.size() != 2) throw Error(ErrorCode::ParseError, "--init needs u0,du0");
        const LinearODE2 ode = build_heun(spec_from(family_of(i_family), params));
        traj = integrate_linear(ode, path, {init[0], init[1]}, icfg);
        if (i_residual) residual = linear_residual(ode, traj);
      } else {
        if (i_case.empty()) throw Error(ErrorCode::ParseError, "--case is required for " + i_system);
        const PainleveKind k = kind_of(i_case);
        if (i_system == "riccati") {
          if (init.size() != 1) throw Error(ErrorCode::ParseError, "--init needs lambda0");
          traj = integrate_riccati(specialize(matching_case(k, 1, ic.conv()), params), path, init[0], icfg);
        } else {
          if (init.size() != 2) throw Error(ErrorCode::ParseError, "--init needs lambda0,mu0");
          traj = integrate_hamiltonian(k, params, {init[0], init[1]}, path, icfg, ic.conv());
        }
        if (i_residual) residual = painleve_residual(k, traj, params, ic.conv());
      }
      std::cout << (ic.format == "json" ? trajectory_json(traj) + "\n" : trajectory_csv(traj));
      if (traj.pole) std::cerr << "movable pole: trajectory truncated near " << *traj.pole_near << "\n";
      if (residual) std::cerr << "residual " << *residual << "\n";
      return 0;
    }
    if (*sing) {
      LinearODE2 ode;
      if (!s_painleve.empty()) {
        ode = build_painleve_linear({kind_of(s_painleve), sc.params(false)}, sc.conv());
      } else {
        if (s_family.empty()) throw Error(ErrorCode::ParseError, "--family or --painleve is required");
        const HeunSpec spec = spec_from(family_of(s_family), sc.params(false));
        ode = s_equation == "heun" ? build_heun(spec) : build_heun_derivative(spec);
      }
      const auto pts = singular_points(ode);
      if (sc.format == "json") {
        nlohmann::json arr = nlohmann::json::array();
        for (const auto& p : pts) arr.push_back(p.describe());
        std::cout << nlohmann::json{{"singular_points", arr}}.dump(2) << "\n";
      } else {
        for (const auto& p : pts) std::cout << p.describe() << "\n";
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
