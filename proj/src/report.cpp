#include "heunlab/report.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <fstream>
#include <functional>
#include <regex>
#include <sstream>

#include "heunlab/error.hpp"
#include "heunlab/matching.hpp"

namespace heunlab {

using json = nlohmann::ordered_json;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

// ------------------------------------------------------------ parameter files

Rational parse_number(std::string_view text, bool allow_decimal) {
  const std::string s = trim(text);
  static const std::regex exact(R"([+-]?\d+(/\d+)?)");
  static const std::regex decimal(R"(([+-]?)(\d*)(?:\.(\d*))?(?:[eE]([+-]?\d+))?)");
  if (std::regex_match(s, exact)) {
    if (s.find("/0") != std::string::npos && std::regex_match(s.substr(s.find('/') + 1), std::regex("0+"))) {
      throw Error(ErrorCode::ParseError, "zero denominator in '" + s + "'");
    }
    return parse_rational(s[0] == '+' ? s.substr(1) : s);
  }
  std::smatch m;
  if (allow_decimal && std::regex_match(s, m, decimal) && (m[2].length() + m[3].length()) > 0) {
    const std::string digits = m[2].str() + m[3].str();
    long exp10 = -static_cast<long>(m[3].length());
    if (m[4].matched) exp10 += std::stol(m[4].str());
    if (exp10 > 400 || exp10 < -400) throw Error(ErrorCode::ParseError, "exponent out of range in '" + s + "'");
    mpz_class num(digits.empty() ? "0" : digits, 10);
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exp10)));
    Rational r = exp10 >= 0 ? Rational(num * scale) : Rational(num, scale);
    r.canonicalize();
    return m[1].str() == "-" ? Rational(-r) : r;
  }
  throw Error(ErrorCode::ParseError, std::string("not a ") + (allow_decimal ? "number" : "rational") + ": '" + s +
                                         "'");
}

Complex parse_complex(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw Error(ErrorCode::ParseError, "empty complex number");
  auto real = [&](const std::string& part) {
    return to_double(parse_number(part, true));
  };
  if (s.back() != 'i') return {real(s), 0.0};
  s.pop_back();
  // split before the last sign that is not an exponent sign
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;) {
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  const std::string re = split == std::string::npos ? "" : s.substr(0, split);
  std::string im = split == std::string::npos ? s : s.substr(split);
  if (im.empty() || im == "+") im = "1";
  if (im == "-") im = "-1";
  return {re.empty() ? 0.0 : real(re), real(im)};
}

const std::vector<std::string>& known_parameter_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> k;
    for (HeunFamily f : kHeunFamilies)
      for (auto& n : heun_parameter_names(f)) k.push_back(n);
    for (PainleveKind p : kPainleveKinds)
      for (auto& n : painleve_parameter_names(p)) k.push_back(n);
    for (const char* n : {"kappa", "lambda", "mu", "t"}) k.emplace_back(n);
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end()), k.end());
    return k;
  }();
  return keys;
}

Bindings parse_params(std::string_view text, bool allow_decimal) {
  Bindings out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  const auto& keys = known_parameter_keys();
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    auto fail = [&](const std::string& why) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(lineno) + ": " + why);
    };
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) fail("unknown key '" + key + "'");
    if (out.count(key)) fail("duplicate key '" + key + "'");
    try {
      out.emplace(key, parse_number(line.substr(eq + 1), allow_decimal));
    } catch (const Error& e) {
      const std::string what = e.what();
      fail(what.substr(what.find(": ") + 2));
    }
  }
  return out;
}

Bindings load_params(const std::string& path, bool allow_decimal) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::ParseError, "cannot read parameter file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_params(ss.str(), allow_decimal);
}

// ------------------------------------------------------------ reports

ReportRecord make_record(std::string id, const VerificationOutcome& o) {
  return {std::move(id), o.claim, o.mode, o.verdict(), o.witness, o.residual, std::nullopt, o.details};
}

json to_json(const Report& r) {
  json records = json::array();
  std::map<std::string, int> counts{{"pass", 0}, {"fail", 0}, {"not-applicable", 0}, {"fail-as-predicted", 0}};
  for (const auto& rec : r.records) {
    json j{{"id", rec.id},
           {"suite", rec.suite()},
           {"case", rec.case_name()},
           {"claim", rec.claim},
           {"mode", rec.mode},
           {"verdict", std::string(to_string(rec.verdict))}};
    if (rec.witness) j["witness"] = *rec.witness;
    if (rec.residual) j["residual"] = *rec.residual;
    if (rec.wall_time) j["wall_time"] = *rec.wall_time;
    json details = json::array();
    for (const auto& [k, v] : rec.details) details.push_back({k, v});
    j["details"] = details;
    records.push_back(j);
    ++counts[std::string(to_string(rec.verdict))];
  }
  return {{"tool", "heunlab"},
          {"version", r.version},
          {"seed", r.seed},
          {"summary", {{"total", r.records.size()}, {"counts", counts}, {"exit_status", exit_status(r)}}},
          {"records", records}};
}

Report report_from_json(const json& j) {
  try {
    Report r;
    r.version = j.at("version").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& jr : j.at("records")) {
      ReportRecord rec;
      rec.id = jr.at("id").get<std::string>();
      rec.claim = jr.at("claim").get<std::string>();
      rec.mode = jr.at("mode").get<std::string>();
      const auto v = parse_verdict(jr.at("verdict").get<std::string>());
      if (!v) throw Error(ErrorCode::ParseError, "unknown verdict in record " + rec.id);
      rec.verdict = *v;
      if (jr.contains("witness")) rec.witness = jr.at("witness").get<std::string>();
      if (jr.contains("residual")) rec.residual = jr.at("residual").get<double>();
      if (jr.contains("wall_time")) rec.wall_time = jr.at("wall_time").get<double>();
      for (const auto& d : jr.at("details")) rec.details.emplace_back(d.at(0).get<std::string>(), d.at(1).get<std::string>());
      r.records.push_back(std::move(rec));
    }
    return r;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("malformed report: ") + e.what());
  }
}

std::string render_text(const Report& r) {
  std::ostringstream os;
  std::size_t width = 0;
  for (const auto& rec : r.records) width = std::max(width, rec.id.size());
  for (const auto& rec : r.records) {
    std::string v(to_string(rec.verdict));
    os << v << std::string(18 - std::min<std::size_t>(v.size(), 17), ' ') << rec.id
       << std::string(width + 2 - rec.id.size(), ' ') << rec.claim;
    if (rec.residual) {
      std::ostringstream num;
      num.precision(3);
      num << std::scientific << *rec.residual;
      os << " [residual " << num.str() << "]";
    }
    if (rec.wall_time) os << " (" << static_cast<long>(*rec.wall_time * 1000) << " ms)";
    os << '\n';
    if (rec.witness) os << "    witness: " << *rec.witness << '\n';
  }
  os << r.records.size() << " records, exit status " << exit_status(r) << '\n';
  return os.str();
}

int exit_status(const Report& r) {
  for (const auto& rec : r.records) {
    if (rec.verdict == Verdict::Fail) return 1;
  }
  return 0;
}

// ------------------------------------------------------------ suites

std::string_view to_string(Suite s) {
  switch (s) {
    case Suite::All: return "all";
    case Suite::Matching: return "matching";
    case Suite::Riccati: return "riccati";
    case Suite::Obstruction: return "obstruction";
    case Suite::Elimination: return "elimination";
    case Suite::Derivative: return "derivative";
    case Suite::Degeneration: return "degeneration";
    case Suite::Numeric: return "numeric";
  }
  return "?";
}

std::optional<Suite> parse_suite(std::string_view s) {
  for (Suite x : {Suite::All, Suite::Matching, Suite::Riccati, Suite::Obstruction, Suite::Elimination,
                  Suite::Derivative, Suite::Degeneration, Suite::Numeric}) {
    if (to_string(x) == s) return x;
  }
  return std::nullopt;
}

namespace {

struct Job {
  std::string id;
  std::function<VerificationOutcome()> run;
};

std::string normalize_case(const std::string& name) {
  std::string n = name;
  if (!n.empty() && (n.back() == '+' || n.back() == '-') && n.size() > 1 && n.find('=') == std::string::npos) n.pop_back();
  if (auto k = parse_painleve_kind(n)) return lower(std::string(to_string(*k)));
  if (auto f = parse_heun_family(lower(n))) return std::string(to_string(*f));
  return lower(n);
}

Bindings params_for(PainleveKind k, const Bindings& all) {
  Bindings out;
  auto names = painleve_parameter_names(k);
  names.emplace_back("kappa");
  for (const auto& n : names) {
    if (auto it = all.find(n); it != all.end()) out.insert(*it);
  }
  return out;
}

MatchingCase prepared_case(PainleveKind k, int branch, const SuiteOptions& opt) {
  MatchingCase c = matching_case(k, branch, opt.conv);
  const Bindings p = params_for(k, opt.params);
  return p.empty() ? c : specialize(c, p);
}

std::vector<int> branches_of(PainleveKind k, int requested) {
  if (k != PainleveKind::P5 && k != PainleveKind::P6) return {1};
  if (requested != 0) return {requested};
  return {1, -1};
}

/// One record per case; both sign branches are folded in with "+."/"-." details.
VerificationOutcome folded(PainleveKind k, const SuiteOptions& opt,
                           const std::function<VerificationOutcome(const MatchingCase&)>& check) {
  const auto branches = branches_of(k, opt.branch);
  if (branches.size() == 1) return check(prepared_case(k, branches[0], opt));
  std::vector<std::pair<std::string, VerificationOutcome>> parts;
  for (int b : branches) parts.emplace_back(b > 0 ? "+" : "-", check(prepared_case(k, b, opt)));
  VerificationOutcome out;
  out.claim = parts[0].second.claim + " (both signs of kappa_inf)";
  out.mode = parts[0].second.mode;
  out.passed = true;
  out.not_applicable = true;
  for (const auto& [label, part] : parts) {
    out.predicted_failure = out.predicted_failure || part.predicted_failure;
    out.add("branch " + label, std::string(to_string(part.verdict())));
    for (const auto& [key, value] : part.details) {
      if (key != "branch") out.add(label + "." + key, value);
    }
    if (part.not_applicable) continue;
    out.not_applicable = false;
    out.passed = out.passed && part.passed;
    if (!part.passed && !out.witness && part.witness) out.witness = label + ": " + *part.witness;
  }
  return out;
}

HeunSpec derivative_spec(HeunFamily f, const Bindings& params) {
  HeunSpec spec = HeunSpec::symbolic(f);
  bool eps_given = false;
  for (const auto& name : heun_parameter_names(f)) {
    if (auto it = params.find(name); it != params.end()) {
      spec.params.set(name, it->second);
      eps_given = eps_given || name == "epsilon";
    }
  }
  if (f == HeunFamily::General && !eps_given) {
    const auto& p = spec.params;
    spec.params.epsilon = fuchsian_epsilon(p.alpha, p.beta, p.gamma, p.delta);
  }
  return spec;
}

VerificationOutcome numeric_outcome(std::string claim, double residual, bool passed) {
  VerificationOutcome o;
  o.claim = std::move(claim);
  o.mode = "numeric";
  o.residual = residual;
  o.passed = passed;
  return o;
}

std::string sci(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

void add_numeric_jobs(std::vector<Job>& jobs, const SuiteOptions& opt) {
  for (const auto& ex : standard_derivative_examples()) {
    jobs.push_back({"numeric-derivative/" + std::string(to_string(ex.spec.family)), [ex] {
                      const double r = verify_derivative_numeric(ex.spec, ex.path, ex.init);
                      auto o = numeric_outcome(std::string(to_string(ex.spec.family)) +
                                                   " Heun: u' solves the derivative equation to relative residual <= 1e-8",
                                               r, r <= 1e-8);
                      o.add("path_length", sci(ex.path.length()));
                      return o;
                    }});
  }
  for (const auto& ex : standard_riccati_examples()) {
    jobs.push_back({"numeric-riccati/" + std::string(to_string(ex.kind)), [ex, opt] {
                      const auto c = specialize(matching_case(ex.kind, 1, opt.conv), ex.params);
                      const auto traj = integrate_riccati(c, ex.t_path, ex.lambda0);
                      const double r = painleve_residual(ex.kind, traj, ex.params, opt.conv);
                      auto o = numeric_outcome(std::string(to_string(ex.kind)) +
                                                   ": the Riccati trajectory solves the Painleve equation to 1e-6",
                                               r, r <= 1e-6 && !traj.pole);
                      o.add("samples", std::to_string(traj.samples.size()));
                      o.add("pole", traj.pole ? "yes" : "no");
                      return o;
                    }});
    if (ex.kind == PainleveKind::P2) {
      jobs.push_back({"numeric-riccati-perturbed/P2", [ex, opt] {
                        const auto c = specialize(matching_case(ex.kind, 1, opt.conv), ex.params);
                        const auto traj = integrate_riccati(c, ex.t_path, ex.lambda0);
                        const double r = painleve_residual(ex.kind, traj, {{"alpha2", frac(51, 100)}}, opt.conv);
                        auto o = numeric_outcome("P2: with alpha2 = 0.51 in the residual meter the residual exceeds 1e-4",
                                                 r, r > 1e-4);
                        return o;
                      }});
    }
  }
  for (const auto& ex : standard_hamiltonian_examples()) {
    jobs.push_back({"numeric-hamiltonian/" + std::string(to_string(ex.kind)), [ex, opt] {
                      IntegrationConfig cfg;
                      cfg.output_step = ex.output_step;
                      ComplexPath path = ex.t_path;
                      const bool literal_h2 = ex.kind == PainleveKind::P2 && opt.conv.paper_literal_h2;
                      const bool literal_p5 = ex.kind == PainleveKind::P5 && opt.conv.paper_literal_p5;
                      // the literal H_II has a fixed singularity at t = 0
                      if (literal_h2) path = ComplexPath::segment(1.0, 2.0);
                      const auto traj = integrate_hamiltonian(ex.kind, ex.params, ex.init, path, cfg, opt.conv);
                      const double r = painleve_residual(ex.kind, traj, ex.params, opt.conv);
                      auto o = numeric_outcome(std::string(to_string(ex.kind)) +
                                                   ": lambda of the Hamiltonian flow solves the Painleve equation to 1e-6",
                                               r, r <= 1e-6 && !traj.pole);
                      o.predicted_failure = literal_h2 || literal_p5;
                      o.add("samples", std::to_string(traj.samples.size()));
                      return o;
                    }});
  }
}

}  // namespace

Report run_suite(const SuiteOptions& opt) {
  RandomizedConfig cfg;
  cfg.seed = opt.seed;
  const IdentityMode mode = opt.mode;
  const bool all = opt.suite == Suite::All;
  std::vector<Job> jobs;

  for (PainleveKind k : kPainleveKinds) {
    const std::string name(to_string(k));
    if (all || opt.suite == Suite::Matching) {
      jobs.push_back({"matching/" + name, [=, &opt] {
                        return folded(k, opt, [&](const MatchingCase& c) { return verify_matching(c, opt.conv, mode, cfg); });
                      }});
    }
    if (all || opt.suite == Suite::Riccati) {
      jobs.push_back({"riccati/" + name, [=, &opt] {
                        return folded(k, opt, [&](const MatchingCase& c) { return verify_riccati(c, opt.conv, mode, cfg); });
                      }});
    }
    if (all || opt.suite == Suite::Obstruction) {
      jobs.push_back({"obstruction/" + name, [=, &opt] {
                        return folded(k, opt, [&](const MatchingCase& c) { return verify_obstruction(c); });
                      }});
    }
    if (all || opt.suite == Suite::Elimination) {
      jobs.push_back({"elimination/" + name, [=, &opt] { return verify_elimination(k, opt.conv, mode, cfg); }});
    }
  }
  if (all || opt.suite == Suite::Elimination) {
    jobs.push_back({"p3-substitution/direct", [=] { return verify_p3_substitution(P3Variant::Direct, mode, cfg); }});
  }
  if (all || opt.suite == Suite::Derivative) {
    for (HeunFamily f : kHeunFamilies) {
      jobs.push_back({"derivative/" + std::string(to_string(f)), [=, &opt] {
                        const HeunSpec spec = derivative_spec(f, opt.params);
                        const auto cmp = ode_compare(build_heun_derivative(spec), derivative_equation(build_heun(spec)),
                                                     mode, cfg);
                        VerificationOutcome o;
                        o.claim = std::string(to_string(f)) +
                                  " Heun: the closed-form derivative equation equals the one derived from the Heun equation";
                        o.mode = std::string(to_string(mode));
                        o.passed = cmp.equal;
                        o.add("p1", cmp.p1.equal ? "holds" : "fails");
                        o.add("p2", cmp.p2.equal ? "holds" : "fails");
                        if (!cmp.p1.equal) o.witness = "p1 at " + describe_witness(cmp.p1);
                        else if (!cmp.p2.equal) o.witness = "p2 at " + describe_witness(cmp.p2);
                        return o;
                      }});
    }
  }
  if (opt.suite == Suite::Degeneration) {
    for (DegenerationCase dc : kDegenerationCases) {
      jobs.push_back({"degeneration/" + std::string(to_string(dc)), [=] {
                        const auto spec = impose_degeneration(HeunSpec::symbolic(HeunFamily::General), dc);
                        const auto r = degeneration_case(spec, dc);
                        const auto pts = singular_points(r.cancelled);
                        std::vector<std::string> seen;
                        bool ok = pts.size() == 4 && pts.back().kind == LocusKind::Infinity;
                        const std::vector<RationalExpr> expected{0, 1, RationalExpr::var("t")};
                        for (std::size_t i = 0; i < pts.size(); ++i) {
                          seen.push_back(pts[i].describe());
                          if (i < 3) ok = ok && pts[i].kind == LocusKind::Exact && i < expected.size() &&
                                          pts[i].location == expected[i];
                        }
                        VerificationOutcome o;
                        o.claim = "general Heun derivative equation with " + std::string(to_string(dc)) +
                                  ": the extra singular point cancels, leaving {0, 1, t, infinity}";
                        o.mode = "exact";
                        o.passed = ok;
                        std::string list;
                        for (const auto& s : seen) list += (list.empty() ? "" : "; ") + s;
                        o.add("singular_points", list);
                        o.add("normalized_matches_heun", r.matched ? "yes" : "no");
                        if (!ok) o.witness = list;
                        return o;
                      }});
    }
  }
  if (opt.suite == Suite::Numeric) add_numeric_jobs(jobs, opt);

  if (opt.case_filter) {
    const std::string want = normalize_case(*opt.case_filter);
    std::erase_if(jobs, [&](const Job& j) { return normalize_case(j.id.substr(j.id.find('/') + 1)) != want; });
    if (jobs.empty()) throw Error(ErrorCode::UnknownCase, "no case '" + *opt.case_filter + "' in suite " +
                                                              std::string(to_string(opt.suite)));
  }

  Report report;
  report.seed = opt.seed;
  for (auto& job : jobs) {
    const auto start = std::chrono::steady_clock::now();
    VerificationOutcome o;
    try {
      o = job.run();
    } catch (const Error& e) {
      o.claim = job.id;
      o.mode = opt.suite == Suite::Numeric ? "numeric" : std::string(to_string(mode));
      o.passed = false;
      o.witness = std::string("error: ") + e.what();
    }
    std::string id = job.id;
    const bool signed_case = id.ends_with("/P5") || id.ends_with("/P6");
    if (opt.branch != 0 && signed_case && !id.starts_with("elimination/")) id += opt.branch > 0 ? "+" : "-";
    ReportRecord rec = make_record(id, o);
    if (opt.timings) {
      rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
    report.records.push_back(std::move(rec));
  }
  std::sort(report.records.begin(), report.records.end(),
            [](const ReportRecord& a, const ReportRecord& b) { return a.id < b.id; });
  return report;
}

}  // namespace heunlab
