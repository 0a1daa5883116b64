#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sys/wait.h>

#include "doctest.h"
#include "heunlab/error.hpp"
#include "heunlab/report.hpp"

using namespace heunlab;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::DivisionByZero;
}

std::map<std::string, int> suite_counts(const Report& r) {
  std::map<std::string, int> n;
  for (const auto& rec : r.records) ++n[rec.suite()];
  return n;
}

const ReportRecord& find(const Report& r, const std::string& id) {
  for (const auto& rec : r.records)
    if (rec.id == id) return rec;
  FAIL("missing record " << id);
  throw 0;
}

std::string detail(const ReportRecord& r, const std::string& key) {
  for (const auto& [k, v] : r.details)
    if (k == key) return v;
  return {};
}

struct Run {
  int status;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(HEUNLAB_CLI) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

// removed again when the test binary exits
struct TempFiles {
  std::vector<std::filesystem::path> paths;
  ~TempFiles() {
    for (const auto& p : paths) std::filesystem::remove(p);
  }
};

std::string temp_file(const std::string& name, const std::string& content) {
  static TempFiles files;
  const auto path = std::filesystem::temp_directory_path() / ("heunlab_test_" + name);
  std::ofstream(path) << content;
  files.paths.push_back(path);
  return path.string();
}

}  // namespace

TEST_CASE("numbers") {
  CHECK(parse_number("3/6") == Rational(1, 2));
  CHECK(parse_number(" -7 ") == Rational(-7));
  CHECK(parse_number("+2") == Rational(2));
  CHECK(code_of([] { parse_number("0.5"); }) == ErrorCode::ParseError);
  CHECK(parse_number("0.51", true) == Rational(51, 100));
  CHECK(parse_number("-1.25e2", true) == Rational(-125));
  CHECK(parse_number("3e-3", true) == Rational(3, 1000));
  CHECK(parse_number(".5", true) == Rational(1, 2));
  CHECK(code_of([] { parse_number("1/0"); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_number(".", true); }) == ErrorCode::ParseError);
  CHECK(code_of([] { parse_number("1/2/3"); }) == ErrorCode::ParseError);
}

TEST_CASE("complex literals") {
  CHECK(parse_complex("1") == Complex(1, 0));
  CHECK(parse_complex("0.25+0.5i") == Complex(0.25, 0.5));
  CHECK(parse_complex("1-i") == Complex(1, -1));
  CHECK(parse_complex("-2i") == Complex(0, -2));
  CHECK(parse_complex("i") == Complex(0, 1));
  CHECK(parse_complex("1e-1+2e+0i") == Complex(0.1, 2));
  CHECK(code_of([] { parse_complex("1+xi"); }) == ErrorCode::ParseError);
}

TEST_CASE("parameter files") {
  const auto b = parse_params("# comment\nalpha = 2\n\n beta=1/3  # trailing\nkappa_inf = -1\n");
  CHECK(b.size() == 3);
  CHECK(b.at("beta") == RationalExpr(Rational(1, 3)));
  CHECK(b.at("kappa_inf") == RationalExpr(-1));
  auto line_of = [](const char* text) -> std::string {
    try {
      parse_params(text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ParseError);
      return e.what();
    }
    return "";
  };
  CHECK(line_of("alpha = 1\nbogus = 2\n").find("line 2") != std::string::npos);
  CHECK(line_of("alpha 1\n").find("line 1") != std::string::npos);
  CHECK(line_of("alpha = 1\nalpha = 2\n").find("duplicate") != std::string::npos);
  CHECK(line_of("alpha = 0.5\n").find("not a rational") != std::string::npos);
  CHECK(parse_params("alpha2 = 0.51", true).at("alpha2") == RationalExpr(Rational(51, 100)));
  CHECK(code_of([] { load_params("/nonexistent/params.txt"); }) == ErrorCode::ParseError);
}

TEST_CASE("full symbolic run") {
  const Report r = run_suite({});
  const std::map<std::string, int> expected{{"matching", 5},    {"riccati", 5},          {"obstruction", 5},
                                            {"elimination", 5}, {"p3-substitution", 1}, {"derivative", 5}};
  CHECK(suite_counts(r) == expected);
  for (const auto& rec : r.records) {
    CAPTURE(rec.id);
    CHECK(rec.verdict == Verdict::Pass);
    CHECK_FALSE(rec.wall_time.has_value());
  }
  CHECK(exit_status(r) == 0);
  CHECK(std::is_sorted(r.records.begin(), r.records.end(),
                       [](const ReportRecord& a, const ReportRecord& b) { return a.id < b.id; }));
  CHECK(detail(find(r, "matching/P6"), "branch +") == "pass");
  CHECK(detail(find(r, "matching/P6"), "branch -") == "pass");
}

TEST_CASE("same seed, same report") {
  SuiteOptions opt;
  opt.mode = IdentityMode::Randomized;
  opt.seed = 99;
  CHECK(to_json(run_suite(opt)).dump() == to_json(run_suite(opt)).dump());
}

TEST_CASE("report JSON round-trips") {
  const Report r = run_suite({});
  CHECK(report_from_json(nlohmann::ordered_json::parse(to_json(r).dump())) == r);

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  const Verdict verdicts[] = {Verdict::Pass, Verdict::Fail, Verdict::NotApplicable, Verdict::FailAsPredicted};
  for (int trial = 0; trial < 50; ++trial) {
    Report x;
    x.seed = rng();
    for (int i = 0; i < 1 + static_cast<int>(rng() % 6); ++i) {
      ReportRecord rec;
      rec.id = "s" + std::to_string(rng() % 3) + "/c" + std::to_string(i);
      rec.claim = "claim \"quoted\" é " + std::to_string(rng());
      rec.mode = rng() % 2 ? "exact" : "numeric";
      rec.verdict = verdicts[rng() % 4];
      if (rng() % 2) rec.witness = "{t=" + std::to_string(rng() % 100) + "}";
      if (rng() % 2) rec.residual = u(rng) * 1e-12;
      if (rng() % 2) rec.wall_time = std::abs(u(rng));
      for (int d = 0; d < static_cast<int>(rng() % 3); ++d) rec.details.emplace_back("k" + std::to_string(d), "v");
      x.records.push_back(rec);
    }
    CHECK(report_from_json(nlohmann::ordered_json::parse(to_json(x).dump())) == x);
  }
  CHECK(code_of([] { report_from_json(nlohmann::ordered_json::parse(R"({"version": "1"})")); }) ==
        ErrorCode::ParseError);
}

TEST_CASE("exit status depends on verdicts only") {
  auto with = [](std::vector<Verdict> vs) {
    Report r;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      ReportRecord rec;
      rec.id = "x/" + std::to_string(i);
      rec.verdict = vs[i];
      rec.claim = "anything " + std::to_string(i * 7);
      r.records.push_back(rec);
    }
    return exit_status(r);
  };
  CHECK(with({}) == 0);
  CHECK(with({Verdict::Pass, Verdict::FailAsPredicted, Verdict::NotApplicable}) == 0);
  CHECK(with({Verdict::Pass, Verdict::Fail}) == 1);
  CHECK(with({Verdict::FailAsPredicted, Verdict::Fail}) == 1);
}

TEST_CASE("literal conventions") {
  SuiteOptions opt;
  opt.suite = Suite::Elimination;
  opt.conv.paper_literal_h2 = true;
  const Report r = run_suite(opt);
  const auto& p2 = find(r, "elimination/P2");
  CHECK(p2.verdict == Verdict::FailAsPredicted);
  CHECK(p2.witness.has_value());
  CHECK(exit_status(r) == 0);

  SuiteOptions p5;
  p5.suite = Suite::All;
  p5.conv.paper_literal_p5 = true;
  const Report r5 = run_suite(p5);
  CHECK(find(r5, "elimination/P5").verdict == Verdict::FailAsPredicted);
  CHECK(find(r5, "matching/P5").verdict == Verdict::FailAsPredicted);
  CHECK(find(r5, "riccati/P5").verdict == Verdict::FailAsPredicted);
  CHECK(find(r5, "obstruction/P5").verdict == Verdict::Pass);
}

TEST_CASE("case and branch selection") {
  SuiteOptions opt;
  opt.case_filter = "p3'";
  const Report r = run_suite(opt);
  CHECK(r.records.size() == 4);
  for (const auto& rec : r.records) CHECK(rec.case_name() == "P3prime");
  CHECK(detail(find(r, "matching/P3prime"), "bi-confluent binding") == "fails");

  opt.case_filter = "general";
  CHECK(run_suite(opt).records.size() == 1);

  opt.case_filter = "P1";
  CHECK(code_of([&] { run_suite(opt); }) == ErrorCode::UnknownCase);

  SuiteOptions b;
  b.suite = Suite::Matching;
  b.branch = -1;
  const Report rb = run_suite(b);
  CHECK(find(rb, "matching/P6-").verdict == Verdict::Pass);
  CHECK(find(rb, "matching/P5-").verdict == Verdict::Pass);
  CHECK(find(rb, "matching/P4").verdict == Verdict::Pass);
}

TEST_CASE("parameters that make beta vanish") {
  SuiteOptions opt;
  opt.suite = Suite::Matching;
  opt.case_filter = "P6";
  opt.params = {{"kappa0", 1}, {"kappa1", 1}, {"theta", 1}, {"kappa_inf", 4}};
  opt.branch = 1;
  const Report plus = run_suite(opt);
  CHECK(plus.records.at(0).verdict == Verdict::NotApplicable);
  CHECK(exit_status(plus) == 0);
  opt.branch = 0;
  const Report both = run_suite(opt);
  CHECK(both.records.at(0).verdict == Verdict::Pass);
  CHECK(detail(both.records.at(0), "branch +") == "not-applicable");
}

TEST_CASE("specialized derivative suite") {
  SuiteOptions opt;
  opt.suite = Suite::Derivative;
  opt.params = {{"alpha", 2}, {"beta", 1}, {"gamma", 1}, {"delta", 1}, {"q", 1}, {"t", 2}};
  const Report r = run_suite(opt);
  CHECK(r.records.size() == 5);
  CHECK(exit_status(r) == 0);
}

TEST_CASE("degeneration suite") {
  SuiteOptions opt;
  opt.suite = Suite::Degeneration;
  const Report r = run_suite(opt);
  CHECK(r.records.size() == 4);
  for (const auto& rec : r.records) {
    CAPTURE(rec.id);
    CHECK(rec.verdict == Verdict::Pass);
    CHECK(detail(rec, "singular_points") == "0 (regular); 1 (regular); t (regular); infinity (regular)");
  }
}

TEST_CASE("text rendering") {
  SuiteOptions opt;
  opt.suite = Suite::Elimination;
  opt.conv.paper_literal_h2 = true;
  const auto text = render_text(run_suite(opt));
  CHECK(text.find("fail-as-predicted elimination/P2") != std::string::npos);
  CHECK(text.find("witness:") != std::string::npos);
  CHECK(text.find("6 records, exit status 0") != std::string::npos);
}

TEST_CASE("command line") {
  const Run all = cli("verify --suite all --format json");
  CHECK(all.status == 0);
  const auto j = nlohmann::ordered_json::parse(all.out);
  CHECK(j.at("records").size() == 26);
  CHECK(j.at("summary").at("counts").at("pass") == 26);

  CHECK(cli("verify --suite elimination --paper-literal-h2").status == 0);
  CHECK(cli("verify --suite nope").status == 2);
  CHECK(cli("verify --case P1").status == 2);
  CHECK(cli("frobnicate").status == 2);
  CHECK(cli("").status == 2);

  const std::string params = temp_file("general.txt", "alpha = 2\nbeta = 1\ngamma = 1\ndelta = 1\nq = 1\nt = 2\n");
  const Run d = cli("derive --family general --params " + params);
  CHECK(d.status == 0);
  CHECK(d.out.rfind("p1 = ", 0) == 0);
  CHECK(d.out.find("\np2 = ") != std::string::npos);
  // epsilon is tied by the Fuchsian relation; a violating value is rejected
  const std::string bad = temp_file("bad.txt", "alpha = 2\nbeta = 1\ngamma = 1\ndelta = 1\nepsilon = 5\nq = 1\nt = 2\n");
  CHECK(cli("derive --family general --params " + bad).status == 2);

  const Run s = cli("singularities --family general --equation derivative --params " + params);
  CHECK(s.out == "0 (regular)\n1/2 (regular)\n1 (regular)\n2 (regular)\ninfinity (regular)\n");

  const Run traj = cli("integrate --family general --params " + params + " --path 0.25+0.5i,1.5+0.5i --init 1,0.5");
  CHECK(traj.status == 0);
  CHECK(traj.out.rfind("s,x_re,x_im,u_re", 0) == 0);
  CHECK(cli("integrate --family general --params " + params + " --path -0.5,0.5 --init 1,0").status == 2);

  const std::string p2 = temp_file("p2.txt", "alpha2 = 0.5\n");
  CHECK(cli("integrate --system riccati --case P2 --params " + p2 + " --path 0,1 --init 0").status == 0);
  CHECK(cli("integrate --system hamiltonian --case P2 --params " + p2 + " --path 0,1 --init 1,1 --format json")
            .status == 0);
}
