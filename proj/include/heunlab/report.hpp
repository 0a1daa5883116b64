#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "heunlab/numeric.hpp"
#include "heunlab/verification.hpp"
#include "json.hpp"

namespace heunlab {

inline constexpr std::string_view kToolVersion = "1.0.0";

// ------------------------------------------------------------ parameter files

/// "p", "-p/q"; with allow_decimal also "1.25", "-3e-2" (converted exactly).
Rational parse_number(std::string_view text, bool allow_decimal = false);
/// "1", "-0.5", "2i", "0.25+0.5i", "1-i".
Complex parse_complex(std::string_view text);

/// Every key a parameter file may set.
const std::vector<std::string>& known_parameter_keys();

/// key = value lines; '#' starts a comment. Throws ParseError with the line number.
Bindings parse_params(std::string_view text, bool allow_decimal = false);
Bindings load_params(const std::string& path, bool allow_decimal = false);

// ------------------------------------------------------------ reports

struct ReportRecord {
  std::string id;  ///< suite/case, e.g. "matching/P6"
  std::string claim;
  std::string mode;  ///< exact | randomized | numeric
  Verdict verdict = Verdict::Fail;
  std::optional<std::string> witness;
  std::optional<double> residual;
  std::optional<double> wall_time;  ///< seconds; only with timings on
  std::vector<std::pair<std::string, std::string>> details;

  std::string suite() const { return id.substr(0, id.find('/')); }
  std::string case_name() const { return id.substr(id.find('/') + 1); }
  friend bool operator==(const ReportRecord&, const ReportRecord&) = default;
};

ReportRecord make_record(std::string id, const VerificationOutcome& o);

struct Report {
  std::string version{kToolVersion};
  std::uint64_t seed = 0;
  std::vector<ReportRecord> records;  ///< sorted by id

  friend bool operator==(const Report&, const Report&) = default;
};

nlohmann::ordered_json to_json(const Report& r);
/// Inverse of to_json; the summary block is recomputed, not read. Throws ParseError.
Report report_from_json(const nlohmann::ordered_json& j);
std::string render_text(const Report& r);

/// 0 when every verdict is pass, fail-as-predicted or not-applicable; 1 otherwise.
int exit_status(const Report& r);

// ------------------------------------------------------------ suites

enum class Suite { All, Matching, Riccati, Obstruction, Elimination, Derivative, Degeneration, Numeric };
std::string_view to_string(Suite s);
std::optional<Suite> parse_suite(std::string_view s);

struct SuiteOptions {
  Suite suite = Suite::All;
  /// Restricts to records whose case name matches (case-insensitive); UnknownCase if none do.
  std::optional<std::string> case_filter;
  int branch = 0;  ///< 0: both signs folded into one record; +1 / -1: that sign only
  IdentityMode mode = IdentityMode::Exact;
  std::uint64_t seed = RandomizedConfig{}.seed;
  Conventions conv;
  /// Values applied to the matching-family and derivative cases.
  Bindings params;
  bool timings = false;
};

Report run_suite(const SuiteOptions& opt);

}  // namespace heunlab
