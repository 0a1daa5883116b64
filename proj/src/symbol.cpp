#include "heunlab/symbol.hpp"

#include <deque>
#include <mutex>
#include <shared_mutex>
#include <unordered_map>

#include "heunlab/error.hpp"

namespace heunlab {

namespace {

class Registry {
 public:
  Registry() {
    for (const char* name :
         {"z",       "t",        "lambda",    "mu",        "lambda_p", "lambda_pp", "kappa0",
          "kappa1",  "theta",    "kappa_inf", "kappa",     "eta",      "eta0",      "eta_inf",
          "theta0",  "theta_inf", "alpha2",   "alpha",     "beta",     "gamma",     "delta",
          "epsilon", "q",        "sigma",     "alpha3",    "beta3",    "gamma3",    "delta3"}) {
      intern(name);
    }
  }

  std::uint32_t intern(std::string_view name) {
    {
      std::shared_lock lock(mutex_);
      if (auto it = ids_.find(std::string(name)); it != ids_.end()) return it->second;
    }
    std::unique_lock lock(mutex_);
    auto [it, inserted] = ids_.emplace(std::string(name), static_cast<std::uint32_t>(names_.size()));
    if (inserted) names_.emplace_back(name);
    return it->second;
  }

  std::optional<std::uint32_t> find(std::string_view name) const {
    std::shared_lock lock(mutex_);
    if (auto it = ids_.find(std::string(name)); it != ids_.end()) return it->second;
    return std::nullopt;
  }

  const std::string& name(std::uint32_t id) const {
    std::shared_lock lock(mutex_);
    return names_.at(id);
  }

  std::vector<std::string> names() const {
    std::shared_lock lock(mutex_);
    return {names_.begin(), names_.end()};
  }

 private:
  mutable std::shared_mutex mutex_;
  std::unordered_map<std::string, std::uint32_t> ids_;
  // deque: push_back keeps references returned by name() valid.
  std::deque<std::string> names_;
};

Registry& registry() {
  static Registry r;
  return r;
}

}  // namespace

Var Var::of(std::string_view name) { return Var(registry().intern(name)); }

std::optional<Var> Var::find(std::string_view name) {
  if (auto id = registry().find(name)) return Var(*id);
  return std::nullopt;
}

const std::string& Var::name() const { return registry().name(id_); }

std::vector<std::string> registered_names() { return registry().names(); }

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::UnknownVariable: return "UnknownVariable";
    case ErrorCode::DegenerateSubstitution: return "DegenerateSubstitution";
    case ErrorCode::PoleAtPoint: return "PoleAtPoint";
    case ErrorCode::SamplingExhausted: return "SamplingExhausted";
    case ErrorCode::NoDerivativeEquation: return "NoDerivativeEquation";
    case ErrorCode::DegenerateMobius: return "DegenerateMobius";
    case ErrorCode::FuchsianViolation: return "FuchsianViolation";
    case ErrorCode::SingularConfluence: return "SingularConfluence";
    case ErrorCode::DegenerateDerivativeForm: return "DegenerateDerivativeForm";
    case ErrorCode::CaseMismatch: return "CaseMismatch";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::UnknownCase: return "UnknownCase";
    case ErrorCode::StiffnessAbort: return "StiffnessAbort";
    case ErrorCode::PathTooClose: return "PathTooClose";
    case ErrorCode::InsufficientSamples: return "InsufficientSamples";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

namespace sym {
Var z() { static const Var v = Var::of("z"); return v; }
Var t() { static const Var v = Var::of("t"); return v; }
Var lambda() { static const Var v = Var::of("lambda"); return v; }
Var mu() { static const Var v = Var::of("mu"); return v; }
}  // namespace sym

}  // namespace heunlab
