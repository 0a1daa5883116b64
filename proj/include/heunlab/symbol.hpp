#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace heunlab {

/// Handle to a named indeterminate. Lower ids rank higher in the monomial order.
///
/// Ids come from a process-wide registry. The registry pre-registers the
/// glossary names in a fixed order so canonical forms print identically
/// regardless of which module touches a symbol first.
class Var {
 public:
  Var() = default;

  /// Registers `name` if needed.
  static Var of(std::string_view name);
  /// Looks up `name` without registering it.
  static std::optional<Var> find(std::string_view name);
  /// Rebuilds a handle from a registered id.
  static Var from_id(std::uint32_t id) { return Var(id); }

  std::uint32_t id() const noexcept { return id_; }
  const std::string& name() const;

  friend auto operator<=>(Var, Var) = default;

 private:
  explicit Var(std::uint32_t id) : id_(id) {}
  std::uint32_t id_ = 0;
};

/// All registered names in id order.
std::vector<std::string> registered_names();

namespace sym {
// Frequently used indeterminates.
Var z();
Var t();
Var lambda();
Var mu();
}  // namespace sym

}  // namespace heunlab
