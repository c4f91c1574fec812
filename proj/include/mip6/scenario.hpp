#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mip6/address.hpp"
#include "mip6/binding.hpp"

namespace mip6 {

enum class Role { mobile_node, correspondent_node, home_agent };

std::string_view role_name(Role r) noexcept;

struct NodeConfig {
  std::string id;
  Role role = Role::mobile_node;
  Address home_address;                   // the agent's own address for home agents
  std::optional<std::string> home_agent;  // endpoints with a home agent are mobile
  std::optional<Address> location;        // nullopt: at home
  std::optional<RotFlags> flags;          // overrides the scenario mechanism's flags
};

struct Peering {
  std::string node;
  Address peer;
};

enum class EventKind { move, send, bu_refresh };

struct ScheduledEvent {
  SimTime at = 0;
  EventKind kind = EventKind::send;
  std::string node;
  std::optional<Address> coa;       // move; nullopt returns the node home
  Address to;                       // send
  std::optional<std::size_t> size;  // send; nullopt fills the packet to the mtu
};

inline constexpr int kScenarioVersion = 1;
inline constexpr std::uint16_t kDefaultBindingLifetime = 60000;
inline constexpr SimTime kDefaultHorizon = 1'000'000;

struct ScenarioConfig {
  int version = kScenarioVersion;
  std::size_t mtu = 1500;
  std::uint64_t seed = 1;
  // One entry per run. Empty means a single run driven by per-node flags.
  std::vector<Mechanism> mechanisms;
  std::uint16_t bu_lifetime = kDefaultBindingLifetime;
  SimTime horizon = kDefaultHorizon;
  std::vector<NodeConfig> nodes;
  std::vector<Peering> peerings;
  std::vector<ScheduledEvent> schedule;

  /// Copies of this scenario with a single mechanism each (or itself when flag-driven).
  std::vector<ScenarioConfig> variants() const;
  const NodeConfig* find_node(std::string_view id) const;
};

struct Diagnostic {
  std::string code;  // e.g. "config-invalid", "mtu-too-small"
  std::string path;  // e.g. "nodes[2].home_agent"
  std::string message;

  std::string to_string() const;
};

struct ParsedScenario {
  ScenarioConfig config;
  std::vector<Diagnostic> diagnostics;  // field-level problems found while reading
};

/// Reads a JSON scenario. Throws Error(parse_error) with "line L, column C"
/// for syntax errors; schema problems are returned as diagnostics.
ParsedScenario parse_scenario(std::string_view text);
/// Throws Error(file_not_found) or Error(parse_error).
ParsedScenario load_scenario_file(const std::string& path);

/// Semantic checks: id uniqueness, references, mtu, address clashes, event targets.
std::vector<Diagnostic> validate(const ScenarioConfig& config);

/// Serialises back to the JSON schema (pretty printed, stable key order).
std::string to_json(const ScenarioConfig& config);

/// Two mobile endpoints, each with its own home agent, both away from home.
/// Bindings are refreshed at t=0 and one mtu-filling packet is sent at t=2,
/// once per mechanism.
ScenarioConfig comparison_scenario(std::size_t mtu = 1500);

}  // namespace mip6
