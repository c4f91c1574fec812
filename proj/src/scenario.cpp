#include "mip6/scenario.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mip6/error.hpp"
#include "mip6/packet.hpp"

namespace mip6 {
namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::optional<Role> parse_role(std::string_view s) {
  if (s == "mobile_node") return Role::mobile_node;
  if (s == "correspondent_node") return Role::correspondent_node;
  if (s == "home_agent") return Role::home_agent;
  return std::nullopt;
}

std::string_view event_kind_name(EventKind k) {
  switch (k) {
    case EventKind::move: return "move";
    case EventKind::send: return "send";
    case EventKind::bu_refresh: return "bu_refresh";
  }
  return "unknown";
}

std::optional<EventKind> parse_event_kind(std::string_view s) {
  for (auto k : {EventKind::move, EventKind::send, EventKind::bu_refresh}) {
    if (event_kind_name(k) == s) return k;
  }
  return std::nullopt;
}

// Reads typed fields out of a JSON object, recording a diagnostic instead of
// throwing when a field is missing or has the wrong shape.
class Reader {
 public:
  explicit Reader(std::vector<Diagnostic>& diags) : diags_(diags) {}

  void fail(const std::string& path, const std::string& message) {
    diags_.push_back({"invalid-field", path, message});
  }

  template <class T>
  std::optional<T> number(const json& obj, const char* key, const std::string& path, bool required) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(path + key, "missing");
      return std::nullopt;
    }
    if (!it->is_number_unsigned()) {
      fail(path + key, "expected a non-negative integer");
      return std::nullopt;
    }
    auto v = it->get<std::uint64_t>();
    if (v > static_cast<std::uint64_t>(std::numeric_limits<T>::max())) {
      fail(path + key, "value out of range");
      return std::nullopt;
    }
    return static_cast<T>(v);
  }

  std::optional<std::string> string(const json& obj, const char* key, const std::string& path,
                                    bool required) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(path + key, "missing");
      return std::nullopt;
    }
    if (!it->is_string()) {
      fail(path + key, "expected a string");
      return std::nullopt;
    }
    return it->get<std::string>();
  }

  std::optional<Address> address(const json& obj, const char* key, const std::string& path,
                                 bool required) {
    auto s = string(obj, key, path, required);
    if (!s) return std::nullopt;
    auto a = Address::parse(*s);
    if (!a) fail(path + key, "'" + *s + "' is not an IPv6 address");
    return a;
  }

  // "home" or an address. Outer nullopt: absent or bad; inner nullopt: home.
  std::optional<std::optional<Address>> location(const json& obj, const char* key,
                                                 const std::string& path, bool required) {
    auto s = string(obj, key, path, required);
    if (!s) return std::nullopt;
    if (*s == "home") return std::optional<Address>{};
    auto a = Address::parse(*s);
    if (!a) {
      fail(path + key, "'" + *s + "' is neither \"home\" nor an IPv6 address");
      return std::nullopt;
    }
    return std::optional<Address>{*a};
  }

  std::optional<bool> bit(const json& obj, const char* key, const std::string& path) {
    auto v = number<unsigned>(obj, key, path, false);
    if (!v) return std::nullopt;
    if (*v > 1) {
      fail(path + key, "expected 0 or 1");
      return std::nullopt;
    }
    return *v == 1;
  }

 private:
  std::vector<Diagnostic>& diags_;
};

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1, column = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

void read_mechanisms(const json& doc, Reader& rd, ScenarioConfig& cfg) {
  auto it = doc.find("mechanism");
  if (it == doc.end()) return;
  std::vector<json> names;
  if (it->is_array()) {
    names.assign(it->begin(), it->end());
  } else {
    names.push_back(*it);
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::string path = it->is_array() ? "mechanism[" + std::to_string(i) + "]" : "mechanism";
    if (!names[i].is_string()) {
      rd.fail(path, "expected a mechanism name");
      continue;
    }
    auto m = parse_mechanism(names[i].get<std::string>());
    if (!m) {
      rd.fail(path, "unknown mechanism '" + names[i].get<std::string>() + "'");
      continue;
    }
    cfg.mechanisms.push_back(*m);
  }
}

void read_nodes(const json& doc, Reader& rd, ScenarioConfig& cfg) {
  auto it = doc.find("nodes");
  if (it == doc.end()) return;
  if (!it->is_array()) {
    rd.fail("nodes", "expected an array");
    return;
  }
  for (std::size_t i = 0; i < it->size(); ++i) {
    const json& n = (*it)[i];
    std::string path = "nodes[" + std::to_string(i) + "].";
    if (!n.is_object()) {
      rd.fail(path.substr(0, path.size() - 1), "expected an object");
      continue;
    }
    NodeConfig nc;
    nc.id = rd.string(n, "id", path, true).value_or("");
    if (auto role = rd.string(n, "role", path, true)) {
      if (auto r = parse_role(*role)) {
        nc.role = *r;
      } else {
        rd.fail(path + "role", "unknown role '" + *role + "'");
      }
    }
    const char* addr_key = n.contains("address") ? "address" : "home_address";
    nc.home_address = rd.address(n, addr_key, path, true).value_or(Address{});
    nc.home_agent = rd.string(n, "home_agent", path, false);
    if (auto loc = rd.location(n, "location", path, false)) nc.location = *loc;
    auto rot1 = rd.bit(n, "rot1", path);
    auto rot0 = rd.bit(n, "rot0", path);
    if (rot1 || rot0) nc.flags = RotFlags{rot1.value_or(false), rot0.value_or(false)};
    cfg.nodes.push_back(std::move(nc));
  }
}

void read_peerings(const json& doc, Reader& rd, ScenarioConfig& cfg) {
  auto it = doc.find("peerings");
  if (it == doc.end()) return;
  if (!it->is_array()) {
    rd.fail("peerings", "expected an array");
    return;
  }
  for (std::size_t i = 0; i < it->size(); ++i) {
    const json& p = (*it)[i];
    std::string path = "peerings[" + std::to_string(i) + "].";
    if (!p.is_object()) {
      rd.fail(path.substr(0, path.size() - 1), "expected an object");
      continue;
    }
    auto node = rd.string(p, "node", path, true);
    auto peer = rd.address(p, "peer", path, true);
    if (node && peer) cfg.peerings.push_back({*node, *peer});
  }
}

void read_schedule(const json& doc, Reader& rd, ScenarioConfig& cfg) {
  auto it = doc.find("schedule");
  if (it == doc.end()) return;
  if (!it->is_array()) {
    rd.fail("schedule", "expected an array");
    return;
  }
  for (std::size_t i = 0; i < it->size(); ++i) {
    const json& e = (*it)[i];
    std::string path = "schedule[" + std::to_string(i) + "].";
    if (!e.is_object()) {
      rd.fail(path.substr(0, path.size() - 1), "expected an object");
      continue;
    }
    ScheduledEvent ev;
    bool ok = true;
    if (auto at = rd.number<SimTime>(e, "at", path, true)) ev.at = *at; else ok = false;
    if (auto node = rd.string(e, "node", path, true)) ev.node = *node; else ok = false;
    auto kind_name = rd.string(e, "event", path, true);
    auto kind = kind_name ? parse_event_kind(*kind_name) : std::nullopt;
    if (kind_name && !kind) rd.fail(path + "event", "unknown event '" + *kind_name + "'");
    if (!kind) continue;
    ev.kind = *kind;
    if (ev.kind == EventKind::move) {
      if (auto loc = rd.location(e, "coa", path, true)) ev.coa = *loc; else ok = false;
    } else if (ev.kind == EventKind::send) {
      if (auto to = rd.address(e, "to", path, true)) ev.to = *to; else ok = false;
      auto size = e.find("size");
      if (size == e.end()) {
        rd.fail(path + "size", "missing");
        ok = false;
      } else if (size->is_string() && size->get<std::string>() == "max") {
        ev.size = std::nullopt;
      } else if (auto n = rd.number<std::size_t>(e, "size", path, true)) {
        ev.size = *n;
      } else {
        ok = false;
      }
    }
    if (ok) cfg.schedule.push_back(std::move(ev));
  }
}

}  // namespace

std::string_view role_name(Role r) noexcept {
  switch (r) {
    case Role::mobile_node: return "mobile_node";
    case Role::correspondent_node: return "correspondent_node";
    case Role::home_agent: return "home_agent";
  }
  return "unknown";
}

std::string Diagnostic::to_string() const {
  return code + ": " + (path.empty() ? "" : path + ": ") + message;
}

const NodeConfig* ScenarioConfig::find_node(std::string_view id) const {
  for (const auto& n : nodes) {
    if (n.id == id) return &n;
  }
  return nullptr;
}

std::vector<ScenarioConfig> ScenarioConfig::variants() const {
  if (mechanisms.size() <= 1) return {*this};
  std::vector<ScenarioConfig> out;
  for (auto m : mechanisms) {
    ScenarioConfig v = *this;
    v.mechanisms = {m};
    out.push_back(std::move(v));
  }
  return out;
}

ParsedScenario parse_scenario(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte);
    std::string what = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] parse error at line 1, column 2: " prefix.
    if (auto pos = what.find(": "); pos != std::string::npos) what = what.substr(pos + 2);
    throw Error(Errc::parse_error,
                "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + what);
  }

  ParsedScenario out;
  if (!doc.is_object()) {
    out.diagnostics.push_back({"invalid-field", "", "top level must be an object"});
    return out;
  }
  Reader rd(out.diagnostics);
  ScenarioConfig& cfg = out.config;
  if (auto v = rd.number<int>(doc, "version", "", true)) cfg.version = *v;
  if (auto v = rd.number<std::size_t>(doc, "mtu", "", false)) cfg.mtu = *v;
  if (auto v = rd.number<std::uint64_t>(doc, "seed", "", false)) cfg.seed = *v;
  if (auto v = rd.number<std::uint16_t>(doc, "bu_lifetime", "", false)) cfg.bu_lifetime = *v;
  if (auto v = rd.number<SimTime>(doc, "horizon", "", false)) cfg.horizon = *v;
  read_mechanisms(doc, rd, cfg);
  read_nodes(doc, rd, cfg);
  read_peerings(doc, rd, cfg);
  read_schedule(doc, rd, cfg);

  static const std::set<std::string> known = {"version", "mtu", "seed", "bu_lifetime", "horizon",
                                               "mechanism", "nodes", "peerings", "schedule"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.count(key)) rd.fail(key, "unknown field");
  }
  return out;
}

ParsedScenario load_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(Errc::file_not_found, "cannot open '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str());
}

std::vector<Diagnostic> validate(const ScenarioConfig& cfg) {
  std::vector<Diagnostic> d;
  auto add = [&](std::string code, std::string path, std::string msg) {
    d.push_back({std::move(code), std::move(path), std::move(msg)});
  };

  if (cfg.version != kScenarioVersion) {
    add("unsupported-version", "version",
        "version " + std::to_string(cfg.version) + " is not supported (expected " +
            std::to_string(kScenarioVersion) + ")");
  }
  if (cfg.mtu < kMinimumMtu) {
    add("mtu-too-small", "mtu",
        "mtu " + std::to_string(cfg.mtu) + " is below " + std::to_string(kMinimumMtu) + " bytes");
  } else if (cfg.mtu > kBaseHeaderSize + 0xffff) {
    add("config-invalid", "mtu", "mtu " + std::to_string(cfg.mtu) + " exceeds the 16-bit length field");
  }
  if (cfg.bu_lifetime == 0) add("config-invalid", "bu_lifetime", "must be positive");
  for (std::size_t i = 0; i < cfg.mechanisms.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (cfg.mechanisms[i] == cfg.mechanisms[j]) {
        add("config-invalid", "mechanism[" + std::to_string(i) + "]", "listed twice");
      }
    }
  }

  std::set<std::string> ids;
  std::set<Address> home_addresses;
  std::set<Address> locations;
  for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
    const NodeConfig& n = cfg.nodes[i];
    std::string path = "nodes[" + std::to_string(i) + "]";
    if (n.id.empty()) add("config-invalid", path + ".id", "empty node id");
    if (!ids.insert(n.id).second) add("duplicate-id", path + ".id", "node id '" + n.id + "' is used twice");
    if (n.home_address.is_unspecified()) {
      add("config-invalid", path + ".home_address", "unspecified address");
    } else if (!home_addresses.insert(n.home_address).second) {
      add("address-conflict", path + ".home_address",
          n.home_address.to_string() + " is assigned to more than one node");
    }
    if (n.role == Role::home_agent) {
      if (n.home_agent) add("config-invalid", path + ".home_agent", "a home agent has no home agent");
      if (n.location) add("config-invalid", path + ".location", "home agents do not move");
      if (n.flags) add("config-invalid", path + ".rot1", "home agents do not advertise ROT flags");
      continue;
    }
    if (n.home_agent) {
      const NodeConfig* ha = cfg.find_node(*n.home_agent);
      if (!ha) {
        add("dangling-reference", path + ".home_agent", "unknown node id '" + *n.home_agent + "'");
      } else if (ha->role != Role::home_agent) {
        add("dangling-reference", path + ".home_agent", "'" + *n.home_agent + "' is not a home agent");
      }
    } else if (n.role == Role::mobile_node) {
      add("dangling-reference", path + ".home_agent", "mobile node '" + n.id + "' needs a home agent");
    } else if (n.location) {
      add("config-invalid", path + ".location", "a stationary node cannot start away from home");
    }
    if (n.location && !locations.insert(*n.location).second) {
      add("address-conflict", path + ".location", n.location->to_string() + " is occupied twice");
    }
  }
  for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
    const auto& loc = cfg.nodes[i].location;
    if (loc && *loc != cfg.nodes[i].home_address && home_addresses.count(*loc)) {
      add("address-conflict", "nodes[" + std::to_string(i) + "].location",
          loc->to_string() + " is another node's home address");
    }
  }

  auto endpoint_with_hoa = [&](const Address& a) -> const NodeConfig* {
    for (const auto& n : cfg.nodes) {
      if (n.role != Role::home_agent && n.home_address == a) return &n;
    }
    return nullptr;
  };
  auto check_endpoint = [&](const std::string& id, const std::string& path) -> const NodeConfig* {
    const NodeConfig* n = cfg.find_node(id);
    if (!n) {
      add("dangling-reference", path, "unknown node id '" + id + "'");
    } else if (n->role == Role::home_agent) {
      add("config-invalid", path, "'" + id + "' is a home agent, not an endpoint");
      return nullptr;
    }
    return n;
  };

  for (std::size_t i = 0; i < cfg.peerings.size(); ++i) {
    const Peering& p = cfg.peerings[i];
    std::string path = "peerings[" + std::to_string(i) + "]";
    const NodeConfig* n = check_endpoint(p.node, path + ".node");
    const NodeConfig* peer = endpoint_with_hoa(p.peer);
    if (!peer) {
      add("dangling-reference", path + ".peer", p.peer.to_string() + " is no endpoint's home address");
    } else if (n && peer == n) {
      add("config-invalid", path + ".peer", "a node cannot peer with itself");
    }
  }

  for (std::size_t i = 0; i < cfg.schedule.size(); ++i) {
    const ScheduledEvent& ev = cfg.schedule[i];
    std::string path = "schedule[" + std::to_string(i) + "]";
    const NodeConfig* n = check_endpoint(ev.node, path + ".node");
    if (!n) continue;
    switch (ev.kind) {
      case EventKind::move:
        if (!n->home_agent) add("invalid-event", path + ".node", "'" + n->id + "' is not mobile");
        if (ev.coa && *ev.coa != n->home_address && home_addresses.count(*ev.coa)) {
          add("address-conflict", path + ".coa", ev.coa->to_string() + " is another node's home address");
        }
        break;
      case EventKind::send:
        if (!endpoint_with_hoa(ev.to)) {
          add("dangling-reference", path + ".to", ev.to.to_string() + " is no endpoint's home address");
        } else if (ev.to == n->home_address) {
          add("invalid-event", path + ".to", "a node cannot send to itself");
        }
        if (ev.size && *ev.size + kBaseHeaderSize > cfg.mtu) {
          add("payload-too-large", path + ".size",
              std::to_string(*ev.size) + " bytes cannot fit in mtu " + std::to_string(cfg.mtu));
        }
        break;
      case EventKind::bu_refresh:
        break;
    }
  }
  return d;
}

std::string to_json(const ScenarioConfig& cfg) {
  ordered_json doc;
  doc["version"] = cfg.version;
  doc["mtu"] = cfg.mtu;
  doc["seed"] = cfg.seed;
  if (cfg.mechanisms.size() == 1) {
    doc["mechanism"] = std::string(mechanism_name(cfg.mechanisms.front()));
  } else if (!cfg.mechanisms.empty()) {
    ordered_json arr = ordered_json::array();
    for (auto m : cfg.mechanisms) arr.push_back(std::string(mechanism_name(m)));
    doc["mechanism"] = arr;
  }
  doc["bu_lifetime"] = cfg.bu_lifetime;
  doc["horizon"] = cfg.horizon;
  doc["nodes"] = ordered_json::array();
  for (const auto& n : cfg.nodes) {
    ordered_json j;
    j["id"] = n.id;
    j["role"] = std::string(role_name(n.role));
    j[n.role == Role::home_agent ? "address" : "home_address"] = n.home_address.to_string();
    if (n.home_agent) j["home_agent"] = *n.home_agent;
    if (n.role != Role::home_agent) j["location"] = n.location ? n.location->to_string() : "home";
    if (n.flags) {
      j["rot1"] = n.flags->rot1 ? 1 : 0;
      j["rot0"] = n.flags->rot0 ? 1 : 0;
    }
    doc["nodes"].push_back(j);
  }
  doc["peerings"] = ordered_json::array();
  for (const auto& p : cfg.peerings) {
    doc["peerings"].push_back({{"node", p.node}, {"peer", p.peer.to_string()}});
  }
  doc["schedule"] = ordered_json::array();
  for (const auto& ev : cfg.schedule) {
    ordered_json j;
    j["at"] = ev.at;
    j["event"] = std::string(event_kind_name(ev.kind));
    j["node"] = ev.node;
    if (ev.kind == EventKind::move) j["coa"] = ev.coa ? ev.coa->to_string() : "home";
    if (ev.kind == EventKind::send) {
      j["to"] = ev.to.to_string();
      if (ev.size) {
        j["size"] = *ev.size;
      } else {
        j["size"] = "max";
      }
    }
    doc["schedule"].push_back(j);
  }
  return doc.dump(2) + "\n";
}

ScenarioConfig comparison_scenario(std::size_t mtu) {
  ScenarioConfig cfg;
  cfg.mtu = mtu;
  cfg.seed = 1;
  cfg.mechanisms.assign(kAllMechanisms.begin(), kAllMechanisms.end());
  const Address ha_mn = Address::from_string("2001:db8:1::1");
  const Address ha_cn = Address::from_string("2001:db8:2::1");
  const Address mn = Address::from_string("2001:db8:1::10");
  const Address cn = Address::from_string("2001:db8:2::20");
  cfg.nodes = {
      {"ha_mn", Role::home_agent, ha_mn, std::nullopt, std::nullopt, std::nullopt},
      {"ha_cn", Role::home_agent, ha_cn, std::nullopt, std::nullopt, std::nullopt},
      {"mn", Role::mobile_node, mn, "ha_mn", Address::from_string("2001:db8:a::10"), std::nullopt},
      {"cn", Role::correspondent_node, cn, "ha_cn", Address::from_string("2001:db8:b::20"), std::nullopt},
  };
  cfg.peerings = {{"mn", cn}, {"cn", mn}};
  ScheduledEvent refresh_mn{0, EventKind::bu_refresh, "mn", std::nullopt, Address{}, std::nullopt};
  ScheduledEvent refresh_cn{0, EventKind::bu_refresh, "cn", std::nullopt, Address{}, std::nullopt};
  ScheduledEvent send{2, EventKind::send, "mn", std::nullopt, cn, std::nullopt};
  cfg.schedule = {refresh_mn, refresh_cn, send};
  return cfg;
}

}  // namespace mip6
