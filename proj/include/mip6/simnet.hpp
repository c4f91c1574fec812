#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mip6/address.hpp"
#include "mip6/binding.hpp"
#include "mip6/mechanisms.hpp"
#include "mip6/packet.hpp"
#include "mip6/scenario.hpp"

namespace mip6 {

using NodeIndex = std::size_t;

struct Delivery {
  std::uint64_t ulp_id = 0;
  std::string node;
  UpperLayerPacket ulp;
  SimTime sent_at = 0;
  SimTime delivered_at = 0;
  Mechanism mechanism = Mechanism::route_optimization;

  SimTime latency() const noexcept { return delivered_at - sent_at; }
};

struct NodeState {
  std::string id;
  Role role = Role::mobile_node;
  Address hoa;
  Address coa;
  std::optional<NodeIndex> home_agent;
  BindingCache registrations;  // home agents only
  BindingCache cache;          // endpoints only
  std::vector<Address> peer_list;
  RotFlags flags;
  std::uint32_t bu_sequence = 0;
  std::vector<Delivery> pending_ulp_queue;  // delivered, not yet consumed by the upper layer

  bool is_home_agent() const noexcept { return role == Role::home_agent; }
  bool is_mobile() const noexcept { return home_agent.has_value(); }
  bool at_home() const noexcept { return hoa == coa; }
};

// One wire transmission. `time` is when the packet left `from`.
struct TraceRecord {
  SimTime time = 0;
  std::string from;
  std::string to;
  std::size_t wire_bytes = 0;
  std::size_t mobility_bytes = 0;
  std::vector<std::string> headers;
  Mechanism mechanism = Mechanism::route_optimization;

  bool is_signaling() const;
  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

/// One JSON object per line, keys in the order of the TraceRecord fields.
std::string to_json_line(const TraceRecord& record);
std::string to_jsonl(const std::vector<TraceRecord>& trace);

struct SentUlp {
  std::uint64_t ulp_id = 0;
  std::string node;
  UpperLayerPacket ulp;
  SimTime sent_at = 0;
  Mechanism mechanism = Mechanism::route_optimization;
};

struct FillToMtu {};
struct GeneratedPayload {
  std::size_t size = 0;
};
using PayloadSpec = std::variant<std::vector<std::uint8_t>, GeneratedPayload, FillToMtu>;

namespace event {
struct Deliver {
  std::vector<std::uint8_t> bytes;
  NodeIndex from = 0;
  NodeIndex to = 0;
  std::optional<std::uint64_t> ulp_id;  // absent for signaling
  SimTime sent_at = 0;
  Mechanism mechanism = Mechanism::route_optimization;
};
struct Move {
  NodeIndex node = 0;
  std::optional<Address> coa;  // nullopt: re-announce the current location
};
struct SendUlp {
  NodeIndex node = 0;
  Address dst_hoa;
  PayloadSpec payload;
};
struct BindingExpiry {
  NodeIndex node = 0;
  Address hoa;
};
}  // namespace event

struct Event {
  SimTime at = 0;
  std::variant<event::Deliver, event::Move, event::SendUlp, event::BindingExpiry> kind;
};

struct StepResult {
  std::vector<TraceRecord> trace;
  std::vector<Delivery> delivered;
};

struct RunResult {
  std::vector<TraceRecord> trace;
  std::vector<Delivery> deliveries;
  std::vector<SentUlp> sent;
  std::map<std::string, std::uint64_t> drops;
};

// Deterministic event-driven network. Every Internet traversal takes one unit.
class World {
 public:
  World(std::size_t mtu, std::optional<Mechanism> mechanism, std::uint16_t bu_lifetime,
        std::uint64_t seed);

  NodeIndex add_node(NodeState node);
  void set_home_agent(NodeIndex node, NodeIndex agent);
  void add_peer(NodeIndex node, const Address& peer_hoa);

  /// Schedules a location change at `at`; binding updates go out to the home
  /// agent and every peer and arrive one unit later.
  void move_node(NodeIndex node, const Address& new_coa, SimTime at);
  /// Re-sends binding updates for the node's current location.
  void refresh_bindings(NodeIndex node, SimTime at);
  void send_ulp(NodeIndex node, const Address& dst_hoa, PayloadSpec payload, SimTime at);

  /// Executes the earliest event. Precondition: !idle().
  StepResult step();
  /// Steps until no traffic or signaling is pending. Pending binding expiries
  /// do not keep the world busy. Throws Error(horizon_exceeded) if work remains
  /// past `max_time`; the trace gathered so far stays available.
  RunResult run_until_quiescent(SimTime max_time);

  bool idle() const noexcept { return queue_.empty(); }
  bool quiescent() const noexcept;

  SimTime now() const noexcept { return now_; }
  std::size_t mtu() const noexcept { return mtu_; }
  std::optional<Mechanism> configured_mechanism() const noexcept { return mechanism_; }

  const std::vector<NodeState>& nodes() const noexcept { return nodes_; }
  const NodeState& node(NodeIndex i) const { return nodes_.at(i); }
  std::optional<NodeIndex> find(std::string_view id) const;
  NodeIndex index_of(std::string_view id) const;

  /// Events in execution order.
  std::vector<Event> pending() const;

  const std::vector<TraceRecord>& trace() const noexcept { return trace_; }
  const std::vector<Delivery>& deliveries() const noexcept { return deliveries_; }
  const std::vector<SentUlp>& sent() const noexcept { return sent_; }
  const std::map<std::string, std::uint64_t>& drops() const noexcept { return drops_; }
  const std::map<std::string, std::uint64_t>& signaling_counters() const noexcept {
    return signaling_;
  }
  std::uint64_t signaling_bytes() const noexcept { return signaling_bytes_; }

  /// Where a packet addressed to `dst` goes next: a home agent holding an away
  /// registration for it, the home agent owning it, or the endpoint located there.
  std::optional<NodeIndex> route(const Address& dst) const;

 private:
  using Key = std::pair<SimTime, std::uint64_t>;

  void schedule(SimTime at, decltype(Event::kind) kind);
  EndpointContext context(const NodeState& n) const;
  void transmit(const Packet& p, NodeIndex from, NodeIndex to, std::optional<std::uint64_t> ulp_id,
                SimTime sent_at, Mechanism mechanism, StepResult& out);
  void drop(std::string_view reason) { ++drops_[std::string(reason)]; }

  void handle(const event::Deliver& e, StepResult& out);
  void handle(const event::Move& e, StepResult& out);
  void handle(const event::SendUlp& e, StepResult& out);
  void handle(const event::BindingExpiry& e, StepResult& out);

  std::size_t mtu_;
  std::optional<Mechanism> mechanism_;
  std::uint16_t bu_lifetime_;
  std::mt19937_64 rng_;
  SimTime now_ = 0;
  std::uint64_t next_seq_ = 0;
  std::uint64_t next_ulp_id_ = 0;
  std::vector<NodeState> nodes_;
  std::map<Key, decltype(Event::kind)> queue_;
  std::vector<TraceRecord> trace_;
  std::vector<Delivery> deliveries_;
  std::vector<SentUlp> sent_;
  std::map<std::string, std::uint64_t> drops_;
  std::map<std::string, std::uint64_t> signaling_;
  std::uint64_t signaling_bytes_ = 0;
};

/// Builds a world from a single-mechanism (or flag-driven) scenario and
/// schedules its events. Throws Error(config_invalid) listing every diagnostic.
World build_world(const ScenarioConfig& config);

}  // namespace mip6
