#include "mip6/simnet.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"
#include "mip6/error.hpp"

namespace mip6 {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::string describe(const Event& ev, const std::vector<NodeState>& nodes) {
  std::ostringstream os;
  os << "t=" << ev.at << " ";
  std::visit(overloaded{
                 [&](const event::Deliver& e) {
                   os << "deliver " << nodes[e.from].id << "->" << nodes[e.to].id << " ("
                      << e.bytes.size() << " B)";
                 },
                 [&](const event::Move& e) { os << "move " << nodes[e.node].id; },
                 [&](const event::SendUlp& e) {
                   os << "send " << nodes[e.node].id << "->" << e.dst_hoa.to_string();
                 },
                 [&](const event::BindingExpiry& e) {
                   os << "expire " << e.hoa.to_string() << " at " << nodes[e.node].id;
                 },
             },
             ev.kind);
  return os.str();
}

}  // namespace

bool TraceRecord::is_signaling() const {
  return std::find(headers.begin(), headers.end(), header_kind_name(HeaderKind::mobility)) !=
         headers.end();
}

std::string to_json_line(const TraceRecord& r) {
  nlohmann::ordered_json j;
  j["time"] = r.time;
  j["from"] = r.from;
  j["to"] = r.to;
  j["wire_bytes"] = r.wire_bytes;
  j["mobility_bytes"] = r.mobility_bytes;
  j["headers"] = r.headers;
  j["mechanism"] = std::string(mechanism_name(r.mechanism));
  return j.dump();
}

std::string to_jsonl(const std::vector<TraceRecord>& trace) {
  std::string out;
  for (const auto& r : trace) {
    out += to_json_line(r);
    out += '\n';
  }
  return out;
}

World::World(std::size_t mtu, std::optional<Mechanism> mechanism, std::uint16_t bu_lifetime,
             std::uint64_t seed)
    : mtu_(mtu), mechanism_(mechanism), bu_lifetime_(bu_lifetime), rng_(seed) {}

NodeIndex World::add_node(NodeState node) {
  if (find(node.id)) {
    throw Error(Errc::invalid_argument, "duplicate node id '" + node.id + "'");
  }
  nodes_.push_back(std::move(node));
  return nodes_.size() - 1;
}

void World::set_home_agent(NodeIndex node, NodeIndex agent) {
  if (!nodes_.at(agent).is_home_agent() || nodes_.at(node).is_home_agent()) {
    throw Error(Errc::invalid_argument, "'" + nodes_[agent].id + "' cannot serve '" + nodes_[node].id + "'");
  }
  nodes_[node].home_agent = agent;
}

void World::add_peer(NodeIndex node, const Address& peer_hoa) {
  nodes_.at(node).peer_list.push_back(peer_hoa);
}

std::optional<NodeIndex> World::find(std::string_view id) const {
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].id == id) return i;
  }
  return std::nullopt;
}

NodeIndex World::index_of(std::string_view id) const {
  if (auto i = find(id)) return *i;
  throw Error(Errc::invalid_argument, "no node '" + std::string(id) + "'");
}

void World::schedule(SimTime at, decltype(Event::kind) kind) {
  queue_.emplace(Key{at, next_seq_++}, std::move(kind));
}

void World::move_node(NodeIndex node, const Address& new_coa, SimTime at) {
  if (!nodes_.at(node).is_mobile()) {
    throw Error(Errc::invalid_argument, "node '" + nodes_[node].id + "' is not mobile");
  }
  schedule(at, event::Move{node, new_coa});
}

void World::refresh_bindings(NodeIndex node, SimTime at) {
  if (nodes_.at(node).is_home_agent()) {
    throw Error(Errc::invalid_argument, "home agent '" + nodes_[node].id + "' has no bindings to announce");
  }
  schedule(at, event::Move{node, std::nullopt});
}

void World::send_ulp(NodeIndex node, const Address& dst_hoa, PayloadSpec payload, SimTime at) {
  if (nodes_.at(node).is_home_agent()) {
    throw Error(Errc::invalid_argument, "home agent '" + nodes_[node].id + "' cannot originate traffic");
  }
  schedule(at, event::SendUlp{node, dst_hoa, std::move(payload)});
}

bool World::quiescent() const noexcept {
  return std::all_of(queue_.begin(), queue_.end(), [](const auto& kv) {
    return std::holds_alternative<event::BindingExpiry>(kv.second);
  });
}

std::vector<Event> World::pending() const {
  std::vector<Event> events;
  events.reserve(queue_.size());
  for (const auto& [key, kind] : queue_) {
    events.push_back(Event{key.first, kind});
  }
  return events;
}

std::optional<NodeIndex> World::route(const Address& dst) const {
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].is_home_agent()) continue;
    if (auto coa = nodes_[i].registrations.lookup_coa(dst, now_); coa && *coa != dst) return i;
  }
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    if (nodes_[i].is_home_agent() && nodes_[i].hoa == dst) return i;
  }
  for (NodeIndex i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].is_home_agent() && nodes_[i].coa == dst) return i;
  }
  return std::nullopt;
}

EndpointContext World::context(const NodeState& n) const {
  std::optional<Address> ha;
  if (n.home_agent) ha = nodes_[*n.home_agent].hoa;
  return EndpointContext{n.hoa, n.coa, n.cache, mechanism_.value_or(Mechanism::route_optimization), ha};
}

void World::transmit(const Packet& p, NodeIndex from, NodeIndex to,
                     std::optional<std::uint64_t> ulp_id, SimTime sent_at, Mechanism mechanism,
                     StepResult& out) {
  auto bytes = encode_packet(p, mtu_);
  TraceRecord rec;
  rec.time = now_;
  rec.from = nodes_[from].id;
  rec.to = nodes_[to].id;
  rec.wire_bytes = bytes.size();
  rec.mobility_bytes = bytes.size() - kBaseHeaderSize - innermost_payload_size(p);
  for (auto h : header_names(p)) rec.headers.emplace_back(h);
  rec.mechanism = mechanism;
  if (!ulp_id) signaling_bytes_ += bytes.size();
  trace_.push_back(rec);
  out.trace.push_back(std::move(rec));
  schedule(now_ + 1, event::Deliver{std::move(bytes), from, to, ulp_id, sent_at, mechanism});
}

StepResult World::step() {
  if (queue_.empty()) {
    throw Error(Errc::invalid_argument, "step() on an empty event queue");
  }
  auto node = queue_.extract(queue_.begin());
  now_ = node.key().first;
  StepResult out;
  std::visit([&](const auto& e) { handle(e, out); }, node.mapped());
  return out;
}

RunResult World::run_until_quiescent(SimTime max_time) {
  while (!quiescent()) {
    auto next = queue_.begin();
    if (next->first.first > max_time) {
      std::ostringstream os;
      os << queue_.size() << " event(s) pending past t=" << max_time << ":";
      std::size_t shown = 0;
      for (const auto& ev : pending()) {
        if (shown++ == 8) {
          os << " ...";
          break;
        }
        os << " [" << describe(ev, nodes_) << "]";
      }
      throw Error(Errc::horizon_exceeded, os.str());
    }
    step();
  }
  return RunResult{trace_, deliveries_, sent_, drops_};
}

void World::handle(const event::Move& e, StepResult& out) {
  NodeState& n = nodes_[e.node];
  if (e.coa) n.coa = *e.coa;
  ++n.bu_sequence;
  BindingUpdate bu{n.hoa, n.coa, n.bu_sequence, bu_lifetime_, n.flags};
  Mechanism m = mechanism_.value_or(select_mechanism(n.flags.rot1, n.flags.rot0));

  std::vector<NodeIndex> targets;
  if (n.home_agent) targets.push_back(*n.home_agent);
  for (const auto& peer : n.peer_list) {
    auto it = std::find_if(nodes_.begin(), nodes_.end(), [&](const NodeState& other) {
      return !other.is_home_agent() && other.hoa == peer;
    });
    if (it == nodes_.end()) {
      ++signaling_["unroutable"];
      continue;
    }
    targets.push_back(static_cast<NodeIndex>(it - nodes_.begin()));
  }
  for (NodeIndex t : targets) {
    Packet p = make_binding_update_packet(n.coa, nodes_[t].hoa, bu);
    transmit(p, e.node, t, std::nullopt, now_, m, out);
  }
}

void World::handle(const event::SendUlp& e, StepResult& out) {
  NodeState& n = nodes_[e.node];
  EndpointContext ctx = context(n);
  Mechanism m = mechanism_for_peer(ctx, e.dst_hoa, now_);

  auto random_bytes = [&](std::size_t size) {
    std::vector<std::uint8_t> bytes(size);
    for (auto& b : bytes) b = static_cast<std::uint8_t>(rng_());
    return bytes;
  };
  UpperLayerPacket ulp{n.hoa, e.dst_hoa, {}};
  std::visit(overloaded{
                 [&](const std::vector<std::uint8_t>& bytes) { ulp.payload = bytes; },
                 [&](const GeneratedPayload& g) { ulp.payload = random_bytes(g.size); },
                 [&](const FillToMtu&) {
                   std::size_t overhead = wire_size(outbound(m, ulp, ctx, now_));
                   ulp.payload = random_bytes(mtu_ > overhead ? mtu_ - overhead : 0);
                 },
             },
             e.payload);

  Mechanism effective = m;
  if ((m == Mechanism::tro || m == Mechanism::itro) && !n.cache.lookup_coa(e.dst_hoa, now_)) {
    effective = Mechanism::route_optimization;
  }
  std::uint64_t id = next_ulp_id_++;
  sent_.push_back(SentUlp{id, n.id, ulp, now_, effective});

  try {
    Packet p = outbound(m, ulp, ctx, now_);
    auto to = route(p.base.destination);
    if (!to) {
      drop(errc_name(Errc::unroutable));
      return;
    }
    transmit(p, e.node, *to, id, now_, effective, out);
  } catch (const Error& err) {
    drop(errc_name(err.code()));
  }
}

void World::handle(const event::Deliver& e, StepResult& out) {
  Packet p;
  try {
    p = decode_packet(e.bytes);
  } catch (const Error& err) {
    if (e.ulp_id) {
      drop(errc_name(err.code()));
    } else {
      ++signaling_[std::string(errc_name(err.code()))];
    }
    return;
  }

  NodeState& n = nodes_[e.to];
  if (!p.inner && p.upper == HeaderKind::mobility) {
    try {
      BindingUpdate bu = decode_binding_update(p.payload);
      BindingCache& target = n.is_home_agent() ? n.registrations : n.cache;
      ApplyOutcome outcome = target.apply(bu, now_);
      ++signaling_[std::string(apply_outcome_name(outcome))];
      if (bu.lifetime > 0 && outcome != ApplyOutcome::stale_sequence) {
        schedule(now_ + bu.lifetime, event::BindingExpiry{e.to, bu.hoa});
      }
    } catch (const Error& err) {
      ++signaling_[std::string(errc_name(err.code()))];
    }
    return;
  }

  if (!e.ulp_id) {
    ++signaling_["unexpected-data"];
    return;
  }

  if (n.is_home_agent()) {
    try {
      Packet fwd = ha_forward(p, n.hoa, n.registrations, now_);
      auto next = route(fwd.base.destination);
      // Reverse-tunnelled traffic for another mobile served by this same agent
      // is re-tunnelled in place rather than sent back to ourselves.
      if (next == e.to) {
        fwd = ha_forward(fwd, n.hoa, n.registrations, now_);
        next = route(fwd.base.destination);
      }
      if (!next) {
        drop(errc_name(Errc::unroutable));
        return;
      }
      transmit(fwd, e.to, *next, e.ulp_id, e.sent_at, e.mechanism, out);
    } catch (const Error& err) {
      drop(errc_name(err.code()));
    }
    return;
  }

  try {
    UpperLayerPacket ulp = receive(p, context(n), now_);
    if (ulp.dst_hoa != n.hoa) {
      throw Error(Errc::misdelivery, "delivered to the wrong endpoint");
    }
    Delivery d{*e.ulp_id, n.id, std::move(ulp), e.sent_at, now_, e.mechanism};
    n.pending_ulp_queue.push_back(d);
    deliveries_.push_back(d);
    out.delivered.push_back(std::move(d));
  } catch (const Error& err) {
    drop(errc_name(err.code()));
  }
}

void World::handle(const event::BindingExpiry& e, StepResult&) {
  NodeState& n = nodes_[e.node];
  BindingCache& target = n.is_home_agent() ? n.registrations : n.cache;
  if (target.evict_if_expired(e.hoa, now_)) {
    ++signaling_["expired"];
  }
}

World build_world(const ScenarioConfig& config) {
  auto diags = validate(config);
  if (config.mechanisms.size() > 1) {
    diags.push_back({"config-invalid", "mechanism",
                     "a world runs one mechanism; expand the scenario with variants()"});
  }
  if (!diags.empty()) {
    std::string msg;
    for (const auto& d : diags) {
      if (!msg.empty()) msg += "; ";
      msg += d.to_string();
    }
    throw Error(Errc::config_invalid, msg);
  }

  std::optional<Mechanism> mechanism;
  if (!config.mechanisms.empty()) mechanism = config.mechanisms.front();

  World world(config.mtu, mechanism, config.bu_lifetime, config.seed);
  for (const auto& nc : config.nodes) {
    NodeState n;
    n.id = nc.id;
    n.role = nc.role;
    n.hoa = nc.home_address;
    n.coa = nc.location.value_or(nc.home_address);
    n.flags = nc.flags.value_or(mechanism ? flags_for(*mechanism) : RotFlags{});
    world.add_node(std::move(n));
  }
  // Second pass: resolve references now that every node exists.
  for (std::size_t i = 0; i < config.nodes.size(); ++i) {
    if (config.nodes[i].home_agent) {
      world.set_home_agent(i, world.index_of(*config.nodes[i].home_agent));
    }
  }
  for (const auto& peering : config.peerings) {
    world.add_peer(world.index_of(peering.node), peering.peer);
  }
  for (const auto& ev : config.schedule) {
    NodeIndex i = world.index_of(ev.node);
    switch (ev.kind) {
      case EventKind::move:
        world.move_node(i, ev.coa.value_or(world.node(i).hoa), ev.at);
        break;
      case EventKind::bu_refresh:
        world.refresh_bindings(i, ev.at);
        break;
      case EventKind::send:
        if (ev.size) {
          world.send_ulp(i, ev.to, GeneratedPayload{*ev.size}, ev.at);
        } else {
          world.send_ulp(i, ev.to, FillToMtu{}, ev.at);
        }
        break;
    }
  }
  return world;
}

}  // namespace mip6
