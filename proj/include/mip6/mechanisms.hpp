#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mip6/address.hpp"
#include "mip6/binding.hpp"
#include "mip6/packet.hpp"

namespace mip6 {

// What the upper layers hand to, and receive from, the tunnel manager.
// Addresses are always home addresses.
struct UpperLayerPacket {
  Address src_hoa;
  Address dst_hoa;
  std::vector<std::uint8_t> payload;

  friend bool operator==(const UpperLayerPacket&, const UpperLayerPacket&) = default;
};

// The view of one endpoint that the pipelines need. `cache` is the endpoint's
// binding cache of its peers; `home_agent` is only used by bidirectional tunneling.
struct EndpointContext {
  Address hoa;
  Address coa;
  const BindingCache& cache;
  Mechanism mechanism = Mechanism::route_optimization;
  std::optional<Address> home_agent;

  bool at_home() const noexcept { return hoa == coa; }
};

/// Mechanism `ctx` uses towards `peer_hoa`: bidirectional tunneling when so
/// configured, otherwise the peer's advertised ROT flags, or route optimization
/// when the peer has no live binding.
Mechanism mechanism_for_peer(const EndpointContext& ctx, const Address& peer_hoa, SimTime now);

// Outbound pipelines. Each returns the packet as it leaves the endpoint.
Packet ro_outbound(const UpperLayerPacket& ulp, const EndpointContext& ctx, SimTime now);
Packet tro_outbound(const UpperLayerPacket& ulp, const EndpointContext& ctx, SimTime now);
Packet itro_outbound(const UpperLayerPacket& ulp, const EndpointContext& ctx, SimTime now);
Packet bt_outbound(const UpperLayerPacket& ulp, const EndpointContext& ctx);
Packet outbound(Mechanism m, const UpperLayerPacket& ulp, const EndpointContext& ctx, SimTime now);

// Inbound pipelines. Errors: misdelivery, not_a_tunnel, unknown_sender, ambiguous_coa.
UpperLayerPacket ro_inbound(const Packet& wire, const EndpointContext& ctx);
UpperLayerPacket tro_inbound(const Packet& wire, const EndpointContext& ctx);
UpperLayerPacket bt_inbound(const Packet& wire, const EndpointContext& ctx);
UpperLayerPacket itro_inbound(const Packet& wire, const EndpointContext& ctx, SimTime now);

/// Endpoint receive path: picks the inbound pipeline from the packet's shape.
/// Tunnels are unwrapped, extension headers go through ro_inbound, and plain
/// packets have their source recovered from the binding cache when it is a
/// known care-of address.
UpperLayerPacket receive(const Packet& wire, const EndpointContext& ctx, SimTime now);

/// Home agent forwarding. A reverse-tunnel packet addressed to the agent is
/// unwrapped; a plain packet for a registered, away home address is tunnelled
/// to its care-of address. Throws Error(no_binding) otherwise.
Packet ha_forward(const Packet& wire, const Address& ha_address, const BindingCache& registrations,
                  SimTime now);

}  // namespace mip6
