#include "mip6/mechanisms.hpp"

#include "mip6/error.hpp"

namespace mip6 {
namespace {

void require_source(const UpperLayerPacket& ulp, const EndpointContext& ctx) {
  if (ulp.src_hoa != ctx.hoa) {
    throw Error(Errc::invalid_argument, "upper-layer source " + ulp.src_hoa.to_string() +
                                            " is not this endpoint's home address");
  }
}

Packet plain(const UpperLayerPacket& ulp) {
  return make_packet(ulp.src_hoa, ulp.dst_hoa, ulp.payload);
}

}  // namespace

Mechanism mechanism_for_peer(const EndpointContext& ctx, const Address& peer_hoa, SimTime now) {
  if (ctx.mechanism == Mechanism::bidirectional_tunneling) {
    return Mechanism::bidirectional_tunneling;
  }
  if (const auto* e = ctx.cache.find(peer_hoa, now)) {
    return select_mechanism(e->flags.rot1, e->flags.rot0);
  }
  return Mechanism::route_optimization;
}

Packet ro_outbound(const UpperLayerPacket& ulp, const EndpointContext& ctx, SimTime now) {
  require_source(ulp, ctx);
  Packet p;
  p.base.source = ctx.coa;
  p.base.destination = ulp.dst_hoa;
  if (auto coa = ctx.cache.lookup_coa(ulp.dst_hoa, now); coa && *coa != ulp.dst_hoa) {
    p.base.destination = *coa;
    p.type2_routing = Type2RoutingHeader{ulp.dst_hoa};
  }
  if (!ctx.at_home()) {
    p.home_address_option = HomeAddressOption{ctx.hoa};
  }
  p.payload = ulp.payload;
  seal(p);
  return p;
}

Packet tro_outbound(const UpperLayerPacket& ulp, const EndpointContext& ctx, SimTime now) {
  require_source(ulp, ctx);
  auto coa = ctx.cache.lookup_coa(ulp.dst_hoa, now);
  if (!coa) {
    return ro_outbound(ulp, ctx, now);
  }
  return encapsulate(plain(ulp), ctx.coa, *coa);
}

Packet itro_outbound(const UpperLayerPacket& ulp, const EndpointContext& ctx, SimTime now) {
  require_source(ulp, ctx);
  auto coa = ctx.cache.lookup_coa(ulp.dst_hoa, now);
  if (!coa) {
    return ro_outbound(ulp, ctx, now);
  }
  return make_packet(ctx.coa, *coa, ulp.payload);
}

Packet bt_outbound(const UpperLayerPacket& ulp, const EndpointContext& ctx) {
  require_source(ulp, ctx);
  if (ctx.at_home()) {
    return plain(ulp);
  }
  if (!ctx.home_agent) {
    throw Error(Errc::invalid_argument, "reverse tunnel needs a home agent address");
  }
  return encapsulate(plain(ulp), ctx.coa, *ctx.home_agent);
}

Packet outbound(Mechanism m, const UpperLayerPacket& ulp, const EndpointContext& ctx, SimTime now) {
  switch (m) {
    case Mechanism::bidirectional_tunneling: return bt_outbound(ulp, ctx);
    case Mechanism::route_optimization: return ro_outbound(ulp, ctx, now);
    case Mechanism::tro: return tro_outbound(ulp, ctx, now);
    case Mechanism::itro: return itro_outbound(ulp, ctx, now);
  }
  throw Error(Errc::internal, "unhandled mechanism");
}

UpperLayerPacket ro_inbound(const Packet& wire, const EndpointContext& ctx) {
  if (wire.inner) {
    throw Error(Errc::malformed, "route-optimized packet unexpectedly carries a tunnel");
  }
  const Address& dst = wire.base.destination;
  if (dst != ctx.coa && dst != ctx.hoa) {
    throw Error(Errc::misdelivery, "packet for " + dst.to_string() + " reached " + ctx.hoa.to_string());
  }
  UpperLayerPacket ulp{wire.base.source, dst, wire.payload};
  if (wire.home_address_option) {
    ulp.src_hoa = wire.home_address_option->home_address;
  }
  if (wire.type2_routing) {
    if (wire.type2_routing->home_address != ctx.hoa) {
      throw Error(Errc::misdelivery, "type 2 routing header names " +
                                         wire.type2_routing->home_address.to_string());
    }
    ulp.dst_hoa = wire.type2_routing->home_address;
  } else if (dst == ctx.coa) {
    ulp.dst_hoa = ctx.hoa;
  }
  return ulp;
}

namespace {

UpperLayerPacket tunnel_inbound(const Packet& wire, const EndpointContext& ctx) {
  if (wire.base.destination != ctx.coa) {
    throw Error(Errc::misdelivery, "tunnel endpoint " + wire.base.destination.to_string() +
                                       " is not this care-of address");
  }
  Packet inner = decapsulate(wire);
  if (!inner.type2_routing && inner.base.destination != ctx.hoa) {
    throw Error(Errc::misdelivery, "inner packet for " + inner.base.destination.to_string() +
                                       " reached " + ctx.hoa.to_string());
  }
  return ro_inbound(inner, ctx);
}

}  // namespace

UpperLayerPacket tro_inbound(const Packet& wire, const EndpointContext& ctx) {
  return tunnel_inbound(wire, ctx);
}

UpperLayerPacket bt_inbound(const Packet& wire, const EndpointContext& ctx) {
  return tunnel_inbound(wire, ctx);
}

UpperLayerPacket itro_inbound(const Packet& wire, const EndpointContext& ctx, SimTime now) {
  if (wire.inner || wire.extension_header_count() != 0) {
    throw Error(Errc::malformed, "ITRO packet carries extension headers or a tunnel");
  }
  if (wire.base.destination != ctx.coa) {
    throw Error(Errc::misdelivery, "packet for " + wire.base.destination.to_string() +
                                       " reached care-of address " + ctx.coa.to_string());
  }
  auto sender = ctx.cache.reverse_lookup_hoa(wire.base.source, now);
  if (!sender) {
    throw Error(Errc::unknown_sender, "no binding for care-of address " + wire.base.source.to_string());
  }
  return UpperLayerPacket{*sender, ctx.hoa, wire.payload};
}

UpperLayerPacket receive(const Packet& wire, const EndpointContext& ctx, SimTime now) {
  if (wire.inner) {
    return tunnel_inbound(wire, ctx);
  }
  if (wire.extension_header_count() != 0) {
    return ro_inbound(wire, ctx);
  }
  // A plain packet addressed to our home address is ordinary IPv6 unless its
  // source is a care-of address we hold a binding for.
  if (wire.base.destination == ctx.hoa &&
      !ctx.cache.reverse_lookup_hoa(wire.base.source, now)) {
    return ro_inbound(wire, ctx);
  }
  return itro_inbound(wire, ctx, now);
}

Packet ha_forward(const Packet& wire, const Address& ha_address, const BindingCache& registrations,
                  SimTime now) {
  if (wire.inner && wire.base.destination == ha_address) {
    return decapsulate(wire);
  }
  const Address& dst = wire.base.destination;
  auto coa = registrations.lookup_coa(dst, now);
  if (!coa || *coa == dst) {
    throw Error(Errc::no_binding, "home agent " + ha_address.to_string() +
                                      " holds no registration for " + dst.to_string());
  }
  return encapsulate(wire, ha_address, *coa);
}

}  // namespace mip6
