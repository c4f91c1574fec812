#include "mip6/packet.hpp"

#include <algorithm>
#include <string>

#include "mip6/error.hpp"

namespace mip6 {
namespace {

// Header-extension length byte, in 8-octet units past the first 8 octets.
constexpr std::uint8_t kExtensionLengthField = (kExtensionHeaderSize / 8) - 1;
constexpr std::size_t kMaxPayloadLength = 0xffff;

bool is_terminal(HeaderKind kind) {
  return kind == HeaderKind::payload || kind == HeaderKind::mobility;
}

bool is_known(std::uint8_t tag) {
  switch (static_cast<HeaderKind>(tag)) {
    case HeaderKind::ipv6:
    case HeaderKind::type2_routing:
    case HeaderKind::home_address_option:
    case HeaderKind::mobility:
    case HeaderKind::payload:
      return true;
  }
  return false;
}

HeaderKind body_kind(const Packet& p) { return p.inner ? HeaderKind::ipv6 : p.upper; }

// Kind of the header that immediately follows the base header.
HeaderKind first_after_base(const Packet& p) {
  if (p.type2_routing) return HeaderKind::type2_routing;
  if (p.home_address_option) return HeaderKind::home_address_option;
  return body_kind(p);
}

std::size_t after_base_size(const Packet& p) {
  return wire_size(p) - kBaseHeaderSize;
}

void check_invariants(const Packet& p, int depth) {
  if (p.inner) {
    if (depth > 0) {
      throw Error(Errc::nesting_violation, "tunnel nested inside a tunnel");
    }
    if (!p.payload.empty()) {
      throw Error(Errc::malformed, "tunnel packet carries both an inner packet and a payload");
    }
    check_invariants(*p.inner, depth + 1);
  } else if (!is_terminal(p.upper)) {
    throw Error(Errc::malformed, "upper-layer kind must be payload or mobility");
  }
  if (after_base_size(p) > kMaxPayloadLength) {
    throw Error(Errc::oversize, "payload_length does not fit in 16 bits");
  }
  if (p.base.payload_length != after_base_size(p)) {
    throw Error(Errc::length_mismatch,
                "payload_length " + std::to_string(p.base.payload_length) + " but " +
                    std::to_string(after_base_size(p)) + " bytes follow the base header");
  }
  if (p.base.next_header != first_after_base(p)) {
    throw Error(Errc::malformed, "base next_header does not match the following header");
  }
}

void put_address(std::vector<std::uint8_t>& out, const Address& a) {
  out.insert(out.end(), a.bytes().begin(), a.bytes().end());
}

void put_extension(std::vector<std::uint8_t>& out, HeaderKind next, const Address& a) {
  out.push_back(static_cast<std::uint8_t>(next));
  out.push_back(kExtensionLengthField);
  put_address(out, a);
  out.insert(out.end(), 6, 0);
}

void encode_into(std::vector<std::uint8_t>& out, const Packet& p) {
  put_address(out, p.base.source);
  put_address(out, p.base.destination);
  out.push_back(static_cast<std::uint8_t>(p.base.payload_length >> 8));
  out.push_back(static_cast<std::uint8_t>(p.base.payload_length & 0xff));
  out.push_back(static_cast<std::uint8_t>(p.base.next_header));
  out.push_back(p.base.hop_limit);
  out.insert(out.end(), 4, 0);

  if (p.type2_routing) {
    HeaderKind next = p.home_address_option ? HeaderKind::home_address_option : body_kind(p);
    put_extension(out, next, p.type2_routing->home_address);
  }
  if (p.home_address_option) {
    put_extension(out, body_kind(p), p.home_address_option->home_address);
  }
  if (p.inner) {
    encode_into(out, *p.inner);
  } else {
    out.insert(out.end(), p.payload.begin(), p.payload.end());
  }
}

Address read_address(std::span<const std::uint8_t> bytes) {
  Address::Bytes raw{};
  std::copy_n(bytes.begin(), raw.size(), raw.begin());
  return Address(raw);
}

// Decodes exactly `bytes` as one packet.
Packet decode_exact(std::span<const std::uint8_t> bytes, int depth) {
  if (bytes.size() < kBaseHeaderSize) {
    throw Error(Errc::truncated, "need " + std::to_string(kBaseHeaderSize) +
                                     " bytes for a base header, have " +
                                     std::to_string(bytes.size()));
  }
  Packet p;
  p.base.source = read_address(bytes.subspan(0, 16));
  p.base.destination = read_address(bytes.subspan(16, 16));
  p.base.payload_length = static_cast<std::uint16_t>((bytes[32] << 8) | bytes[33]);
  p.base.hop_limit = bytes[35];
  if (!is_known(bytes[34])) {
    throw Error(Errc::unknown_header_kind, "unknown next_header " + std::to_string(bytes[34]));
  }
  p.base.next_header = static_cast<HeaderKind>(bytes[34]);

  std::size_t declared = kBaseHeaderSize + p.base.payload_length;
  if (declared > bytes.size()) {
    throw Error(Errc::truncated, "payload_length declares " + std::to_string(declared) +
                                     " bytes, have " + std::to_string(bytes.size()));
  }
  if (declared < bytes.size()) {
    throw Error(Errc::length_mismatch, "payload_length declares " + std::to_string(declared) +
                                           " bytes, have " + std::to_string(bytes.size()));
  }

  std::size_t offset = kBaseHeaderSize;
  HeaderKind kind = p.base.next_header;
  while (!is_terminal(kind) && kind != HeaderKind::ipv6) {
    if (bytes.size() - offset < kExtensionHeaderSize) {
      throw Error(Errc::truncated, "extension header cut short at offset " + std::to_string(offset));
    }
    auto ext = bytes.subspan(offset, kExtensionHeaderSize);
    if (ext[1] != kExtensionLengthField) {
      throw Error(Errc::length_mismatch, "extension header length field " + std::to_string(ext[1]));
    }
    Address addr = read_address(ext.subspan(2, 16));
    if (kind == HeaderKind::type2_routing) {
      if (p.type2_routing || p.home_address_option) {
        throw Error(Errc::malformed, "type 2 routing header out of order or repeated");
      }
      p.type2_routing = Type2RoutingHeader{addr};
    } else {
      if (p.home_address_option) {
        throw Error(Errc::malformed, "home address option repeated");
      }
      p.home_address_option = HomeAddressOption{addr};
    }
    if (!is_known(ext[0])) {
      throw Error(Errc::unknown_header_kind, "unknown next header " + std::to_string(ext[0]));
    }
    kind = static_cast<HeaderKind>(ext[0]);
    offset += kExtensionHeaderSize;
  }

  auto rest = bytes.subspan(offset);
  if (kind == HeaderKind::ipv6) {
    if (depth > 0) {
      throw Error(Errc::nesting_violation, "tunnel nested inside a tunnel");
    }
    p.inner = std::make_shared<const Packet>(decode_exact(rest, depth + 1));
  } else {
    p.upper = kind;
    p.payload.assign(rest.begin(), rest.end());
  }
  return p;
}

}  // namespace

std::string_view header_kind_name(HeaderKind kind) noexcept {
  switch (kind) {
    case HeaderKind::ipv6: return "ipv6";
    case HeaderKind::type2_routing: return "type2_routing";
    case HeaderKind::home_address_option: return "home_address_option";
    case HeaderKind::mobility: return "binding_update";
    case HeaderKind::payload: return "payload";
  }
  return "unknown";
}

bool operator==(const Packet& a, const Packet& b) {
  if (!(a.base == b.base && a.type2_routing == b.type2_routing &&
        a.home_address_option == b.home_address_option)) {
    return false;
  }
  if (a.inner || b.inner) {
    return a.inner && b.inner && *a.inner == *b.inner;
  }
  return a.upper == b.upper && a.payload == b.payload;
}

Packet make_packet(const Address& source, const Address& destination,
                   std::vector<std::uint8_t> payload, HeaderKind upper) {
  Packet p;
  p.base.source = source;
  p.base.destination = destination;
  p.upper = upper;
  p.payload = std::move(payload);
  seal(p);
  return p;
}

void seal(Packet& p) {
  p.base.next_header = first_after_base(p);
  p.base.payload_length = static_cast<std::uint16_t>(std::min(after_base_size(p), kMaxPayloadLength));
}

std::size_t wire_size(const Packet& p) noexcept {
  std::size_t size = kBaseHeaderSize + kExtensionHeaderSize * p.extension_header_count();
  return size + (p.inner ? wire_size(*p.inner) : p.payload.size());
}

std::vector<std::uint8_t> encode_packet(const Packet& p, std::size_t mtu) {
  std::size_t size = wire_size(p);
  if (size > mtu) {
    throw Error(Errc::oversize,
                "packet of " + std::to_string(size) + " bytes exceeds mtu " + std::to_string(mtu));
  }
  check_invariants(p, 0);
  std::vector<std::uint8_t> out;
  out.reserve(size);
  encode_into(out, p);
  return out;
}

Packet decode_packet(std::span<const std::uint8_t> bytes) { return decode_exact(bytes, 0); }

Packet encapsulate(const Packet& inner, const Address& outer_source,
                   const Address& outer_destination) {
  if (inner.inner) {
    throw Error(Errc::nesting_violation, "cannot encapsulate a packet that is already a tunnel");
  }
  Packet outer;
  outer.base.source = outer_source;
  outer.base.destination = outer_destination;
  outer.inner = std::make_shared<const Packet>(inner);
  seal(outer);
  return outer;
}

Packet decapsulate(const Packet& p) {
  if (!p.inner) {
    throw Error(Errc::not_a_tunnel, "packet to " + p.base.destination.to_string() +
                                        " carries no inner packet");
  }
  return *p.inner;
}

std::size_t innermost_payload_size(const Packet& p) noexcept {
  return p.inner ? innermost_payload_size(*p.inner) : p.payload.size();
}

std::vector<std::string_view> header_names(const Packet& p) {
  std::vector<std::string_view> names;
  const Packet* cur = &p;
  while (cur) {
    names.push_back(header_kind_name(HeaderKind::ipv6));
    if (cur->type2_routing) names.push_back(header_kind_name(HeaderKind::type2_routing));
    if (cur->home_address_option) names.push_back(header_kind_name(HeaderKind::home_address_option));
    if (!cur->inner && cur->upper == HeaderKind::mobility) {
      names.push_back(header_kind_name(HeaderKind::mobility));
    }
    cur = cur->inner.get();
  }
  return names;
}

}  // namespace mip6
