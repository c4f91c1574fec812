#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mip6/address.hpp"

namespace mip6 {

inline constexpr std::size_t kBaseHeaderSize = 40;
inline constexpr std::size_t kExtensionHeaderSize = 24;
inline constexpr std::size_t kDefaultMtu = 1500;
// Smallest MTU that fits a base header plus both extension headers.
inline constexpr std::size_t kMinimumMtu = kBaseHeaderSize + 2 * kExtensionHeaderSize;

// Tag carried in next-header fields. Values follow the IANA protocol numbers
// where one exists; opaque upper-layer data uses the experimentation value 253.
enum class HeaderKind : std::uint8_t {
  ipv6 = 41,
  type2_routing = 43,
  home_address_option = 60,
  mobility = 135,
  payload = 253,
};

std::string_view header_kind_name(HeaderKind kind) noexcept;

struct BaseHeader {
  Address source;
  Address destination;
  std::uint16_t payload_length = 0;
  HeaderKind next_header = HeaderKind::payload;
  std::uint8_t hop_limit = 64;

  friend bool operator==(const BaseHeader&, const BaseHeader&) = default;
};

struct HomeAddressOption {
  Address home_address;
  friend bool operator==(const HomeAddressOption&, const HomeAddressOption&) = default;
};

struct Type2RoutingHeader {
  Address home_address;
  friend bool operator==(const Type2RoutingHeader&, const Type2RoutingHeader&) = default;
};

// An IPv6 packet. Either `inner` (a tunnelled packet) or `payload` is used,
// never both. `upper` names what the payload bytes are when there is no inner
// packet. Build packets with make_packet()/encapsulate() or call seal() after
// editing fields so payload_length and the next-header chain stay consistent.
struct Packet {
  BaseHeader base;
  std::optional<Type2RoutingHeader> type2_routing;
  std::optional<HomeAddressOption> home_address_option;
  std::shared_ptr<const Packet> inner;
  HeaderKind upper = HeaderKind::payload;
  std::vector<std::uint8_t> payload;

  bool is_tunnel() const noexcept { return inner != nullptr; }
  std::size_t extension_header_count() const noexcept {
    return (type2_routing ? 1 : 0) + (home_address_option ? 1 : 0);
  }

  friend bool operator==(const Packet& a, const Packet& b);
};

Packet make_packet(const Address& source, const Address& destination,
                   std::vector<std::uint8_t> payload, HeaderKind upper = HeaderKind::payload);

/// Recomputes payload_length and the next-header chain from the packet's contents.
void seal(Packet& p);

std::size_t wire_size(const Packet& p) noexcept;

/// Throws Error(oversize) when the encoding would exceed `mtu`, and
/// Error(length_mismatch / malformed / nesting_violation) when `p` breaks the
/// packet invariants.
std::vector<std::uint8_t> encode_packet(const Packet& p, std::size_t mtu = kDefaultMtu);

/// Errors: truncated, unknown_header_kind, length_mismatch, malformed, nesting_violation.
Packet decode_packet(std::span<const std::uint8_t> bytes);

Packet encapsulate(const Packet& inner, const Address& outer_source, const Address& outer_destination);
Packet decapsulate(const Packet& p);

/// Payload size of the innermost packet (the upper-layer segment).
std::size_t innermost_payload_size(const Packet& p) noexcept;

/// Wire header sequence, outermost first: "ipv6", "type2_routing",
/// "home_address_option", then "ipv6" again for a tunnelled packet, and finally
/// "binding_update" when the body is a mobility message.
std::vector<std::string_view> header_names(const Packet& p);

}  // namespace mip6
