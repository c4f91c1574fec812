#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "mip6/address.hpp"
#include "mip6/packet.hpp"

namespace mip6 {

// Simulated time, in Internet-traversal units.
using SimTime = std::uint64_t;

enum class Mechanism {
  bidirectional_tunneling,
  route_optimization,
  tro,
  itro,
};

inline constexpr std::array<Mechanism, 4> kAllMechanisms = {
    Mechanism::bidirectional_tunneling, Mechanism::route_optimization, Mechanism::tro,
    Mechanism::itro};

std::string_view mechanism_name(Mechanism m) noexcept;
std::optional<Mechanism> parse_mechanism(std::string_view name) noexcept;

struct RotFlags {
  bool rot1 = false;
  bool rot0 = false;
  friend bool operator==(const RotFlags&, const RotFlags&) = default;
};

/// Maps the ROT1/ROT0 pair to a mechanism: 00 route optimization, 01 TRO,
/// 1x ITRO. Bidirectional tunneling is never flag-selected.
Mechanism select_mechanism(bool rot1, bool rot0) noexcept;

/// Flags a node advertises for `m`. ITRO advertises ROT1=1, ROT0=0;
/// bidirectional tunneling advertises 00.
RotFlags flags_for(Mechanism m) noexcept;

struct BindingUpdate {
  Address hoa;
  Address coa;
  std::uint32_t sequence = 0;
  std::uint16_t lifetime = 0;  // 0 deregisters
  RotFlags flags;
  friend bool operator==(const BindingUpdate&, const BindingUpdate&) = default;
};

inline constexpr std::size_t kBindingUpdateBodySize = 40;

// Body layout: [hoa 16][coa 16][sequence 4, big endian][lifetime 2, big endian]
//              [flags 1: bit1 ROT1, bit0 ROT0][reserved 1]
std::vector<std::uint8_t> encode_binding_update(const BindingUpdate& bu);
BindingUpdate decode_binding_update(std::span<const std::uint8_t> body);

/// A packet carrying `bu` from `source` to `destination` with a mobility body.
Packet make_binding_update_packet(const Address& source, const Address& destination,
                                  const BindingUpdate& bu);

struct BindingEntry {
  Address hoa;
  Address coa;
  SimTime expires_at = 0;
  std::uint32_t sequence = 0;
  RotFlags flags;

  bool live(SimTime now) const noexcept { return now < expires_at; }
  SimTime lifetime(SimTime now) const noexcept { return live(now) ? expires_at - now : 0; }
};

enum class ApplyOutcome {
  applied,
  removed,
  stale_sequence,
  coa_collision,  // applied, but another live HoA is bound to the same CoA
};

std::string_view apply_outcome_name(ApplyOutcome outcome) noexcept;

// HoA -> CoA bindings with expiry. Owned by one node.
class BindingCache {
 public:
  ApplyOutcome apply(const BindingUpdate& bu, SimTime now);

  std::optional<Address> lookup_coa(const Address& hoa, SimTime now) const;
  /// Throws Error(ambiguous_coa) when several live HoAs share `coa`.
  std::optional<Address> reverse_lookup_hoa(const Address& coa, SimTime now) const;

  const BindingEntry* find(const Address& hoa, SimTime now) const;
  /// True while two live entries share a CoA.
  bool degraded(SimTime now) const;

  /// Drops the entry for `hoa` if it has expired. Returns true when removed.
  bool evict_if_expired(const Address& hoa, SimTime now);

  std::size_t size() const noexcept { return entries_.size(); }
  std::size_t live_count(SimTime now) const;
  const std::map<Address, BindingEntry>& entries() const noexcept { return entries_; }

 private:
  std::size_t live_with_coa(const Address& coa, SimTime now) const;

  std::map<Address, BindingEntry> entries_;
};

}  // namespace mip6
