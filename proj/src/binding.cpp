#include "mip6/binding.hpp"

#include <algorithm>
#include <string>

#include "mip6/error.hpp"

namespace mip6 {

std::string_view mechanism_name(Mechanism m) noexcept {
  switch (m) {
    case Mechanism::bidirectional_tunneling: return "bidirectional_tunneling";
    case Mechanism::route_optimization: return "route_optimization";
    case Mechanism::tro: return "tro";
    case Mechanism::itro: return "itro";
  }
  return "unknown";
}

std::optional<Mechanism> parse_mechanism(std::string_view name) noexcept {
  for (auto m : kAllMechanisms) {
    if (mechanism_name(m) == name) return m;
  }
  return std::nullopt;
}

Mechanism select_mechanism(bool rot1, bool rot0) noexcept {
  if (rot1) return Mechanism::itro;
  return rot0 ? Mechanism::tro : Mechanism::route_optimization;
}

RotFlags flags_for(Mechanism m) noexcept {
  switch (m) {
    case Mechanism::tro: return {false, true};
    case Mechanism::itro: return {true, false};
    default: return {false, false};
  }
}

std::vector<std::uint8_t> encode_binding_update(const BindingUpdate& bu) {
  std::vector<std::uint8_t> out;
  out.reserve(kBindingUpdateBodySize);
  out.insert(out.end(), bu.hoa.bytes().begin(), bu.hoa.bytes().end());
  out.insert(out.end(), bu.coa.bytes().begin(), bu.coa.bytes().end());
  for (int shift = 24; shift >= 0; shift -= 8) {
    out.push_back(static_cast<std::uint8_t>(bu.sequence >> shift));
  }
  out.push_back(static_cast<std::uint8_t>(bu.lifetime >> 8));
  out.push_back(static_cast<std::uint8_t>(bu.lifetime));
  out.push_back(static_cast<std::uint8_t>((bu.flags.rot1 ? 2 : 0) | (bu.flags.rot0 ? 1 : 0)));
  out.push_back(0);
  return out;
}

BindingUpdate decode_binding_update(std::span<const std::uint8_t> body) {
  if (body.size() < kBindingUpdateBodySize) {
    throw Error(Errc::truncated, "binding update body of " + std::to_string(body.size()) + " bytes");
  }
  if (body.size() > kBindingUpdateBodySize) {
    throw Error(Errc::length_mismatch,
                "binding update body of " + std::to_string(body.size()) + " bytes");
  }
  BindingUpdate bu;
  Address::Bytes raw{};
  std::copy_n(body.begin(), 16, raw.begin());
  bu.hoa = Address(raw);
  std::copy_n(body.begin() + 16, 16, raw.begin());
  bu.coa = Address(raw);
  bu.sequence = (std::uint32_t{body[32]} << 24) | (std::uint32_t{body[33]} << 16) |
                (std::uint32_t{body[34]} << 8) | body[35];
  bu.lifetime = static_cast<std::uint16_t>((body[36] << 8) | body[37]);
  bu.flags.rot1 = (body[38] & 2) != 0;
  bu.flags.rot0 = (body[38] & 1) != 0;
  if (bu.hoa.is_unspecified()) {
    throw Error(Errc::malformed, "binding update for the unspecified address");
  }
  return bu;
}

Packet make_binding_update_packet(const Address& source, const Address& destination,
                                  const BindingUpdate& bu) {
  return make_packet(source, destination, encode_binding_update(bu), HeaderKind::mobility);
}

std::string_view apply_outcome_name(ApplyOutcome outcome) noexcept {
  switch (outcome) {
    case ApplyOutcome::applied: return "applied";
    case ApplyOutcome::removed: return "removed";
    case ApplyOutcome::stale_sequence: return "stale-sequence";
    case ApplyOutcome::coa_collision: return "coa-collision";
  }
  return "unknown";
}

ApplyOutcome BindingCache::apply(const BindingUpdate& bu, SimTime now) {
  if (bu.hoa.is_unspecified()) {
    throw Error(Errc::invalid_argument, "binding update for the unspecified address");
  }
  auto it = entries_.find(bu.hoa);
  if (it != entries_.end() && bu.sequence < it->second.sequence) {
    return ApplyOutcome::stale_sequence;
  }
  if (bu.lifetime == 0) {
    if (it != entries_.end()) entries_.erase(it);
    return ApplyOutcome::removed;
  }
  BindingEntry entry{bu.hoa, bu.coa, now + bu.lifetime, bu.sequence, bu.flags};
  entries_.insert_or_assign(bu.hoa, entry);
  return live_with_coa(bu.coa, now) > 1 ? ApplyOutcome::coa_collision : ApplyOutcome::applied;
}

const BindingEntry* BindingCache::find(const Address& hoa, SimTime now) const {
  auto it = entries_.find(hoa);
  if (it == entries_.end() || !it->second.live(now)) return nullptr;
  return &it->second;
}

std::optional<Address> BindingCache::lookup_coa(const Address& hoa, SimTime now) const {
  if (const auto* e = find(hoa, now)) return e->coa;
  return std::nullopt;
}

std::optional<Address> BindingCache::reverse_lookup_hoa(const Address& coa, SimTime now) const {
  std::optional<Address> found;
  for (const auto& [hoa, e] : entries_) {
    if (!e.live(now) || e.coa != coa) continue;
    if (found) {
      throw Error(Errc::ambiguous_coa, "care-of address " + coa.to_string() +
                                           " is bound by more than one home address");
    }
    found = hoa;
  }
  return found;
}

std::size_t BindingCache::live_with_coa(const Address& coa, SimTime now) const {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(), [&](const auto& kv) {
    return kv.second.live(now) && kv.second.coa == coa;
  }));
}

bool BindingCache::degraded(SimTime now) const {
  for (const auto& [hoa, e] : entries_) {
    if (e.live(now) && live_with_coa(e.coa, now) > 1) return true;
  }
  return false;
}

bool BindingCache::evict_if_expired(const Address& hoa, SimTime now) {
  auto it = entries_.find(hoa);
  if (it == entries_.end() || it->second.live(now)) return false;
  entries_.erase(it);
  return true;
}

std::size_t BindingCache::live_count(SimTime now) const {
  return static_cast<std::size_t>(std::count_if(entries_.begin(), entries_.end(),
                                                [&](const auto& kv) { return kv.second.live(now); }));
}

}  // namespace mip6
