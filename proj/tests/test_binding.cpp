#include <random>
#include <set>

#include "doctest.h"
#include "mip6/binding.hpp"
#include "mip6/error.hpp"
#include "support/common.hpp"
#include "support/generators.hpp"

using namespace mip6;
using namespace mip6::testing;

namespace {

BindingUpdate bu(const Address& hoa, const Address& coa, std::uint32_t seq, std::uint16_t life,
                 RotFlags flags = {}) {
  return BindingUpdate{hoa, coa, seq, life, flags};
}

}  // namespace

TEST_CASE("first binding update creates an entry") {
  BindingCache cache;
  CHECK(cache.apply(bu(kMnHoa, kMnCoa, 1, 100), 0) == ApplyOutcome::applied);
  CHECK(cache.size() == 1);
  CHECK(cache.lookup_coa(kMnHoa, 0) == kMnCoa);
  const auto* e = cache.find(kMnHoa, 0);
  REQUIRE(e);
  CHECK(e->sequence == 1);
  CHECK(e->expires_at == 100);
  CHECK(e->lifetime(40) == 60);
}

TEST_CASE("stale sequence is ignored") {
  BindingCache cache;
  cache.apply(bu(kMnHoa, kMnCoa, 5, 100), 0);
  CHECK(cache.apply(bu(kMnHoa, kCnCoa, 4, 100), 1) == ApplyOutcome::stale_sequence);
  CHECK(cache.lookup_coa(kMnHoa, 1) == kMnCoa);
  CHECK(cache.find(kMnHoa, 1)->sequence == 5);

  // equal sequence numbers refresh
  CHECK(cache.apply(bu(kMnHoa, kCnCoa, 5, 100), 2) == ApplyOutcome::applied);
  CHECK(cache.lookup_coa(kMnHoa, 2) == kCnCoa);
}

TEST_CASE("zero lifetime removes") {
  BindingCache cache;
  cache.apply(bu(kMnHoa, kMnCoa, 1, 100), 0);
  CHECK(cache.apply(bu(kMnHoa, kMnCoa, 2, 0), 5) == ApplyOutcome::removed);
  CHECK(cache.size() == 0);
  CHECK_FALSE(cache.lookup_coa(kMnHoa, 5));
  CHECK(cache.apply(bu(kCnHoa, kCnCoa, 1, 0), 5) == ApplyOutcome::removed);
}

TEST_CASE("two home addresses on one care-of address") {
  const Address h1 = Address::from_string("2001:db8:1::1:1");
  const Address h2 = Address::from_string("2001:db8:1::1:2");
  const Address c = Address::from_string("2001:db8:c::1");
  BindingCache cache;
  CHECK(cache.apply(bu(h1, c, 1, 100), 0) == ApplyOutcome::applied);
  CHECK_FALSE(cache.degraded(0));
  CHECK(cache.apply(bu(h2, c, 1, 100), 0) == ApplyOutcome::coa_collision);
  CHECK(cache.degraded(0));
  CHECK(cache.lookup_coa(h1, 0) == c);
  CHECK(cache.lookup_coa(h2, 0) == c);
  CHECK(error_of([&] { cache.reverse_lookup_hoa(c, 0); }) == Errc::ambiguous_coa);

  cache.apply(bu(h1, kMnCoa, 2, 100), 1);
  CHECK_FALSE(cache.degraded(1));
  CHECK(cache.reverse_lookup_hoa(c, 1) == h2);
}

TEST_CASE("entries expire") {
  BindingCache cache;
  cache.apply(bu(kMnHoa, kMnCoa, 1, 100), 0);
  CHECK(cache.lookup_coa(kMnHoa, 50) == kMnCoa);
  CHECK(cache.lookup_coa(kMnHoa, 99) == kMnCoa);
  CHECK_FALSE(cache.lookup_coa(kMnHoa, 100));
  CHECK_FALSE(cache.lookup_coa(kMnHoa, 101));
  CHECK_FALSE(cache.reverse_lookup_hoa(kMnCoa, 101));
  CHECK(cache.live_count(101) == 0);

  CHECK_FALSE(cache.evict_if_expired(kMnHoa, 99));
  CHECK(cache.evict_if_expired(kMnHoa, 101));
  CHECK(cache.size() == 0);
}

TEST_CASE("expired collisions do not degrade") {
  const Address c = Address::from_string("2001:db8:c::1");
  BindingCache cache;
  cache.apply(bu(kMnHoa, c, 1, 10), 0);
  CHECK(cache.apply(bu(kCnHoa, c, 1, 100), 20) == ApplyOutcome::applied);
  CHECK(cache.reverse_lookup_hoa(c, 20) == kCnHoa);
}

TEST_CASE("reverse lookup") {
  BindingCache cache;
  cache.apply(bu(kMnHoa, kMnCoa, 1, 100), 0);
  cache.apply(bu(kCnHoa, kCnCoa, 1, 100), 0);
  CHECK(cache.reverse_lookup_hoa(kMnCoa, 1) == kMnHoa);
  CHECK(cache.reverse_lookup_hoa(kCnCoa, 1) == kCnHoa);
  CHECK_FALSE(cache.reverse_lookup_hoa(kHaMn, 1));
}

TEST_CASE("unspecified home address is rejected") {
  BindingCache cache;
  CHECK(error_of([&] { cache.apply(bu(Address{}, kMnCoa, 1, 1), 0); }) == Errc::invalid_argument);
}

TEST_CASE("ROT flags select the mechanism") {
  CHECK(select_mechanism(false, false) == Mechanism::route_optimization);
  CHECK(select_mechanism(false, true) == Mechanism::tro);
  CHECK(select_mechanism(true, false) == Mechanism::itro);
  CHECK(select_mechanism(true, true) == Mechanism::itro);

  for (Mechanism m : kAllMechanisms) {
    auto f = flags_for(m);
    Mechanism expected = m == Mechanism::bidirectional_tunneling ? Mechanism::route_optimization : m;
    CHECK(select_mechanism(f.rot1, f.rot0) == expected);
  }
  CHECK(flags_for(Mechanism::itro) == RotFlags{true, false});
}

TEST_CASE("mechanism names") {
  for (Mechanism m : kAllMechanisms) CHECK(parse_mechanism(mechanism_name(m)) == m);
  CHECK(mechanism_name(Mechanism::bidirectional_tunneling) == "bidirectional_tunneling");
  CHECK_FALSE(parse_mechanism("bt"));
}

TEST_CASE("binding update body") {
  BindingUpdate in{kMnHoa, kMnCoa, 7, 300, {true, false}};
  auto body = encode_binding_update(in);
  CHECK(body.size() == kBindingUpdateBodySize);
  CHECK(body[32] == 0);
  CHECK(body[35] == 7);
  CHECK(body[36] == 0x01);
  CHECK(body[37] == 0x2c);
  CHECK(body[38] == 0b10);
  CHECK(decode_binding_update(body) == in);

  body.push_back(0);
  CHECK(error_of([&] { decode_binding_update(body); }) == Errc::length_mismatch);
  body.resize(kBindingUpdateBodySize - 1);
  CHECK(error_of([&] { decode_binding_update(body); }) == Errc::truncated);
}

TEST_CASE("binding update packet matches the golden fixture") {
  BindingUpdate in{kMnHoa, kMnCoa, 7, 300, {true, false}};
  Packet p = make_binding_update_packet(kMnCoa, kHaMn, in);
  CHECK(encode_packet(p) == read_hex("golden_binding_update.hex"));
  Packet back = decode_packet(read_hex("golden_binding_update.hex"));
  CHECK(back.upper == HeaderKind::mobility);
  CHECK(decode_binding_update(back.payload) == in);
}

TEST_CASE("property: at most one live entry per home address") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Address> hoas, coas;
    for (int i = 0; i < 3; ++i) hoas.push_back(random_address(rng));
    for (int i = 0; i < 3; ++i) coas.push_back(random_address(rng));
    BindingCache cache;
    SimTime now = 0;
    for (int i = 0; i < 50; ++i) {
      now += uniform(rng, 0, 5);
      cache.apply(bu(hoas[uniform(rng, 0, 2)], coas[uniform(rng, 0, 2)],
                     static_cast<std::uint32_t>(uniform(rng, 0, 20)),
                     static_cast<std::uint16_t>(uniform(rng, 0, 30))),
                  now);
      std::set<Address> seen;
      for (const auto& [hoa, e] : cache.entries()) {
        CHECK(hoa == e.hoa);
        CHECK(seen.insert(hoa).second);
      }
      CHECK(cache.live_count(now) <= hoas.size());
    }
  }
}

TEST_CASE("property: stale updates change nothing") {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    BindingCache cache;
    Address hoa = random_address(rng);
    auto seq = static_cast<std::uint32_t>(uniform(rng, 1, 1000));
    cache.apply(bu(hoa, random_address(rng), seq, 100), 0);
    auto before = cache.entries();
    auto older = static_cast<std::uint32_t>(uniform(rng, 0, seq - 1));
    auto life = static_cast<std::uint16_t>(uniform(rng, 0, 200));
    CHECK(cache.apply(bu(hoa, random_address(rng), older, life), uniform(rng, 0, 50)) ==
          ApplyOutcome::stale_sequence);
    const auto& after = cache.entries();
    REQUIRE(after.size() == before.size());
    const auto& a = after.begin()->second;
    const auto& b = before.begin()->second;
    CHECK(a.coa == b.coa);
    CHECK(a.expires_at == b.expires_at);
    CHECK(a.sequence == b.sequence);
  }
}

TEST_CASE("property: lookup and reverse lookup agree") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 500; ++trial) {
    BindingCache cache;
    Address hoa = random_address(rng);
    Address coa = random_address(rng);
    cache.apply(bu(hoa, coa, 1, 10), 0);
    auto found = cache.lookup_coa(hoa, 5);
    REQUIRE(found);
    CHECK(cache.reverse_lookup_hoa(*found, 5) == hoa);
  }
}
