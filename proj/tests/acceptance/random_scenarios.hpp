#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mip6/binding.hpp"
#include "mip6/scenario.hpp"

namespace mip6::acceptance {

// Largest payload the transparency suite sends, and the mtu that lets it fit
// under every mechanism (40-byte base header plus 48 bytes of route
// optimization headers).
inline constexpr std::size_t kMaxSuitePayload = 1452;
inline constexpr std::size_t kSuiteMtu = 1540;

/// Two endpoints (the correspondent is mobile or stationary at random), each
/// epoch moving some mobiles, refreshing bindings and then exchanging 1-3
/// packets of 0..kMaxSuitePayload bytes.
ScenarioConfig random_scenario(std::uint64_t seed, Mechanism m);

struct TransparencyStats {
  std::size_t scenarios = 0;
  std::size_t packets = 0;
  std::size_t delivered_intact = 0;
  std::size_t moves = 0;
  std::size_t min_payload = SIZE_MAX;
  std::size_t max_payload = 0;
  std::map<Mechanism, std::size_t> per_mechanism;
  std::map<std::string, std::uint64_t> drops;
  std::vector<std::string> failures;  // first few, for the report

  // Data-path records sent under ITRO and how many added bytes or headers.
  std::size_t itro_records = 0;
  std::size_t itro_violations = 0;
};

TransparencyStats run_transparency_suite(std::size_t scenarios, std::uint64_t seed);

}  // namespace mip6::acceptance
