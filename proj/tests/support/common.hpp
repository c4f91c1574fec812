#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "mip6/address.hpp"
#include "mip6/error.hpp"

namespace mip6::testing {

inline const Address kMnHoa = Address::from_string("2001:db8:1::10");
inline const Address kCnHoa = Address::from_string("2001:db8:2::20");
inline const Address kMnCoa = Address::from_string("2001:db8:a::10");
inline const Address kCnCoa = Address::from_string("2001:db8:b::20");
inline const Address kHaMn = Address::from_string("2001:db8:1::1");
inline const Address kHaCn = Address::from_string("2001:db8:2::1");

inline std::vector<std::uint8_t> payload(std::size_t n) {
  std::vector<std::uint8_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<std::uint8_t>(i * 7 + 3);
  return out;
}

// Error code thrown by `f`, or Errc::ok when it returns normally.
Errc error_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::ok;
}

inline std::string source_path(const std::string& relative) {
  return std::string(MIP6_SOURCE_DIR) + "/" + relative;
}

inline std::vector<std::uint8_t> read_hex(const std::string& name) {
  std::ifstream in(source_path("tests/fixtures/" + name));
  REQUIRE(in);
  std::string hex;
  in >> hex;
  std::vector<std::uint8_t> out;
  for (std::size_t i = 0; i + 1 < hex.size(); i += 2) {
    out.push_back(static_cast<std::uint8_t>(std::stoi(hex.substr(i, 2), nullptr, 16)));
  }
  return out;
}

}  // namespace mip6::testing
