#include "mip6/address.hpp"

#include <arpa/inet.h>

#include <string>

#include "mip6/error.hpp"

namespace mip6 {

std::optional<Address> Address::parse(std::string_view text) {
  std::string buf(text);
  Bytes bytes{};
  if (inet_pton(AF_INET6, buf.c_str(), bytes.data()) != 1) {
    return std::nullopt;
  }
  return Address(bytes);
}

Address Address::from_string(std::string_view text) {
  auto parsed = parse(text);
  if (!parsed) {
    throw Error(Errc::invalid_argument, "not an IPv6 address: '" + std::string(text) + "'");
  }
  return *parsed;
}

std::string Address::to_string() const {
  char buf[INET6_ADDRSTRLEN] = {};
  inet_ntop(AF_INET6, bytes_.data(), buf, sizeof(buf));
  return buf;
}

}  // namespace mip6
