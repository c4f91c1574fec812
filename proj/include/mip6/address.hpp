#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace mip6 {

// 128-bit IPv6 address held in network byte order.
class Address {
 public:
  using Bytes = std::array<std::uint8_t, 16>;

  constexpr Address() = default;
  constexpr explicit Address(const Bytes& bytes) : bytes_(bytes) {}

  /// Parses any textual IPv6 form accepted by inet_pton. Returns nullopt on bad input.
  static std::optional<Address> parse(std::string_view text);
  /// Like parse(), but throws Error(invalid_argument).
  static Address from_string(std::string_view text);

  /// RFC 5952 canonical text (lowercase, longest zero run compressed).
  std::string to_string() const;

  const Bytes& bytes() const noexcept { return bytes_; }
  bool is_unspecified() const noexcept { return bytes_ == Bytes{}; }

  friend constexpr auto operator<=>(const Address&, const Address&) = default;

 private:
  Bytes bytes_{};
};

}  // namespace mip6

template <>
struct std::hash<mip6::Address> {
  std::size_t operator()(const mip6::Address& a) const noexcept {
    std::size_t h = 1469598103934665603ull;
    for (auto b : a.bytes()) {
      h = (h ^ b) * 1099511628211ull;
    }
    return h;
  }
};
