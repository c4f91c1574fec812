#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mip6 {

enum class Errc {
  ok = 0,
  invalid_argument,
  truncated,
  unknown_header_kind,
  length_mismatch,
  malformed,
  oversize,
  nesting_violation,
  not_a_tunnel,
  ambiguous_coa,
  unknown_sender,
  misdelivery,
  no_binding,
  unroutable,
  file_not_found,
  parse_error,
  config_invalid,
  horizon_exceeded,
  empty_trace,
  internal,
};

/// Stable kebab-case name used in diagnostics ("truncated", "config-invalid", ...).
std::string_view errc_name(Errc code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace mip6
