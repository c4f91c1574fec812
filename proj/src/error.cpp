#include "mip6/error.hpp"

namespace mip6 {

std::string_view errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::ok: return "ok";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::truncated: return "truncated";
    case Errc::unknown_header_kind: return "unknown-header-kind";
    case Errc::length_mismatch: return "length-mismatch";
    case Errc::malformed: return "malformed";
    case Errc::oversize: return "oversize";
    case Errc::nesting_violation: return "nesting-violation";
    case Errc::not_a_tunnel: return "not-a-tunnel";
    case Errc::ambiguous_coa: return "ambiguous-coa";
    case Errc::unknown_sender: return "unknown-sender";
    case Errc::misdelivery: return "misdelivery";
    case Errc::no_binding: return "no-binding";
    case Errc::unroutable: return "unroutable";
    case Errc::file_not_found: return "file-not-found";
    case Errc::parse_error: return "parse-error";
    case Errc::config_invalid: return "config-invalid";
    case Errc::horizon_exceeded: return "horizon-exceeded";
    case Errc::empty_trace: return "empty-trace";
    case Errc::internal: return "internal";
  }
  return "internal";
}

}  // namespace mip6
