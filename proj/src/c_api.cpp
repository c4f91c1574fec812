#include "mip6/mip6.h"

#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "mip6/error.hpp"
#include "mip6/metrics.hpp"
#include "mip6/packet.hpp"
#include "mip6/scenario.hpp"

struct mip6_scenario {
  mip6::ScenarioConfig config;
  std::vector<mip6::Diagnostic> read_diagnostics;
};

struct mip6_run {
  std::vector<mip6::ScenarioRun> runs;
  std::size_t mtu = 0;
};

namespace {

thread_local std::string g_last_error;

mip6_status to_status(mip6::Errc code) {
  // mip6_status mirrors mip6::Errc one to one.
  return static_cast<mip6_status>(static_cast<int>(code));
}

mip6_status fail(mip6_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

char* duplicate(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

template <class F>
mip6_status guarded(F&& body) {
  try {
    g_last_error.clear();
    return body();
  } catch (const mip6::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::exception& e) {
    return fail(MIP6_E_INTERNAL, e.what());
  }
}

std::vector<mip6::Diagnostic> all_diagnostics(const mip6_scenario& s) {
  auto diags = s.read_diagnostics;
  auto more = mip6::validate(s.config);
  diags.insert(diags.end(), more.begin(), more.end());
  return diags;
}

mip6::Mechanism to_mechanism(mip6_mechanism m) {
  switch (m) {
    case MIP6_BIDIRECTIONAL_TUNNELING: return mip6::Mechanism::bidirectional_tunneling;
    case MIP6_ROUTE_OPTIMIZATION: return mip6::Mechanism::route_optimization;
    case MIP6_TRO: return mip6::Mechanism::tro;
    case MIP6_ITRO: return mip6::Mechanism::itro;
    default: break;
  }
  throw mip6::Error(mip6::Errc::invalid_argument, "unknown mechanism " + std::to_string(m));
}

std::string render(const mip6::Comparison& c, mip6_report_format format) {
  if (format == MIP6_FORMAT_CSV) return mip6::render_csv(c);
  if (format == MIP6_FORMAT_TABLE) return mip6::render_table(c);
  throw mip6::Error(mip6::Errc::invalid_argument, "unknown report format");
}

}  // namespace

extern "C" {

const char* mip6_last_error(void) { return g_last_error.c_str(); }

const char* mip6_status_name(mip6_status status) {
  if (status < MIP6_OK || status > MIP6_E_INTERNAL) return "unknown";
  return mip6::errc_name(static_cast<mip6::Errc>(status)).data();
}

void mip6_string_free(char* s) { std::free(s); }

mip6_status mip6_scenario_load(const char* path, mip6_scenario** out) {
  return guarded([&] {
    if (!path || !out) return fail(MIP6_E_INVALID_ARGUMENT, "null argument");
    auto parsed = mip6::load_scenario_file(path);
    *out = new mip6_scenario{std::move(parsed.config), std::move(parsed.diagnostics)};
    return MIP6_OK;
  });
}

mip6_status mip6_scenario_parse(const char* text, size_t length, mip6_scenario** out) {
  return guarded([&] {
    if (!text || !out) return fail(MIP6_E_INVALID_ARGUMENT, "null argument");
    auto parsed = mip6::parse_scenario(std::string_view(text, length));
    *out = new mip6_scenario{std::move(parsed.config), std::move(parsed.diagnostics)};
    return MIP6_OK;
  });
}

mip6_status mip6_scenario_builtin(unsigned mtu, mip6_scenario** out) {
  return guarded([&] {
    if (!out) return fail(MIP6_E_INVALID_ARGUMENT, "null argument");
    *out = new mip6_scenario{mip6::comparison_scenario(mtu), {}};
    return MIP6_OK;
  });
}

void mip6_scenario_free(mip6_scenario* scenario) { delete scenario; }

mip6_status mip6_scenario_set_mtu(mip6_scenario* scenario, unsigned mtu) {
  if (!scenario) return fail(MIP6_E_INVALID_ARGUMENT, "null scenario");
  scenario->config.mtu = mtu;
  return MIP6_OK;
}

mip6_status mip6_scenario_set_seed(mip6_scenario* scenario, uint64_t seed) {
  if (!scenario) return fail(MIP6_E_INVALID_ARGUMENT, "null scenario");
  scenario->config.seed = seed;
  return MIP6_OK;
}

mip6_status mip6_scenario_validate(const mip6_scenario* scenario, char** diagnostics) {
  return guarded([&] {
    if (!scenario) return fail(MIP6_E_INVALID_ARGUMENT, "null scenario");
    auto diags = all_diagnostics(*scenario);
    std::string text;
    for (const auto& d : diags) text += d.to_string() + "\n";
    if (diags.empty()) text = "ok\n";
    if (diagnostics) *diagnostics = duplicate(text);
    if (diags.empty()) return MIP6_OK;
    return fail(MIP6_E_CONFIG_INVALID, diags.front().to_string());
  });
}

mip6_status mip6_scenario_to_json(const mip6_scenario* scenario, char** out) {
  return guarded([&] {
    if (!scenario || !out) return fail(MIP6_E_INVALID_ARGUMENT, "null argument");
    *out = duplicate(mip6::to_json(scenario->config));
    return MIP6_OK;
  });
}

mip6_status mip6_run_scenario(const mip6_scenario* scenario, mip6_run** out) {
  return guarded([&] {
    if (!scenario || !out) return fail(MIP6_E_INVALID_ARGUMENT, "null argument");
    auto diags = all_diagnostics(*scenario);
    if (!diags.empty()) {
      std::string msg = diags.front().to_string();
      if (diags.size() > 1) msg += " (+" + std::to_string(diags.size() - 1) + " more)";
      return fail(MIP6_E_CONFIG_INVALID, msg);
    }
    auto run = std::make_unique<mip6_run>();
    run->runs = mip6::run_scenario(scenario->config);
    run->mtu = scenario->config.mtu;
    *out = run.release();
    return MIP6_OK;
  });
}

void mip6_run_free(mip6_run* run) { delete run; }

mip6_status mip6_run_trace(const mip6_run* run, char** out) {
  return guarded([&] {
    if (!run || !out) return fail(MIP6_E_INVALID_ARGUMENT, "null argument");
    std::string text;
    for (const auto& r : run->runs) text += mip6::to_jsonl(r.result.trace);
    *out = duplicate(text);
    return MIP6_OK;
  });
}

mip6_status mip6_run_report(const mip6_run* run, mip6_report_format format, char** out) {
  return guarded([&] {
    if (!run || !out) return fail(MIP6_E_INVALID_ARGUMENT, "null argument");
    *out = duplicate(render(mip6::compare(run->runs, run->mtu), format));
    return MIP6_OK;
  });
}

mip6_status mip6_run_counts(const mip6_run* run, uint64_t* sent, uint64_t* delivered,
                            uint64_t* dropped) {
  if (!run) return fail(MIP6_E_INVALID_ARGUMENT, "null run");
  uint64_t s = 0, d = 0, x = 0;
  for (const auto& r : run->runs) {
    s += r.result.sent.size();
    d += r.result.deliveries.size();
    for (const auto& [name, count] : r.result.drops) x += count;
  }
  if (sent) *sent = s;
  if (delivered) *delivered = d;
  if (dropped) *dropped = x;
  return MIP6_OK;
}

mip6_status mip6_reproduce(unsigned mtu, mip6_report_format format, char** out) {
  return guarded([&] {
    if (!out) return fail(MIP6_E_INVALID_ARGUMENT, "null argument");
    if (mtu <= mip6::kMinimumMtu) {
      return fail(MIP6_E_CONFIG_INVALID, "mtu-too-small: mtu: mtu " + std::to_string(mtu) +
                                             " must exceed " + std::to_string(mip6::kMinimumMtu));
    }
    *out = duplicate(render(mip6::comparison_report(mtu), format));
    return MIP6_OK;
  });
}

mip6_status mip6_analytic_overhead(mip6_mechanism mechanism, unsigned mtu, double* pct) {
  return guarded([&] {
    if (!pct) return fail(MIP6_E_INVALID_ARGUMENT, "null argument");
    *pct = mip6::analytic_overhead(to_mechanism(mechanism), mtu);
    return MIP6_OK;
  });
}

mip6_status mip6_analytic_delay(mip6_mechanism mechanism, unsigned* units) {
  return guarded([&] {
    if (!units) return fail(MIP6_E_INVALID_ARGUMENT, "null argument");
    *units = mip6::analytic_delay(to_mechanism(mechanism));
    return MIP6_OK;
  });
}

mip6_status mip6_select_mechanism(int rot1, int rot0, mip6_mechanism* out) {
  if (!out) return fail(MIP6_E_INVALID_ARGUMENT, "null argument");
  *out = static_cast<mip6_mechanism>(mip6::select_mechanism(rot1 != 0, rot0 != 0));
  return MIP6_OK;
}

mip6_status mip6_packet_inspect(const uint8_t* bytes, size_t length, size_t* wire_size) {
  return guarded([&] {
    if (!bytes) return fail(MIP6_E_INVALID_ARGUMENT, "null buffer");
    auto p = mip6::decode_packet(std::span<const uint8_t>(bytes, length));
    if (wire_size) *wire_size = mip6::wire_size(p);
    return MIP6_OK;
  });
}

}  // extern "C"
