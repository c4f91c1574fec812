#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mip6/binding.hpp"
#include "mip6/scenario.hpp"
#include "mip6/simnet.hpp"

namespace mip6 {

// Overhead ratio: mobility-added bytes over the size of the packet the upper
// layer would have sent unmodified (base header plus payload), in percent.

/// Closed-form overhead for a packet that fills `mtu` with both endpoints away
/// from home. Throws Error(invalid_argument) unless mtu > 88.
double analytic_overhead(Mechanism m, std::size_t mtu);

/// Closed-form end-to-end delay in Internet-traversal units.
unsigned analytic_delay(Mechanism m) noexcept;

/// Overhead measured from a trace. Signaling records are ignored. With
/// `only` set, just the records and deliveries of that mechanism count.
/// Throws Error(empty_trace) when there is nothing to measure.
double measured_overhead(const std::vector<TraceRecord>& trace, const std::vector<Delivery>& deliveries,
                         std::optional<Mechanism> only = std::nullopt);

/// Mean delivery latency. Throws Error(empty_trace) without deliveries.
double measured_delay(const std::vector<Delivery>& deliveries, std::optional<Mechanism> only = std::nullopt);

struct OverheadReport {
  Mechanism mechanism = Mechanism::route_optimization;
  double analytic_overhead_pct = 0;
  double measured_overhead_pct = 0;
  unsigned analytic_delay_units = 0;
  double measured_delay_units = 0;
  std::size_t mtu = 0;
  std::vector<std::string> discrepancy_notes;
};

struct ScenarioRun {
  ScenarioConfig config;  // single-mechanism variant
  RunResult result;
  std::uint64_t signaling_bytes = 0;
};

struct Comparison {
  std::size_t mtu = 0;
  std::vector<OverheadReport> rows;  // bidirectional, RO, TRO, ITRO order
  std::uint64_t signaling_bytes = 0;
  std::vector<ScenarioRun> runs;
};

/// Runs every variant of `scenario` to quiescence (within its horizon).
std::vector<ScenarioRun> run_scenario(const ScenarioConfig& scenario);

/// One row per mechanism that delivered at least one packet.
Comparison compare(std::vector<ScenarioRun> runs, std::size_t mtu);

/// Runs the four-mechanism comparison for two mobile endpoints at `mtu`.
Comparison comparison_report(std::size_t mtu = 1500);

/// "packets: sent N, delivered M" followed by each named drop counter.
std::string packet_summary(const Comparison& c);
std::string render_table(const Comparison& c);
std::string render_csv(const Comparison& c);

}  // namespace mip6
