#include "mip6/metrics.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "mip6/error.hpp"

namespace mip6 {
namespace {

constexpr double kPublishedBidirectionalPct = 6.6;
constexpr double kAgreementTolerancePct = 0.01;

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string delay_text(double v) {
  if (std::floor(v) == v) return std::to_string(static_cast<long long>(v));
  return fixed(v, 2);
}

}  // namespace

double analytic_overhead(Mechanism m, std::size_t mtu) {
  if (mtu <= kMinimumMtu) {
    throw Error(Errc::invalid_argument, "mtu must exceed " + std::to_string(kMinimumMtu));
  }
  const double tunnel = static_cast<double>(kBaseHeaderSize);
  const double extensions = 2.0 * kExtensionHeaderSize;
  const double size = static_cast<double>(mtu);
  switch (m) {
    case Mechanism::bidirectional_tunneling: return 100.0 * 2 * tunnel / (size - tunnel);
    case Mechanism::route_optimization: return 100.0 * extensions / (size - extensions);
    case Mechanism::tro: return 100.0 * tunnel / (size - tunnel);
    case Mechanism::itro: return 0.0;
  }
  return 0.0;
}

unsigned analytic_delay(Mechanism m) noexcept {
  return m == Mechanism::bidirectional_tunneling ? 3 : 1;
}

double measured_overhead(const std::vector<TraceRecord>& trace, const std::vector<Delivery>& deliveries,
                         std::optional<Mechanism> only) {
  std::uint64_t added = 0;
  std::size_t records = 0;
  for (const auto& r : trace) {
    if (r.is_signaling() || (only && r.mechanism != *only)) continue;
    added += r.mobility_bytes;
    ++records;
  }
  std::uint64_t original = 0;
  std::size_t delivered = 0;
  for (const auto& d : deliveries) {
    if (only && d.mechanism != *only) continue;
    original += kBaseHeaderSize + d.ulp.payload.size();
    ++delivered;
  }
  if (records == 0 || delivered == 0) {
    throw Error(Errc::empty_trace, "no data-path records or deliveries to measure");
  }
  return 100.0 * static_cast<double>(added) / static_cast<double>(original);
}

double measured_delay(const std::vector<Delivery>& deliveries, std::optional<Mechanism> only) {
  double total = 0;
  std::size_t n = 0;
  for (const auto& d : deliveries) {
    if (only && d.mechanism != *only) continue;
    total += static_cast<double>(d.latency());
    ++n;
  }
  if (n == 0) throw Error(Errc::empty_trace, "no deliveries");
  return total / static_cast<double>(n);
}

std::vector<ScenarioRun> run_scenario(const ScenarioConfig& scenario) {
  std::vector<ScenarioRun> runs;
  for (auto& variant : scenario.variants()) {
    World world = build_world(variant);
    RunResult result = world.run_until_quiescent(variant.horizon);
    runs.push_back(ScenarioRun{std::move(variant), std::move(result), world.signaling_bytes()});
  }
  return runs;
}

Comparison compare(std::vector<ScenarioRun> runs, std::size_t mtu) {
  Comparison c;
  c.mtu = mtu;
  std::vector<TraceRecord> trace;
  std::vector<Delivery> deliveries;
  for (const auto& run : runs) {
    trace.insert(trace.end(), run.result.trace.begin(), run.result.trace.end());
    deliveries.insert(deliveries.end(), run.result.deliveries.begin(), run.result.deliveries.end());
    c.signaling_bytes += run.signaling_bytes;
  }
  for (auto m : kAllMechanisms) {
    bool any = false;
    for (const auto& d : deliveries) any = any || d.mechanism == m;
    if (!any) continue;

    OverheadReport row;
    row.mechanism = m;
    row.mtu = mtu;
    row.analytic_overhead_pct = analytic_overhead(m, mtu);
    row.analytic_delay_units = analytic_delay(m);
    row.measured_overhead_pct = measured_overhead(trace, deliveries, m);
    row.measured_delay_units = measured_delay(deliveries, m);
    if (m == Mechanism::bidirectional_tunneling) {
      row.discrepancy_notes.push_back(
          "bidirectional_tunneling: the published comparison table lists " +
          fixed(kPublishedBidirectionalPct, 1) +
          "% but two 40-byte tunnel headers over a 1460-byte original packet give " +
          fixed(analytic_overhead(m, 1500), 2) + "% at mtu 1500" +
          (mtu == 1500 ? std::string()
                       : " (" + fixed(row.analytic_overhead_pct, 2) + "% at mtu " + std::to_string(mtu) + ")") +
          "; this report uses the tunnel-header value");
    }
    double gap = std::fabs(row.measured_overhead_pct - row.analytic_overhead_pct);
    if (gap > kAgreementTolerancePct) {
      row.discrepancy_notes.push_back(std::string(mechanism_name(m)) + ": measured overhead differs from " +
                                      "the closed form by " + fixed(gap, 4) +
                                      " percentage points (packets below mtu or peers at home)");
    }
    if (row.measured_delay_units != row.analytic_delay_units) {
      row.discrepancy_notes.push_back(std::string(mechanism_name(m)) + ": measured delay " +
                                      delay_text(row.measured_delay_units) + " differs from " +
                                      std::to_string(row.analytic_delay_units) + " units");
    }
    c.rows.push_back(std::move(row));
  }
  c.runs = std::move(runs);
  return c;
}

Comparison comparison_report(std::size_t mtu) {
  auto scenario = comparison_scenario(mtu);
  return compare(run_scenario(scenario), mtu);
}

std::string packet_summary(const Comparison& c) {
  std::uint64_t sent = 0, delivered = 0;
  std::map<std::string, std::uint64_t> drops;
  for (const auto& run : c.runs) {
    sent += run.result.sent.size();
    delivered += run.result.deliveries.size();
    for (const auto& [name, n] : run.result.drops) drops[name] += n;
  }
  std::string out = "packets: sent " + std::to_string(sent) + ", delivered " + std::to_string(delivered);
  for (const auto& [name, n] : drops) out += ", " + name + " " + std::to_string(n);
  return out;
}

std::string render_table(const Comparison& c) {
  static const char* header[] = {"mechanism", "overhead_pct_analytic", "overhead_pct_measured",
                                 "delay_units_analytic", "delay_units_measured"};
  std::ostringstream os;
  char line[256];
  std::snprintf(line, sizeof(line), "%-24s %22s %22s %21s %21s\n", header[0], header[1], header[2],
                header[3], header[4]);
  os << line;
  for (const auto& r : c.rows) {
    std::snprintf(line, sizeof(line), "%-24s %22s %22s %21u %21s\n",
                  std::string(mechanism_name(r.mechanism)).c_str(), fixed(r.analytic_overhead_pct, 2).c_str(),
                  fixed(r.measured_overhead_pct, 2).c_str(), r.analytic_delay_units,
                  delay_text(r.measured_delay_units).c_str());
    os << line;
  }
  os << "mtu: " << c.mtu << ", signaling bytes (excluded): " << c.signaling_bytes << "\n";
  os << packet_summary(c) << "\n";
  for (const auto& r : c.rows) {
    for (const auto& note : r.discrepancy_notes) os << "note: " << note << "\n";
  }
  return os.str();
}

std::string render_csv(const Comparison& c) {
  std::ostringstream os;
  os << "mechanism,overhead_pct_analytic,overhead_pct_measured,delay_units_analytic,delay_units_measured\n";
  for (const auto& r : c.rows) {
    os << mechanism_name(r.mechanism) << ',' << fixed(r.analytic_overhead_pct, 4) << ','
       << fixed(r.measured_overhead_pct, 4) << ',' << r.analytic_delay_units << ','
       << delay_text(r.measured_delay_units) << '\n';
  }
  for (const auto& r : c.rows) {
    for (const auto& note : r.discrepancy_notes) os << "# note: " << note << "\n";
  }
  os << "# " << packet_summary(c) << "\n";
  return os.str();
}

}  // namespace mip6
