// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "acceptance/random_scenarios.hpp"
#include "mip6/error.hpp"
#include "mip6/mechanisms.hpp"
#include "mip6/metrics.hpp"
#include "mip6/mip6.h"
#include "mip6/packet.hpp"
#include "mip6/simnet.hpp"
#include "support/generators.hpp"

using namespace mip6;
namespace fs = std::filesystem;

namespace {

constexpr double kTolerancePct = 0.01;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct CsvRow {
  double analytic = NAN;
  double measured = NAN;
  double delay_analytic = NAN;
  double delay_measured = NAN;
};

// Reproduction output, fetched once through the C API the CLI uses.
struct Reproduction {
  std::string csv;
  std::string table;
  double seconds = 0;
  std::map<std::string, CsvRow> rows;
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string take(char* s) {
  std::string out = s ? s : "";
  mip6_string_free(s);
  return out;
}

Reproduction reproduce() {
  Reproduction r;
  auto start = std::chrono::steady_clock::now();
  char* out = nullptr;
  if (mip6_reproduce(1500, MIP6_FORMAT_TABLE, &out) == MIP6_OK) r.table = take(out);
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (mip6_reproduce(1500, MIP6_FORMAT_CSV, &out) == MIP6_OK) r.csv = take(out);

  std::istringstream in(r.csv);
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string name, a, m, da, dm;
    std::getline(fields, name, ',');
    std::getline(fields, a, ',');
    std::getline(fields, m, ',');
    std::getline(fields, da, ',');
    std::getline(fields, dm, ',');
    r.rows[name] = CsvRow{std::stod(a), std::stod(m), std::stod(da), std::stod(dm)};
  }
  return r;
}

Outcome overhead_row(const Reproduction& r, Mechanism m, double expected) {
  auto it = r.rows.find(std::string(mechanism_name(m)));
  if (it == r.rows.end()) return {false, "no row in the report"};
  const CsvRow& row = it->second;
  bool ok = std::abs(row.analytic - expected) <= kTolerancePct &&
            std::abs(row.measured - expected) <= kTolerancePct;
  return {ok, "analytic " + fmt(row.analytic) + "%, measured " + fmt(row.measured) + "%, expected " +
                  fmt(expected, 2) + " +/- " + fmt(kTolerancePct, 2)};
}

Outcome bidirectional_overhead(const Reproduction& r) {
  Outcome o = overhead_row(r, Mechanism::bidirectional_tunneling, 5.48);
  bool fast = r.seconds < 1.0;
  o.detail += "; report in " + fmt(r.seconds * 1000, 1) + " ms";
  o.pass = o.pass && fast && !r.table.empty();
  return o;
}

Outcome itro_overhead(const Reproduction& r, const acceptance::TransparencyStats& suite) {
  auto it = r.rows.find("itro");
  if (it == r.rows.end()) return {false, "no row in the report"};
  bool exact = it->second.analytic == 0.0 && it->second.measured == 0.0;

  // Structural check over the comparison run and the randomized suite.
  std::size_t records = suite.itro_records, violations = suite.itro_violations;
  for (const auto& run : run_scenario(comparison_scenario())) {
    for (const auto& rec : run.result.trace) {
      if (rec.is_signaling() || rec.mechanism != Mechanism::itro) continue;
      ++records;
      if (rec.mobility_bytes != 0 || rec.headers != std::vector<std::string>{"ipv6"}) ++violations;
    }
  }
  return {exact && records > 0 && violations == 0,
          "analytic " + fmt(it->second.analytic) + "%, measured " + fmt(it->second.measured) + "%; " +
              std::to_string(records) + " ITRO data records, " + std::to_string(violations) +
              " with added bytes or extra headers"};
}

Outcome delays() {
  std::string detail;
  bool ok = true;
  for (const auto& run : run_scenario(comparison_scenario())) {
    Mechanism m = run.config.mechanisms.front();
    const auto& ds = run.result.deliveries;
    bool exact = !ds.empty() && std::all_of(ds.begin(), ds.end(), [&](const Delivery& d) {
      return d.latency() == analytic_delay(m) && d.mechanism == m;
    });
    ok = ok && exact;
    if (!detail.empty()) detail += ", ";
    detail += std::string(mechanism_name(m)) + " " +
              (ds.empty() ? std::string("none") : std::to_string(ds.front().latency()));
  }
  return {ok, detail + " (expected 3, 1, 1, 1 units)"};
}

Outcome measured_agreement() {
  std::string detail;
  bool ok = true;
  double worst = 0;
  for (std::size_t mtu : {1500, 1000, 750, 9000}) {
    Comparison c = comparison_report(mtu);
    ok = ok && c.rows.size() == 4;
    for (const auto& row : c.rows) {
      double diff = std::abs(row.measured_overhead_pct - row.analytic_overhead_pct);
      worst = std::max(worst, diff);
      ok = ok && diff <= kTolerancePct;
    }
  }
  return {ok, "largest |measured - analytic| " + fmt(worst, 6) + " pp over 4 mechanisms at mtu 750/1000/1500/9000"};
}

Outcome discrepancy_note(const Reproduction& r) {
  auto has = [&](const std::string& s, const std::string& needle) { return s.find(needle) != std::string::npos; };
  std::string note_line;
  std::istringstream in(r.table);
  for (std::string line; std::getline(in, line);) {
    if (has(line, "note: bidirectional_tunneling")) note_line = line;
  }
  auto row = r.rows.find("bidirectional_tunneling");
  bool follows = row != r.rows.end() && std::abs(row->second.analytic - 5.48) <= kTolerancePct;
  bool ok = !note_line.empty() && has(note_line, "6.6%") && has(note_line, "5.48%") && follows &&
            has(r.csv, "# note: bidirectional_tunneling");
  return {ok, note_line.empty() ? "no note in the report" : "report row uses 5.48; \"" + note_line + "\""};
}

Outcome transparency(const acceptance::TransparencyStats& s) {
  std::uint64_t dropped = 0;
  for (const auto& [name, n] : s.drops) dropped += n;
  bool all_mechanisms = s.per_mechanism.size() == 4;
  bool ok = s.scenarios >= 1000 && s.failures.empty() && dropped == 0 && s.delivered_intact == s.packets &&
            all_mechanisms && s.min_payload == 0 && s.max_payload == acceptance::kMaxSuitePayload;
  std::string detail = std::to_string(s.scenarios) + " scenarios, " + std::to_string(s.packets) +
                       " packets, " + std::to_string(s.moves) + " moves, payloads " +
                       std::to_string(s.min_payload) + ".." + std::to_string(s.max_payload) + " B at mtu " +
                       std::to_string(acceptance::kSuiteMtu) + "; " + std::to_string(s.delivered_intact) +
                       " delivered intact, " + std::to_string(dropped) + " dropped; sent as";
  for (const auto& [m, n] : s.per_mechanism) detail += " " + std::string(mechanism_name(m)) + "=" + std::to_string(n);
  for (const auto& f : s.failures) detail += "\n    " + f;
  for (const auto& [name, n] : s.drops) detail += "\n    drop " + name + ": " + std::to_string(n);
  return {ok, detail};
}

Outcome fallback_equivalence() {
  std::mt19937_64 rng(0xfa11bac4);
  BindingCache empty;
  std::size_t same = 0, total = 100;
  for (std::size_t i = 0; i < total; ++i) {
    Address hoa = testing::random_address(rng);
    Address coa = (rng() & 1) ? testing::random_address(rng) : hoa;
    EndpointContext ctx{hoa, coa, empty, Mechanism::route_optimization, std::nullopt};
    UpperLayerPacket ulp{hoa, testing::random_address(rng),
                         testing::random_bytes(rng, testing::uniform(rng, 0, kDefaultMtu - 88))};
    SimTime now = rng() % 100000;
    auto ro = encode_packet(ro_outbound(ulp, ctx, now));
    if (encode_packet(itro_outbound(ulp, ctx, now)) == ro && encode_packet(tro_outbound(ulp, ctx, now)) == ro) {
      ++same;
    }
  }
  return {same == total, std::to_string(same) + "/" + std::to_string(total) +
                             " ITRO and TRO outputs byte-identical to route optimization"};
}

Outcome codec() {
  std::mt19937_64 rng(0xc0dec);
  std::size_t round_trips = 0, inverses = 0, size_ok = 0, sized = 0;
  for (int i = 0; i < 10000; ++i) {
    Packet p = testing::random_packet(rng);
    auto bytes = encode_packet(p);
    if (decode_packet(bytes) == p && encode_packet(decode_packet(bytes)) == bytes) ++round_trips;

    // Every header accounts for exactly its fixed size.
    const Packet* layer = &p;
    std::size_t expected = 0;
    while (layer->inner) {
      expected += kBaseHeaderSize;
      layer = layer->inner.get();
    }
    expected += kBaseHeaderSize + kExtensionHeaderSize * layer->extension_header_count() + layer->payload.size();
    ++sized;
    if (bytes.size() == expected) ++size_ok;
  }
  for (int i = 0; i < 1000; ++i) {
    Packet inner = testing::random_plain_packet(rng, kDefaultMtu - kBaseHeaderSize);
    Packet outer = encapsulate(inner, testing::random_address(rng), testing::random_address(rng));
    Packet wire = decode_packet(encode_packet(outer));
    if (decapsulate(outer) == inner && decapsulate(wire) == inner) ++inverses;
  }

  // Single headers in isolation.
  Packet base = make_packet(testing::random_address(rng), testing::random_address(rng), {});
  Packet t2 = base, hao = base;
  t2.type2_routing = Type2RoutingHeader{testing::random_address(rng)};
  hao.home_address_option = HomeAddressOption{testing::random_address(rng)};
  seal(t2);
  seal(hao);
  bool fixed = encode_packet(base).size() == 40 && encode_packet(t2).size() == 64 &&
               encode_packet(hao).size() == 64 && encode_packet(encapsulate(base, base.base.source, base.base.destination)).size() == 80;

  bool ok = round_trips == 10000 && inverses == 1000 && size_ok == sized && fixed;
  return {ok, std::to_string(round_trips) + "/10000 round trips, " + std::to_string(inverses) +
                  "/1000 encapsulation inverses, " + std::to_string(size_ok) + "/" + std::to_string(sized) +
                  " sizes = 40 per base header + 24 per extension header + payload" +
                  (fixed ? "" : "; isolated header sizes wrong")};
}

Outcome flag_table() {
  struct Row {
    int rot1, rot0;
    mip6_mechanism expected;
  };
  const Row rows[] = {{0, 0, MIP6_ROUTE_OPTIMIZATION}, {0, 1, MIP6_TRO}, {1, 0, MIP6_ITRO}, {1, 1, MIP6_ITRO}};
  std::string detail;
  bool ok = true;
  for (const auto& r : rows) {
    mip6_mechanism got = MIP6_BIDIRECTIONAL_TUNNELING;
    bool c_ok = mip6_select_mechanism(r.rot1, r.rot0, &got) == MIP6_OK && got == r.expected;
    bool cpp_ok = static_cast<int>(select_mechanism(r.rot1, r.rot0)) == static_cast<int>(r.expected);
    ok = ok && c_ok && cpp_ok;
    if (!detail.empty()) detail += ", ";
    detail += std::to_string(r.rot1) + std::to_string(r.rot0) + "->" +
              std::string(mechanism_name(select_mechanism(r.rot1, r.rot0)));
  }
  return {ok, detail};
}

std::string run_trace(const std::string& path, std::uint64_t seed) {
  mip6_scenario* s = nullptr;
  if (mip6_scenario_load(path.c_str(), &s) != MIP6_OK) {
    std::fprintf(stderr, "%s: %s\n", path.c_str(), mip6_last_error());
    return {};
  }
  mip6_run* run = nullptr;
  std::string trace;
  if (mip6_scenario_set_seed(s, seed) != MIP6_OK || mip6_run_scenario(s, &run) != MIP6_OK) {
    std::fprintf(stderr, "%s: %s\n", path.c_str(), mip6_last_error());
  } else {
    char* out = nullptr;
    if (mip6_run_trace(run, &out) == MIP6_OK) trace = take(out);
    mip6_run_free(run);
  }
  mip6_scenario_free(s);
  return trace;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
  fs::path dir = fs::temp_directory_path() / ("mip6-acceptance-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  std::size_t identical = 0, total = 0, bytes = 0;
  std::vector<std::string> scenarios = {std::string(MIP6_SOURCE_DIR) + "/scenarios/two_mobile_comparison.json",
                                        std::string(MIP6_SOURCE_DIR) + "/scenarios/itro_roaming.json"};
  // Randomized scenarios too, so generated payload bytes depend on the seed.
  for (int i = 0; i < 4; ++i) {
    fs::path p = dir / ("random" + std::to_string(i) + ".json");
    std::ofstream(p) << to_json(acceptance::random_scenario(1000 + i, kAllMechanisms[i]));
    scenarios.push_back(p.string());
  }
  for (const auto& sc : scenarios) {
    for (std::uint64_t seed : {1ull, 42ull}) {
      fs::path a = dir / "a.jsonl", b = dir / "b.jsonl";
      std::ofstream(a, std::ios::binary) << run_trace(sc, seed);
      std::ofstream(b, std::ios::binary) << run_trace(sc, seed);
      std::string ta = read_file(a), tb = read_file(b);
      ++total;
      if (!ta.empty() && ta == tb) ++identical;
      bytes += ta.size();
    }
  }
  fs::remove_all(dir);
  return {identical == total, std::to_string(identical) + "/" + std::to_string(total) +
                                  " trace file pairs byte-identical (" + std::to_string(bytes) + " trace bytes per run)"};
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> check;
  };

  Reproduction repro;
  acceptance::TransparencyStats suite;
  std::vector<Criterion> criteria = {
      {"bidirectional tunneling overhead 5.48% at mtu 1500, under 1 s",
       [&] {
         repro = reproduce();
         return bidirectional_overhead(repro);
       }},
      {"route optimization overhead 3.31%", [&] { return overhead_row(repro, Mechanism::route_optimization, 3.31); }},
      {"TRO overhead 2.74%", [&] { return overhead_row(repro, Mechanism::tro, 2.74); }},
      {"ITRO overhead exactly 0%, no added headers",
       [&] {
         suite = acceptance::run_transparency_suite(1200, 0x7a115);
         return itro_overhead(repro, suite);
       }},
      {"delivery delay 3/1/1/1 units", delays},
      {"measured overhead within 0.01 pp of the closed form", measured_agreement},
      {"published 6.6% bidirectional entry flagged, 5.48% used", [&] { return discrepancy_note(repro); }},
      {"end-to-end transparency over randomized scenarios", [&] { return transparency(suite); }},
      {"empty-cache fallback equals route optimization", fallback_equivalence},
      {"codec round trip, encapsulation inverse, header sizes", codec},
      {"ROT flag table", flag_table},
      {"seeded runs produce identical trace files", determinism},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s [%02zu] %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].name, o.detail.c_str());
  }
  std::printf("%zu/%zu criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
