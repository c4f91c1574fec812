// Command-line front end. Talks to the simulator only through the C API.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "mip6/mip6.h"

namespace {

struct CString {
  char* p = nullptr;
  ~CString() { mip6_string_free(p); }
  std::string str() const { return p ? p : ""; }
};

int report_error(mip6_status status, const std::string& context = {}) {
  std::cerr << "mip6sim: error[" << mip6_status_name(status) << "]: ";
  if (!context.empty()) std::cerr << context << ": ";
  std::cerr << mip6_last_error() << "\n";
  return 1;
}

bool write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "mip6sim: error[file-not-found]: cannot write '" << path << "'\n";
    return false;
  }
  out << text;
  return static_cast<bool>(out);
}

mip6_report_format parse_format(const std::string& name) {
  return name == "csv" ? MIP6_FORMAT_CSV : MIP6_FORMAT_TABLE;
}

struct Overrides {
  std::optional<unsigned> mtu;
  std::optional<uint64_t> seed;
};

mip6_status load(const std::string& path, const Overrides& o, mip6_scenario** out) {
  mip6_status st = mip6_scenario_load(path.c_str(), out);
  if (st != MIP6_OK) return st;
  if (o.mtu) mip6_scenario_set_mtu(*out, *o.mtu);
  if (o.seed) mip6_scenario_set_seed(*out, *o.seed);
  return MIP6_OK;
}

int cmd_run(const std::string& path, const std::string& trace_path, const std::string& report_path,
            const std::string& format, const Overrides& o) {
  mip6_scenario* scenario = nullptr;
  if (mip6_status st = load(path, o, &scenario); st != MIP6_OK) return report_error(st, path);
  std::unique_ptr<mip6_scenario, decltype(&mip6_scenario_free)> guard(scenario, mip6_scenario_free);

  mip6_run* run = nullptr;
  if (mip6_status st = mip6_run_scenario(scenario, &run); st != MIP6_OK) return report_error(st, path);
  std::unique_ptr<mip6_run, decltype(&mip6_run_free)> run_guard(run, mip6_run_free);

  if (!trace_path.empty()) {
    CString trace;
    if (mip6_status st = mip6_run_trace(run, &trace.p); st != MIP6_OK) return report_error(st);
    if (!write_output(trace_path, trace.str())) return 1;
  }
  CString report;
  mip6_status st = mip6_run_report(run, parse_format(format), &report.p);
  if (st != MIP6_OK) return report_error(st);
  return write_output(report_path, report.str()) ? 0 : 1;
}

int cmd_validate(const std::string& path, const Overrides& o) {
  mip6_scenario* scenario = nullptr;
  if (mip6_status st = load(path, o, &scenario); st != MIP6_OK) return report_error(st, path);
  std::unique_ptr<mip6_scenario, decltype(&mip6_scenario_free)> guard(scenario, mip6_scenario_free);
  CString diagnostics;
  mip6_status st = mip6_scenario_validate(scenario, &diagnostics.p);
  if (st == MIP6_OK) {
    std::cout << diagnostics.str();
    return 0;
  }
  if (st != MIP6_E_CONFIG_INVALID) return report_error(st, path);
  std::string text = diagnostics.str();
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    std::string line = text.substr(start, end - start);
    std::size_t colon = line.find(": ");
    std::cerr << "mip6sim: error[" << line.substr(0, colon) << "]: " << path << ": "
              << (colon == std::string::npos ? line : line.substr(colon + 2)) << "\n";
    start = end == std::string::npos ? text.size() : end + 1;
  }
  return 1;
}

int cmd_reproduce(const std::string& report_path, const std::string& format, const Overrides& o) {
  CString out;
  mip6_status st = mip6_reproduce(o.mtu.value_or(1500), parse_format(format), &out.p);
  if (st != MIP6_OK) return report_error(st);
  return write_output(report_path, out.str()) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mobile IPv6 routing mechanism simulator"};
  app.require_subcommand(1);

  Overrides overrides;
  std::string format = "table";
  std::string trace_path;
  std::string report_path;
  std::string scenario_path;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--mtu", overrides.mtu, "Override the scenario mtu");
    cmd->add_option("--seed", overrides.seed, "Override the payload generator seed");
  };
  auto add_format = [&](CLI::App* cmd) {
    cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"table", "csv"}));
    cmd->add_option("--report", report_path, "Write the report here instead of stdout");
  };

  auto* run = app.add_subcommand("run", "Run a scenario file to quiescence");
  run->add_option("scenario", scenario_path, "Scenario file (JSON)")->required();
  run->add_option("--trace", trace_path, "Write line-delimited trace records here");
  add_format(run);
  add_common(run);

  auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("scenario", scenario_path, "Scenario file (JSON)")->required();
  add_common(validate);

  auto* reproduce = app.add_subcommand("reproduce-paper", "Print the four-mechanism comparison table");
  add_format(reproduce);
  add_common(reproduce);

  CLI11_PARSE(app, argc, argv);

  if (*run) return cmd_run(scenario_path, trace_path, report_path, format, overrides);
  if (*validate) return cmd_validate(scenario_path, overrides);
  return cmd_reproduce(report_path, format, overrides);
}
