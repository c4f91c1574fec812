/*
 * C interface to the mip6 simulator.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every call returns a mip6_status; on failure mip6_last_error() holds a
 * one-line description for the calling thread. Strings returned through
 * char** out-parameters are owned by the caller and released with
 * mip6_string_free().
 */
#ifndef MIP6_MIP6_H
#define MIP6_MIP6_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  define MIP6_API __declspec(dllexport)
#else
#  define MIP6_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mip6_status {
  MIP6_OK = 0,
  MIP6_E_INVALID_ARGUMENT,
  MIP6_E_TRUNCATED,
  MIP6_E_UNKNOWN_HEADER_KIND,
  MIP6_E_LENGTH_MISMATCH,
  MIP6_E_MALFORMED,
  MIP6_E_OVERSIZE,
  MIP6_E_NESTING_VIOLATION,
  MIP6_E_NOT_A_TUNNEL,
  MIP6_E_AMBIGUOUS_COA,
  MIP6_E_UNKNOWN_SENDER,
  MIP6_E_MISDELIVERY,
  MIP6_E_NO_BINDING,
  MIP6_E_UNROUTABLE,
  MIP6_E_FILE_NOT_FOUND,
  MIP6_E_PARSE,
  MIP6_E_CONFIG_INVALID,
  MIP6_E_HORIZON_EXCEEDED,
  MIP6_E_EMPTY_TRACE,
  MIP6_E_INTERNAL
} mip6_status;

typedef enum mip6_mechanism {
  MIP6_BIDIRECTIONAL_TUNNELING = 0,
  MIP6_ROUTE_OPTIMIZATION = 1,
  MIP6_TRO = 2,
  MIP6_ITRO = 3,
  MIP6_MECHANISM_MAX_ENUM = 0x7fffffff /* keeps the enum int-sized; not a mechanism */
} mip6_mechanism;

typedef enum mip6_report_format {
  MIP6_FORMAT_TABLE = 0,
  MIP6_FORMAT_CSV = 1,
  MIP6_FORMAT_MAX_ENUM = 0x7fffffff
} mip6_report_format;

typedef struct mip6_scenario mip6_scenario;
typedef struct mip6_run mip6_run;

MIP6_API const char* mip6_last_error(void);
/* Kebab-case name, e.g. "config-invalid". */
MIP6_API const char* mip6_status_name(mip6_status status);
MIP6_API void mip6_string_free(char* s);

MIP6_API mip6_status mip6_scenario_load(const char* path, mip6_scenario** out);
MIP6_API mip6_status mip6_scenario_parse(const char* text, size_t length, mip6_scenario** out);
/* The built-in two-mobile comparison scenario, all four mechanisms. */
MIP6_API mip6_status mip6_scenario_builtin(unsigned mtu, mip6_scenario** out);
MIP6_API void mip6_scenario_free(mip6_scenario* scenario);
MIP6_API mip6_status mip6_scenario_set_mtu(mip6_scenario* scenario, unsigned mtu);
MIP6_API mip6_status mip6_scenario_set_seed(mip6_scenario* scenario, uint64_t seed);
/* MIP6_OK when clean, MIP6_E_CONFIG_INVALID otherwise. `diagnostics` (may be
 * NULL) receives one "code: path: message" line per finding, or "ok". */
MIP6_API mip6_status mip6_scenario_validate(const mip6_scenario* scenario, char** diagnostics);
MIP6_API mip6_status mip6_scenario_to_json(const mip6_scenario* scenario, char** out);

MIP6_API mip6_status mip6_run_scenario(const mip6_scenario* scenario, mip6_run** out);
MIP6_API void mip6_run_free(mip6_run* run);
/* Line-delimited JSON, one record per wire transmission. */
MIP6_API mip6_status mip6_run_trace(const mip6_run* run, char** out);
MIP6_API mip6_status mip6_run_report(const mip6_run* run, mip6_report_format format, char** out);
MIP6_API mip6_status mip6_run_counts(const mip6_run* run, uint64_t* sent, uint64_t* delivered,
                                     uint64_t* dropped);

MIP6_API mip6_status mip6_reproduce(unsigned mtu, mip6_report_format format, char** out);
MIP6_API mip6_status mip6_analytic_overhead(mip6_mechanism mechanism, unsigned mtu, double* pct);
MIP6_API mip6_status mip6_analytic_delay(mip6_mechanism mechanism, unsigned* units);
MIP6_API mip6_status mip6_select_mechanism(int rot1, int rot0, mip6_mechanism* out);
/* Decodes `bytes` as one packet and reports its wire size. */
MIP6_API mip6_status mip6_packet_inspect(const uint8_t* bytes, size_t length, size_t* wire_size);

#ifdef __cplusplus
}
#endif

#endif /* MIP6_MIP6_H */
