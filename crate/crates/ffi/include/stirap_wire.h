/* C interface to the stirap-wire nanowire transport feasibility library. */

#ifndef STIRAP_WIRE_H
#define STIRAP_WIRE_H

/* Generated by cbindgen; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Confinement design selector.
 */
typedef enum SwDesign {
  SW_DESIGN_SURFACE = 0,
  SW_DESIGN_ELECTROSTATIC = 1,
} SwDesign;

/*
 Status code returned by every fallible call.
 */
typedef enum SwStatus {
  SW_STATUS_OK = 0,
  SW_STATUS_NULL_ARGUMENT = 1,
  SW_STATUS_INVALID_CONFIG = 2,
  SW_STATUS_NUMERICAL_FAILURE = 3,
  SW_STATUS_IO_FAILURE = 4,
  SW_STATUS_INVALID_UTF8 = 5,
} SwStatus;

/*
 Opaque configuration handle.
 */
typedef struct SwConfig SwConfig;

/*
 Optical coupling summary for the configured wire.
 */
typedef struct SwOpticalCoupling {
  /*
   Envelope amplitude at the defect site (dimensionless)
   */
  double f0;
  /*
   Wire transition dipole moment (C·m)
   */
  double d_wire;
  /*
   Effective Rabi frequency (rad/s)
   */
  double omega;
  /*
   Spontaneous emission rate (1/s)
   */
  double gamma_se;
} SwOpticalCoupling;

/*
 Decoherence budget for the configured wire (all 1/s).
 */
typedef struct SwRates {
  double gamma_cap;
  double gamma_se;
  double gamma_ep;
  double gamma_total;
} SwRates;

/*
 Outcome of one pulsed-transport integration.
 */
typedef struct SwTransport {
  /*
   Final target-state population
   */
  double fidelity;
  /*
   Peak intermediate-state population
   */
  double max_p2;
  /*
   Ω·τ of the schedule
   */
  double adiabaticity;
  /*
   Protocol duration (s)
   */
  double transport_time;
  /*
   Drive Rabi frequency used (rad/s)
   */
  double omega;
  /*
   Lumped decoherence rate used (1/s)
   */
  double gamma;
} SwTransport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Library version as a static NUL-terminated string.
 */
const char *sw_version(void);

/*
 Copy the last error message into `buffer` (up to `capacity` bytes
 including the NUL). Returns the full message length in bytes, or 0 when
 no error is pending. `buffer` may be null to query the length.

 # Safety
 `buffer` must point to at least `capacity` writable bytes when non-null.
 */
uintptr_t sw_last_error(char *buffer, uintptr_t capacity);

/*
 New configuration with built-in defaults. Free with [`sw_config_free`].
 */
struct SwConfig *sw_config_default(void);

/*
 Parse a configuration file (TOML). Returns null on failure.

 # Safety
 `path` must be a valid NUL-terminated string.
 */
struct SwConfig *sw_config_from_file(const char *path);

/*
 Parse a configuration from a TOML string. Returns null on failure.

 # Safety
 `text` must be a valid NUL-terminated string.
 */
struct SwConfig *sw_config_from_string(const char *text);

/*
 Release a configuration handle. Null is a no-op.

 # Safety
 `config` must have been returned by a `sw_config_*` constructor and not
 yet freed.
 */
void sw_config_free(struct SwConfig *config);

/*
 Set wire width, length and defect separation (m).

 # Safety
 `config` must be a live handle from a `sw_config_*` constructor.
 */
enum SwStatus sw_config_set_geometry(struct SwConfig *config, double w, double l, double s);

/*
 Select the confinement design.

 # Safety
 `config` must be a live handle from a `sw_config_*` constructor.
 */
enum SwStatus sw_config_set_design(struct SwConfig *config, enum SwDesign design);

/*
 Set the bath temperature (K).

 # Safety
 `config` must be a live handle from a `sw_config_*` constructor.
 */
enum SwStatus sw_config_set_temperature(struct SwConfig *config, double t);

/*
 Level gap between the first and second conduction states (J).

 # Safety
 `config` must be a live handle; `out` must be writable.
 */
enum SwStatus sw_delta_ec(const struct SwConfig *config, double *out);

/*
 Optical coupling quantities for the configured wire.

 # Safety
 `config` must be a live handle; `out` must be writable.
 */
enum SwStatus sw_optical_coupling(const struct SwConfig *config, struct SwOpticalCoupling *out);

/*
 Full decoherence budget for the configured wire and design.

 # Safety
 `config` must be a live handle; `out` must be writable.
 */
enum SwStatus sw_decoherence_rates(const struct SwConfig *config, struct SwRates *out);

/*
 Integrate the pulsed transport at the configured geometry with the given
 adiabaticity Ωτ; drive and decoherence derive from the configuration.

 # Safety
 `config` must be a live handle; `out` must be writable.
 */
enum SwStatus sw_stirap_transport(const struct SwConfig *config,
                                  double adiabaticity,
                                  struct SwTransport *out);

/*
 Build the feasibility map for `design` and write it as CSV to `path`.

 # Safety
 `config` must be a live handle; `path` a valid NUL-terminated string.
 */
enum SwStatus sw_sweep_csv(const struct SwConfig *config, enum SwDesign design, const char *path);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* STIRAP_WIRE_H */
