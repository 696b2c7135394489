/* SPDX-License-Identifier: Apache-2.0
 *
 * machlim: pseudo-spectral solvers for the Mach-number-rescaled compressible
 * MHD system, its zero-Mach limit system, and the associated acoustic wave
 * tool, behind a C ABI with opaque handles and status codes.
 *
 * Every suite entry point reads a run configuration (flat key=value text),
 * writes its CSV outputs, and returns MACHLIM_OK only when all assertions of
 * the invoked suite passed.  Details of the last failure are available from
 * machlim_last_error() (thread-local).
 */
#ifndef MACHLIM_H
#define MACHLIM_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum machlim_status {
    MACHLIM_OK = 0,
    MACHLIM_ERR_INVALID_ARGUMENT = 1, /* contract violation (bad arity, bad value)  */
    MACHLIM_ERR_CONFIG = 2,           /* config parse/validation failure            */
    MACHLIM_ERR_IO = 3,               /* file format or filesystem failure          */
    MACHLIM_ERR_NUMERIC = 4,          /* non-finite fields / overflow guard tripped */
    MACHLIM_ERR_CONVERGENCE = 5,      /* iterative solver missed its tolerance      */
    MACHLIM_ERR_ASSERTION = 6,        /* suite completed but a check failed         */
    MACHLIM_ERR_INTERNAL = 7
} machlim_status;

typedef struct machlim_config machlim_config;

unsigned machlim_abi_version(void);
const char* machlim_status_name(machlim_status status);
const char* machlim_last_error(void);

/* Configuration ----------------------------------------------------------- */

machlim_status machlim_config_parse_file(const char* path, machlim_config** out);
machlim_status machlim_config_parse_string(const char* text, machlim_config** out);
machlim_status machlim_config_set(machlim_config* cfg, const char* key, const char* value);
machlim_status machlim_config_get(const machlim_config* cfg, const char* key, char* buf,
                                  size_t buflen);
/* Canonical text form.  With buf == NULL, *needed receives the required
 * buffer size (including the terminating NUL). */
machlim_status machlim_config_serialize(const machlim_config* cfg, char* buf, size_t buflen,
                                        size_t* needed);
void machlim_config_free(machlim_config* cfg);

/* Suites -------------------------------------------------------------------
 * Output files land under the config's out.dir; csv_out arguments may be
 * NULL to stream the CSV to stdout. */

/* Rescaled-system run; asserts the trajectory invariants (div H residual). */
machlim_status machlim_run_eps(const machlim_config* cfg);

/* Zero-Mach limit run, from a checkpoint (w, h, vartheta, pi) or from
 * generated data when checkpoint_path is NULL; asserts the constraint
 * residual invariant. */
machlim_status machlim_run_limit(const machlim_config* cfg, const char* checkpoint_path);

/* Full eps sweep with rate fits against the limit-solver reference. */
machlim_status machlim_run_sweep(const machlim_config* cfg);

/* Wave-equation eps sweep; CSV columns eps,t,local_energy,total_energy.
 * With the sponge on, asserts monotone decay of the time-averaged local
 * energy along the eps list. */
machlim_status machlim_run_acoustic(const machlim_config* cfg, const char* csv_out);

/* Vector-identity suite at resolution n; CSV columns
 * name,residual,input_norm,pass.  Asserts every relative residual <= 1e-10. */
machlim_status machlim_run_identities(unsigned n, uint64_t seed, int rounds,
                                      const char* csv_out);

/* Fits log(value) ~ alpha log(eps) for every column of csv_in (header
 * eps,<quantity>[,...]); writes quantity,alpha,r2 rows. */
machlim_status machlim_fit_rates(const char* csv_in, const char* csv_out);

#ifdef __cplusplus
}
#endif

#endif /* MACHLIM_H */
