#ifndef SUPERINT_H
#define SUPERINT_H

/* C interface to the superintegrability lab. Experiments are described by a
 * JSON config document; results come back as an opaque report handle plus a
 * status code matching the CLI exit codes. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum si_rc {
  SI_OK = 0,            /* experiment ran and every check passed */
  SI_FAIL = 1,          /* experiment ran, at least one check failed */
  SI_CONFIG_ERROR = 2,  /* config rejected before running */
  SI_RUNTIME_ERROR = 3  /* singularity or other runtime failure */
} si_rc;

typedef struct si_report si_report;

/* Runs one experiment from a JSON config string. Artifacts are written under
 * out_dir (the SUPERINT_OUT environment variable overrides it). On SI_OK and
 * SI_FAIL *out receives a report handle the caller must free; on error *out
 * is null and si_last_error() describes the failure. */
si_rc si_run_config(const char* config_json, const char* out_dir,
                        si_report** out);

/* Same, reading the config from a file. */
si_rc si_run_file(const char* config_path, const char* out_dir,
                      si_report** out);

/* 1 if every check in the report passed, 0 otherwise. */
int si_report_passed(const si_report* report);

/* Report as a JSON string owned by the handle; valid until si_report_free. */
const char* si_report_json(const si_report* report);

void si_report_free(si_report* report);

/* Message for the most recent failure on this thread, or "" if none. */
const char* si_last_error(void);

const char* si_version(void);

#ifdef __cplusplus
}
#endif

#endif /* SUPERINT_H */
