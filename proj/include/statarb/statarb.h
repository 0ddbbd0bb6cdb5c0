/* statarb.h
 * C interface to the statarb shared library: opaque configuration handles,
 * error codes and the pipeline entry points. All functions return SA_OK on
 * success; on failure sa_last_error() describes the problem for the calling
 * thread.
 */

#ifndef STATARB_STATARB_H
#define STATARB_STATARB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum sa_status {
    SA_OK = 0,
    SA_E_CONFIG = 1,
    SA_E_IO = 2,
    SA_E_MALFORMED_ROW = 10,
    SA_E_OVERLAPPING_MEMBERSHIP = 11,
    SA_E_UNKNOWN_SIC_DIVISION = 12,
    SA_E_NON_POSITIVE_PRICE = 13,
    SA_E_TICKER_MISMATCH = 14,
    SA_E_RETURN_MISMATCH = 15,
    SA_E_OUT_OF_RANGE_VALUE = 20,
    SA_E_MISSING_MONTHLY_LEVEL = 21,
    SA_E_DUPLICATE_MONTH = 22,
    SA_E_EMPTY_UNIVERSE = 23,
    SA_E_INSUFFICIENT_HISTORY = 30,
    SA_E_NEGATIVE_SVI = 31,
    SA_E_ZERO_PRIOR_VOLUME = 32,
    SA_E_DEGENERATE_DAY = 33,
    SA_E_SINGLE_CLASS_TRAINING_SET = 40,
    SA_E_EMPTY_PANEL = 41,
    SA_E_MISSING_VARIABLE = 42,
    SA_E_RANGE_TOO_SHORT = 50,
    SA_E_TOO_FEW_SCORES = 60,
    SA_E_MISSING_REALIZED_RETURN = 61,
    SA_E_SINGLE_CLASS = 70,
    SA_E_TOO_FEW_OBSERVATIONS = 71,
    SA_E_DATE_MISMATCH = 72,
    SA_E_DEGENERATE_MOMENTS = 73,
    SA_E_GEOMETRIC_UNDEFINED = 74,
    SA_E_INVALID_CONFIG = 80,
    SA_E_INTERNAL = 99
} sa_status;

/* A configuration is a flat key=value store; see the project README for the
 * key list. Handles are not thread-safe; share them read-only. */
typedef struct sa_config sa_config_t;

const char* sa_version(void);

/* Message for the most recent failing call on this thread. */
const char* sa_last_error(void);

sa_status sa_config_create(sa_config_t** out);
void sa_config_free(sa_config_t* config);
sa_status sa_config_load_file(sa_config_t* config, const char* path);
sa_status sa_config_apply_env(sa_config_t* config); /* STATARB_<KEY> overrides */
sa_status sa_config_set(sa_config_t* config, const char* key, const char* value);
sa_status sa_config_get(const sa_config_t* config, const char* key, char* buffer, size_t capacity);
sa_status sa_config_hash(const sa_config_t* config, uint64_t* out);

/* Pipeline commands. When `report` is non-NULL it receives a heap-allocated
 * text report; release it with sa_string_free. */
sa_status sa_cmd_synth(const sa_config_t* config);
sa_status sa_cmd_ingest_check(const sa_config_t* config, char** report);
sa_status sa_cmd_stitch(const sa_config_t* config);
sa_status sa_cmd_panel(const sa_config_t* config, char** report);
sa_status sa_cmd_run(const sa_config_t* config, char** report);
sa_status sa_cmd_report(const sa_config_t* config, char** report);

void sa_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* STATARB_STATARB_H */
