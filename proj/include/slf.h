/*
 * slf — short-term appliance-level load forecasting
 *
 * C interface to the forecasting core: opaque handles, status-code returns,
 * thread-local error messages. Everything the CLI does goes through this
 * surface, so embedding the library gives the same behaviour as the tool.
 */
#ifndef SLF_H
#define SLF_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define SLF_API __declspec(dllexport)
#else
#define SLF_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum slf_status {
  SLF_OK = 0,
  SLF_ERR_INVALID_ARGUMENT = 1,
  SLF_ERR_SHAPE = 2,
  SLF_ERR_PARSE = 3,
  SLF_ERR_SCHEMA = 4,
  SLF_ERR_SINGULAR = 5,
  SLF_ERR_DEGENERATE_SCALE = 6,
  SLF_ERR_INSUFFICIENT_DATA = 7,
  SLF_ERR_DIVERGENCE = 8,
  SLF_ERR_IO = 9,
  SLF_ERR_FORMAT = 10,
  SLF_ERR_MISMATCH = 11,
  SLF_ERR_INTERNAL = 12,
} slf_status;

SLF_API const char* slf_status_name(slf_status status);

/* Message describing the calling thread's most recent failure. Valid until
 * the next failing call on the same thread. */
SLF_API const char* slf_last_error(void);

SLF_API const char* slf_version(void);

/* ---- run configuration ------------------------------------------------- */

typedef struct slf_config slf_config;

SLF_API slf_config* slf_config_new(void);
SLF_API void slf_config_free(slf_config* cfg);

/* Loads "key = value" lines ('#' comments) over the built-in defaults. */
SLF_API slf_status slf_config_load_file(slf_config* cfg, const char* path);
SLF_API slf_status slf_config_set(slf_config* cfg, const char* key,
                                  const char* value);
/* Copies the value into buf (NUL-terminated, truncating). Unknown key fails. */
SLF_API slf_status slf_config_get(const slf_config* cfg, const char* key,
                                  char* buf, size_t buflen);

SLF_API size_t slf_config_known_key_count(void);
SLF_API const char* slf_config_known_key(size_t index);

/* ---- datasets ----------------------------------------------------------- */

typedef struct slf_dataset slf_dataset;

SLF_API slf_status slf_dataset_open_csv(const char* path, slf_dataset** out);
/* Deterministic synthetic building from the config's synth keys. */
SLF_API slf_status slf_dataset_synthesize(const slf_config* cfg,
                                          slf_dataset** out);
SLF_API slf_status slf_dataset_write_csv(const slf_dataset* ds,
                                         const char* path);
SLF_API void slf_dataset_free(slf_dataset* ds);

SLF_API size_t slf_dataset_rows(const slf_dataset* ds);
SLF_API size_t slf_dataset_appliance_count(const slf_dataset* ds);
SLF_API const char* slf_dataset_appliance_name(const slf_dataset* ds,
                                               size_t index);

/* ---- models ------------------------------------------------------------- */

typedef struct slf_model slf_model;

/* Trains the configured model kind on the dataset. If log_csv_path is
 * non-NULL the per-epoch loss table is written there. */
SLF_API slf_status slf_train(const slf_config* cfg, const slf_dataset* ds,
                             const char* log_csv_path, slf_model** out);

SLF_API slf_status slf_model_save(const slf_model* model, const char* path);
SLF_API slf_status slf_model_load(const char* path, slf_model** out);
SLF_API void slf_model_free(slf_model* model);

SLF_API const char* slf_model_kind(const slf_model* model);
SLF_API size_t slf_model_horizon(const slf_model* model);
SLF_API size_t slf_model_class_count(const slf_model* model);

/* Rolling hour-ahead evaluation on the dataset's test split; writes
 * report.csv and pred_<appliance>.csv under out_dir. */
SLF_API slf_status slf_evaluate(const slf_model* model, const slf_dataset* ds,
                                const char* out_dir);

/* Forecast from the tail of a dataset holding at least 24 h of readings.
 * out_watts receives horizon values; out_probs (optional, seq2seq only)
 * receives class_count appliance probabilities. */
SLF_API slf_status slf_forecast(const slf_model* model, const slf_dataset* ds,
                                const char* appliance, double* out_watts,
                                size_t out_watts_len, double* out_probs,
                                size_t out_probs_len);

/* ---- command-level entry points (what the CLI calls) -------------------- */

SLF_API slf_status slf_run_synth(const slf_config* cfg);
SLF_API slf_status slf_run_train(const slf_config* cfg);
SLF_API slf_status slf_run_evaluate(const slf_config* cfg);

/* On success *out_text receives a malloc'd report (free with
 * slf_string_free): one "forecast,<timestamp>,<watts>" line per horizon step,
 * then for seq2seq one "prob,<appliance>,<p>" line per class. */
SLF_API slf_status slf_run_forecast(const slf_config* cfg, char** out_text);

SLF_API slf_status slf_run_report(const char* const* report_paths, size_t count,
                                  const slf_config* cfg);

SLF_API void slf_string_free(char* s);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SLF_H */
