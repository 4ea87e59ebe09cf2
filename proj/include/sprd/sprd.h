#ifndef SPRD_SPRD_H
#define SPRD_SPRD_H

/* C interface of the sprd library. Every call returns a status code; on
 * failure sprd_last_error() describes the problem (thread-local, valid until
 * the next failing call on the same thread). Strings returned through char**
 * are owned by the caller and released with sprd_string_free. */

#ifdef __cplusplus
extern "C" {
#endif

#if defined(SPRD_BUILDING_LIBRARY)
#define SPRD_API __attribute__((visibility("default")))
#else
#define SPRD_API
#endif

typedef enum sprd_status {
  SPRD_OK = 0,
  SPRD_INVALID_ARGUMENT = 1,
  SPRD_NON_FINITE = 2,
  SPRD_GRID_MISMATCH = 3,
  SPRD_CONFIG = 4,
  SPRD_IO = 5,
  SPRD_INTERNAL = 99
} sprd_status;

typedef struct sprd_config sprd_config;

SPRD_API const char* sprd_version(void);
SPRD_API const char* sprd_last_error(void);
SPRD_API void sprd_string_free(char* s);

/* Configuration handles. */
SPRD_API sprd_status sprd_config_default(sprd_config** out);
SPRD_API sprd_status sprd_config_load(const char* path, sprd_config** out);
SPRD_API sprd_status sprd_config_parse(const char* text, const char* source, sprd_config** out);
SPRD_API void sprd_config_free(sprd_config* cfg);
/* Sets a dotted key ("check.zeta", "seed") to a YAML/JSON scalar or list and
 * revalidates the whole configuration. */
SPRD_API sprd_status sprd_config_set(sprd_config* cfg, const char* key, const char* value);
SPRD_API sprd_status sprd_config_to_json(const sprd_config* cfg, char** json);
SPRD_API sprd_status sprd_config_hash(const sprd_config* cfg, char** hex);

/* Workflows. `out_dir` NULL uses the configured output directory. `passed`
 * receives the scientific verdict (1 pass, 0 fail) and may be NULL. */
SPRD_API sprd_status sprd_check(const sprd_config* cfg, const char* out_dir, char** json,
                                int* passed);
SPRD_API sprd_status sprd_run(const sprd_config* cfg, const char* out_dir, char** json,
                              int* passed);
SPRD_API sprd_status sprd_ensemble(const sprd_config* cfg, const char* out_dir, char** json,
                                   int* passed);
SPRD_API sprd_status sprd_depcheck(const sprd_config* cfg, const char* out_dir, char** json,
                                   int* passed);
SPRD_API sprd_status sprd_gronwall(const sprd_config* cfg, const char* out_dir, char** json,
                                   int* passed);
/* kind: "energy", "tail", "dependence" or "raster". */
SPRD_API sprd_status sprd_plotdata(const sprd_config* cfg, const char* kind,
                                   const char* out_dir, char** json);

#ifdef __cplusplus
}
#endif

#endif
