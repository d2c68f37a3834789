#ifndef GROWUP_GROWUP_H
#define GROWUP_GROWUP_H

#include <stddef.h>

#if defined(GROWUP_BUILDING_LIB)
#define GU_API __attribute__((visibility("default")))
#else
#define GU_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes; the CLI uses them as exit codes. */
typedef enum gu_status {
  GU_OK = 0,
  GU_ERR_CONFIG = 2,     /* bad configuration, input file or I/O failure */
  GU_ERR_REGIME = 3,     /* parameters outside the grow-up regime */
  GU_ERR_NUMERICAL = 4,  /* solver or shooting failure */
  GU_ERR_ACCEPTANCE = 5  /* a verification check failed */
} gu_status;

typedef struct gu_config gu_config;
typedef struct gu_result gu_result;
typedef struct gu_params gu_params;
typedef struct gu_profile gu_profile;

typedef struct gu_exponents {
  double L;
  double sigma_star;
  double alpha;
  double beta;
} gu_exponents;

/* Message and short tag of the last failure on the calling thread ("" if none). */
GU_API const char* gu_last_error(void);
GU_API const char* gu_last_error_tag(void);
GU_API const char* gu_version(void);

/* Experiment configuration: flat key = value pairs with schema defaults. */
GU_API gu_status gu_config_new(gu_config** out);
GU_API gu_status gu_config_load(const char* path, gu_config** out);
GU_API gu_status gu_config_parse(const char* text, gu_config** out);
GU_API gu_status gu_config_set(gu_config* cfg, const char* key, const char* value);
GU_API gu_status gu_config_get(const gu_config* cfg, const char* key, const char** value);
/* Sorted `key = value` lines; valid until the next call on the same handle. */
GU_API const char* gu_config_echo(gu_config* cfg);
GU_API void gu_config_free(gu_config* cfg);

/* Command names, NULL past the end. */
GU_API const char* gu_command_name(size_t index);

/* Runs a subcommand. On success or a failed check (GU_ERR_ACCEPTANCE) *out holds a
   result handle; otherwise *out is NULL and gu_last_error() explains. */
GU_API gu_status gu_run(const gu_config* cfg, const char* command, gu_result** out);
GU_API const char* gu_result_summary(const gu_result* res);
GU_API size_t gu_result_file_count(const gu_result* res);
GU_API const char* gu_result_file(const gu_result* res, size_t index);
GU_API gu_status gu_result_status(const gu_result* res);
GU_API void gu_result_free(gu_result* res);

/* Problem parameters and derived quantities. */
GU_API gu_status gu_params_create(double m, double p, int N, double sigma, double A, gu_params** out);
GU_API gu_status gu_params_exponents(const gu_params* pr, gu_exponents* out);
GU_API gu_status gu_scaling_factor(const gu_params* pr, double c, double* out);
GU_API void gu_params_free(gu_params* pr);

/* Self-similar profile f_* and the annular subsolution profile. */
GU_API gu_status gu_profile_selfsimilar(const gu_params* pr, gu_profile** out);
GU_API gu_status gu_profile_annular(const gu_params* pr, double R1, gu_profile** out);
GU_API size_t gu_profile_size(const gu_profile* prof);
GU_API const double* gu_profile_xi(const gu_profile* prof);
GU_API const double* gu_profile_f(const gu_profile* prof);
GU_API double gu_profile_support_lo(const gu_profile* prof);
GU_API double gu_profile_support_hi(const gu_profile* prof);
GU_API double gu_profile_shooting_parameter(const gu_profile* prof);
GU_API double gu_profile_eval(const gu_profile* prof, double xi);
GU_API void gu_profile_free(gu_profile* prof);

#ifdef __cplusplus
}
#endif

#endif
