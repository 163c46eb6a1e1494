/* C interface to the procpolar checks. All strings are UTF-8 and owned by
 * the library unless a function says otherwise. */
#ifndef PROCPOLAR_H
#define PROCPOLAR_H

#include <stddef.h>
#include <stdint.h>

#if defined(PROCPOLAR_BUILD)
#define PP_API __attribute__((visibility("default")))
#else
#define PP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pp_status {
  PP_OK = 0,
  PP_CHECK_FAILED = 1,
  PP_INPUT_ERROR = 2,
  PP_INTERNAL_ERROR = 3
} pp_status;

typedef struct pp_instance pp_instance;
typedef struct pp_report pp_report;

typedef struct pp_check_options {
  uint64_t seed;
  /* Rational literal overriding the instance budget, or NULL. */
  const char* budget;
} pp_check_options;

PP_API const char* pp_version(void);

/* Message of the last failed call on this thread; empty when none. */
PP_API const char* pp_last_error(void);

PP_API pp_status pp_instance_load(const char* path, pp_instance** out);
PP_API pp_status pp_instance_parse(const char* json_text, pp_instance** out);
PP_API void pp_instance_free(pp_instance* instance);
/* Canonical JSON; valid until the instance is freed. */
PP_API const char* pp_instance_json(const pp_instance* instance);
PP_API const char* pp_instance_digest(const pp_instance* instance);

/* On PP_OK or PP_CHECK_FAILED *out holds a report to free with
 * pp_report_free; otherwise *out is NULL and pp_last_error explains. */
PP_API pp_status pp_check(const pp_instance* instance, const char* what, const pp_check_options* options,
                          pp_report** out);
PP_API pp_status pp_fuzz(const char* suite, uint64_t count, uint64_t seed, pp_report** out);

PP_API pp_status pp_report_status(const pp_report* report);
/* format 0: text, 1: machine. Valid until the report is freed. */
PP_API const char* pp_report_render(pp_report* report, int format);
PP_API size_t pp_report_check_count(const pp_report* report);
/* Fills id, pass flag and certificate of check `index`; PP_INPUT_ERROR when
 * out of range. */
PP_API pp_status pp_report_check(const pp_report* report, size_t index, const char** id, int* pass,
                                 const char** certificate);
PP_API double pp_report_elapsed_ms(const pp_report* report);
PP_API void pp_report_free(pp_report* report);

/* Number of LP certificates re-verified in this process. */
PP_API uint64_t pp_certificates_verified(void);

#ifdef __cplusplus
}
#endif

#endif
