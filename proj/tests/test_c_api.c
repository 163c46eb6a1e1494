/* Exercises the shared library through its C header only. */
#include <stdio.h>
#include <string.h>

#include "procpolar/procpolar.h"

static int failures = 0;

#define EXPECT(cond)                                                 \
  do {                                                               \
    if (!(cond)) {                                                   \
      fprintf(stderr, "%s:%d: expected %s\n", __FILE__, __LINE__, #cond); \
      ++failures;                                                    \
    }                                                                \
  } while (0)

static const char* fixture(const char* name) {
  static char path[4096];
  snprintf(path, sizeof path, "%s/%s", PROCPOLAR_FIXTURE_DIR, name);
  return path;
}

int main(void) {
  EXPECT(strlen(pp_version()) > 0);

  pp_instance* inst = NULL;
  EXPECT(pp_instance_load(fixture("M2.json"), &inst) == PP_OK);
  EXPECT(inst != NULL);
  EXPECT(strlen(pp_instance_digest(inst)) == 16);
  EXPECT(strstr(pp_instance_json(inst), "\"tree\"") != NULL);

  pp_check_options opt = {0, NULL};
  pp_report* rep = NULL;
  EXPECT(pp_check(inst, "budget", &opt, &rep) == PP_OK);
  EXPECT(pp_report_status(rep) == PP_OK);
  EXPECT(pp_report_check_count(rep) >= 1);
  const char* id = NULL;
  const char* cert = NULL;
  int pass = 0;
  EXPECT(pp_report_check(rep, 0, &id, &pass, &cert) == PP_OK);
  EXPECT(pass == 1);
  EXPECT(id != NULL && strlen(id) > 0);
  EXPECT(pp_report_check(rep, 1000, &id, &pass, &cert) == PP_INPUT_ERROR);
  EXPECT(strstr(pp_report_render(rep, 0), "passed") != NULL);
  EXPECT(strchr(pp_report_render(rep, 1), '\t') != NULL);
  EXPECT(pp_report_elapsed_ms(rep) >= 0);
  pp_report_free(rep);

  opt.budget = "99/100";
  rep = NULL;
  EXPECT(pp_check(inst, "budget", &opt, &rep) == PP_CHECK_FAILED);
  EXPECT(rep != NULL && strstr(pp_report_render(rep, 0), "(1, 1/3, 0, 2/3)") != NULL);
  pp_report_free(rep);

  opt.budget = "0.99";
  rep = NULL;
  EXPECT(pp_check(inst, "budget", &opt, &rep) == PP_INPUT_ERROR);
  EXPECT(rep == NULL);
  EXPECT(strstr(pp_last_error(), "exact rationals required") != NULL);
  pp_instance_free(inst);

  inst = NULL;
  EXPECT(pp_instance_load(fixture("decimal.json"), &inst) == PP_INPUT_ERROR);
  EXPECT(inst == NULL);
  EXPECT(pp_instance_parse("{\"version\": 1, \"tree\": {\"parents\": [null], \"probs\": [\"1\"]}}", &inst) == PP_OK);
  EXPECT(pp_check(inst, "tree", NULL, &rep) == PP_OK);
  pp_report_free(rep);
  pp_instance_free(inst);

  EXPECT(pp_fuzz("cbt", 0, 1, &rep) == PP_INPUT_ERROR);
  EXPECT(pp_fuzz("fbt", 2, 7, &rep) == PP_OK);
  EXPECT(pp_report_check_count(rep) == 2);
  pp_report_free(rep);
  EXPECT(pp_certificates_verified() > 0);

  if (failures) {
    fprintf(stderr, "%d c api expectations failed\n", failures);
    return 1;
  }
  printf("c api: all expectations met\n");
  return 0;
}
