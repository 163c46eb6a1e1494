#include "procpolar/procpolar.h"

#include <exception>
#include <string>

#include "procpolar/commands.hpp"
#include "procpolar/errors.hpp"
#include "procpolar/exact_lp.hpp"

struct pp_instance {
  procpolar::Instance value;
  std::string json;
  std::string digest;
};

struct pp_report {
  procpolar::Report value;
  std::string rendered;
};

namespace {

thread_local std::string last_error;

template <class Body>
pp_status guarded(Body body) {
  last_error.clear();
  try {
    return body();
  } catch (const procpolar::InputError& e) {
    last_error = e.what();
    return PP_INPUT_ERROR;
  } catch (const procpolar::PreconditionError& e) {
    last_error = e.what();
    return PP_INPUT_ERROR;
  } catch (const std::exception& e) {
    last_error = e.what();
    return PP_INTERNAL_ERROR;
  } catch (...) {
    last_error = "unknown failure";
    return PP_INTERNAL_ERROR;
  }
}

pp_status wrap_instance(procpolar::Instance value, pp_instance** out) {
  auto* inst = new pp_instance{std::move(value), {}, {}};
  inst->json = procpolar::serialize_instance(inst->value);
  inst->digest = procpolar::fnv1a_hex(inst->json);
  *out = inst;
  return PP_OK;
}

pp_status wrap_report(procpolar::Report value, pp_report** out) {
  const bool passed = value.passed();
  *out = new pp_report{std::move(value), {}};
  return passed ? PP_OK : PP_CHECK_FAILED;
}

}  // namespace

extern "C" {

const char* pp_version(void) { return "0.1.0"; }

const char* pp_last_error(void) { return last_error.c_str(); }

pp_status pp_instance_load(const char* path, pp_instance** out) {
  if (!out) return PP_INPUT_ERROR;
  *out = nullptr;
  return guarded([&] {
    if (!path) throw procpolar::InputError("no instance path");
    return wrap_instance(procpolar::load_instance(path), out);
  });
}

pp_status pp_instance_parse(const char* json_text, pp_instance** out) {
  if (!out) return PP_INPUT_ERROR;
  *out = nullptr;
  return guarded([&] {
    if (!json_text) throw procpolar::InputError("no instance text");
    return wrap_instance(procpolar::parse_instance(json_text), out);
  });
}

void pp_instance_free(pp_instance* instance) { delete instance; }

const char* pp_instance_json(const pp_instance* instance) { return instance ? instance->json.c_str() : ""; }

const char* pp_instance_digest(const pp_instance* instance) { return instance ? instance->digest.c_str() : ""; }

pp_status pp_check(const pp_instance* instance, const char* what, const pp_check_options* options,
                   pp_report** out) {
  if (!out) return PP_INPUT_ERROR;
  *out = nullptr;
  return guarded([&] {
    if (!instance || !what) throw procpolar::InputError("pp_check needs an instance and a check name");
    procpolar::CheckOptions opts;
    if (options) {
      opts.seed = options->seed;
      if (options->budget) opts.budget = procpolar::parse_rational(options->budget);
    }
    return wrap_report(procpolar::run_check(instance->value, what, opts), out);
  });
}

pp_status pp_fuzz(const char* suite, uint64_t count, uint64_t seed, pp_report** out) {
  if (!out) return PP_INPUT_ERROR;
  *out = nullptr;
  return guarded([&] {
    if (!suite) throw procpolar::InputError("no suite");
    return wrap_report(procpolar::run_fuzz(suite, count, seed), out);
  });
}

pp_status pp_report_status(const pp_report* report) {
  if (!report) return PP_INPUT_ERROR;
  return report->value.passed() ? PP_OK : PP_CHECK_FAILED;
}

const char* pp_report_render(pp_report* report, int format) {
  if (!report) return "";
  report->rendered = format == 1 ? report->value.machine() : report->value.text();
  return report->rendered.c_str();
}

size_t pp_report_check_count(const pp_report* report) { return report ? report->value.checks.size() : 0; }

pp_status pp_report_check(const pp_report* report, size_t index, const char** id, int* pass,
                          const char** certificate) {
  if (!report || index >= report->value.checks.size()) return PP_INPUT_ERROR;
  const auto& c = report->value.checks[index];
  if (id) *id = c.id.c_str();
  if (pass) *pass = c.pass ? 1 : 0;
  if (certificate) *certificate = c.certificate.c_str();
  return PP_OK;
}

double pp_report_elapsed_ms(const pp_report* report) { return report ? report->value.elapsed_ms : 0.0; }

void pp_report_free(pp_report* report) { delete report; }

uint64_t pp_certificates_verified(void) { return procpolar::certificates_verified(); }

}  // extern "C"
