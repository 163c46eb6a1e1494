// procpolar command-line front end; talks to the library through the C API only.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "procpolar/procpolar.h"

namespace {

struct Output {
  std::string out_path;
  std::string format = "text";
};

int emit(pp_status status, pp_report* report, const Output& o) {
  if (!report) {
    std::cerr << "error: " << pp_last_error() << "\n";
    return status;
  }
  const char* text = pp_report_render(report, o.format == "machine" ? 1 : 0);
  std::cout << text;
  if (!o.out_path.empty()) {
    std::ofstream f(o.out_path);
    if (!f) {
      std::cerr << "error: cannot write " << o.out_path << "\n";
      pp_report_free(report);
      return PP_INPUT_ERROR;
    }
    f << text;
  }
  pp_report_free(report);
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks for process polars, conditional bipolars and tree markets"};
  app.require_subcommand(1);
  app.set_version_flag("--version", pp_version());

  Output output;
  std::uint64_t seed = 0;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--seed", seed, "Random seed")->envname("PROCPOLAR_SEED");
    cmd->add_option("--out", output.out_path, "Also write the report to this file");
    cmd->add_option("--format", output.format, "Report format")->check(CLI::IsMember({"text", "machine"}));
  };

  std::string what, instance_path, budget;
  auto* check = app.add_subcommand("check", "Run one check on an instance file");
  check->add_option("what", what, "Check to run")
      ->required()
      ->check(CLI::IsMember({"tree", "supermartingale", "polar", "bipolar", "cbt", "fbt", "market", "budget"}));
  check->add_option("instance", instance_path, "Instance file (JSON)")->required();
  check->add_option("--budget", budget, "Budget x as an exact rational, overriding the instance");
  add_common(check);

  std::string suite;
  std::uint64_t count = 100;
  auto* fuzz = app.add_subcommand("fuzz", "Run a randomized verification suite");
  fuzz->add_option("suite", suite, "Suite")->required()->check(CLI::IsMember({"cbt", "fbt", "market"}));
  fuzz->add_option("--count", count, "Number of random instances");
  add_common(fuzz);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : PP_INPUT_ERROR;
  }

  pp_report* report = nullptr;
  if (check->parsed()) {
    pp_instance* instance = nullptr;
    if (const auto st = pp_instance_load(instance_path.c_str(), &instance); st != PP_OK) {
      std::cerr << "error: " << pp_last_error() << "\n";
      return st;
    }
    pp_check_options options{seed, budget.empty() ? nullptr : budget.c_str()};
    const auto st = pp_check(instance, what.c_str(), &options, &report);
    pp_instance_free(instance);
    return emit(st, report, output);
  }
  const auto st = pp_fuzz(suite.c_str(), count, seed, &report);
  return emit(st, report, output);
}
