#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "procpolar/instance.hpp"
#include "procpolar/report.hpp"

namespace procpolar {

struct CheckOptions {
  std::uint64_t seed = 0;
  /// Overrides the instance's budget.
  std::optional<Rational> budget;
};

/// what: tree, supermartingale, polar, bipolar, cbt, fbt, market, budget.
/// InputError / PreconditionError when the instance cannot support the check.
Report run_check(const Instance& instance, const std::string& what, const CheckOptions& options);

/// suite: cbt, fbt, market. InputError when count is 0 or the suite unknown.
Report run_fuzz(const std::string& suite, std::uint64_t count, std::uint64_t seed);

}  // namespace procpolar
