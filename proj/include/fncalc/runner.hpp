#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "fncalc/leaf_solver.hpp"
#include "fncalc/mc.hpp"
#include "fncalc/report.hpp"
#include "fncalc/scenario.hpp"

namespace fncalc {

inline constexpr std::uint64_t kDefaultSeed = 1;

struct RunOptions {
  std::uint64_t seed = kDefaultSeed;
  int cap = kDefaultCap;
  Execution mode = Execution::Parallel;
  /// When non-empty, only checks of these kinds run.
  std::vector<std::string> only;
};

/// Flag value, then the environment value, then the scenario field, then the default.
std::uint64_t resolve_seed(const Scenario& scenario, std::optional<std::uint64_t> flag, const char* env);

/// Seed of the check at declaration index `index`, independent of execution order.
std::uint64_t check_seed(std::uint64_t seed, std::size_t index);

/// Runs one directive; failures inside the engine become an error record.
CheckRecord run_check(const Scenario& scenario, const CheckSpec& check, std::uint64_t seed, int cap);

/// Runs every directive; records follow declaration order in both modes.
Report run_scenario(const Scenario& scenario, const RunOptions& options);

}  // namespace fncalc
