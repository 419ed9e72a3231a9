#pragma once

#include "shockcontract/cli/output.hpp"
#include "shockcontract/cli/run_config.hpp"

namespace shockcontract::cli {

/// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitVerdictFail = 2;

/// Flags that only steer a single subcommand.
struct CommandFlags {
  bool scan = false;
};

int run_eigen(const RunConfig& config, Sink& sink);
int run_hugoniot(const RunConfig& config, Sink& sink);
int run_dmax(const RunConfig& config, Sink& sink);
int run_criterion(const RunConfig& config, const CommandFlags& flags, Sink& sink);
int run_limit_check(const RunConfig& config, Sink& sink);
int run_counterexample(const RunConfig& config, Sink& sink);
int run_simulate(const RunConfig& config, Sink& sink);
int run_reproduce(const RunConfig& config, Sink& sink);

/// "example3x3(alpha=1)".
[[nodiscard]] std::string describe(const SystemSpec& spec);

}  // namespace shockcontract::cli
