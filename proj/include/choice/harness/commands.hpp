// CLI subcommand implementations. Each throws ConfigError / DataError /
// NumericalError; run_command maps those to the documented exit codes.

#pragma once

#include "choice/harness/config.hpp"

namespace choice::harness {

void cmd_generate_data(const RunConfig& config);
void cmd_train(const RunConfig& config);
void cmd_eval(const RunConfig& config);
void cmd_ablate(const RunConfig& config);
void cmd_bench_latency(const RunConfig& config);
void cmd_report(const RunConfig& config);

// Dispatch + exception-to-exit-code mapping. Unknown command is a config
// error.
int run_command(const std::string& name, const RunConfig& config);

}  // namespace choice::harness
