// Run configuration shared by all CLI subcommands, plus the error types the
// CLI maps to exit codes: 0 success, 2 config error, 3 data error,
// 4 numerical failure.

#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace choice::harness {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitDataError = 3;
inline constexpr int kExitNumericalError = 4;

struct RunConfig {
  std::string task = "fork";
  std::string algo = "choice";  // choice | bc | denoiser
  std::string selection = "score";
  int k = 5;
  int horizon = 8;
  int epochs = 60;
  int batch = 64;
  int episodes = 100;
  std::uint64_t seed = 1;
  std::string out;
  std::string checkpoint;
  std::string data;
  std::vector<std::string> checkpoints;  // bench-latency inputs

  // flags the user set explicitly (vs. defaults), filled by the CLI layer
  std::set<std::string> explicit_keys;
  bool is_set(const std::string& key) const { return explicit_keys.count(key) > 0; }

  // Hash of the scalar configuration (not file paths); stamped into every
  // artifact this run produces.
  std::string config_hash() const;
};

}  // namespace choice::harness
