#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "iep/gaussian.hpp"
#include "iep/rng.hpp"

namespace iep {

enum class Command {
  gof,
  twosample,
  ksample,
  changepoint,
  estimated,
  localtime,
  simulate_null,
  rate_experiment,
};

std::string to_string(Command command);
Command parse_command(const std::string& name);

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitData = 2;
inline constexpr int kExitInternal = 3;

inline constexpr int kSchemaVersion = 1;

struct ExperimentConfig {
  Command command = Command::gof;
  std::vector<std::filesystem::path> inputs;
  std::string model = "uniform";
  std::optional<std::size_t> reps;  // per-command default when unset
  Seed seed = 0;
  std::optional<unsigned> grid_depth;
  std::optional<std::filesystem::path> output;  // stdout when unset
  std::size_t threads = 1;                      // not part of any artifact

  // gof, twosample, ksample: ks | cvm. simulate-null: ks | cvm | cp | cp-weighted | estimated.
  // rate-experiment: integrated | plain | estimated.
  std::string statistic;
  unsigned q = 1;  // twosample: q > 1 selects the modified statistic
  std::string group_column;  // ksample (and twosample) long-format input
  std::string value_column = "value";
  bool weighted = false;  // changepoint
  std::string family = "exp";
  std::vector<std::size_t> n_list;  // localtime, rate-experiment
  std::optional<std::filesystem::path> cache_dir;
};

std::size_t default_reps(Command command);

// Throws UsageError listing every invalid flag combination.
void validate(const ExperimentConfig& config);

// The artifact bytes for the config: a JSON report for the test commands and
// CSV for localtime, simulate-null and rate-experiment. A pure function of the
// config apart from `threads` and `output`. Throws UsageError, DataError.
std::string render(const ExperimentConfig& config);

// Validates, renders and writes the artifact to the output path or to `out`.
// Errors are reported on `err`; returns the exit code.
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace iep
