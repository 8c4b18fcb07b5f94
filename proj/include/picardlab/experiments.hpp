#pragma once

#include <string>
#include <vector>

#include "picardlab/config.hpp"

namespace picardlab {

struct CommandResult {
  std::vector<std::string> files_written;  // paths inside the output directory
  std::string summary_json;                // empty when the command emits none
};

/// Experiment commands. Each validates its configuration up front (throwing
/// ConfigError with the offending field), runs the computation, and writes
/// CSV/JSON artifacts only inside the configured output directory. Reruns
/// with an identical configuration produce byte-identical files.
CommandResult run_series(const ExperimentConfig& config);
CommandResult run_phase_transition(const ExperimentConfig& config);
CommandResult run_dimension_sweep(const ExperimentConfig& config);
CommandResult run_apriori(const ExperimentConfig& config);
CommandResult run_picard_mc(const ExperimentConfig& config);

/// Dispatch on the `experiment` key.
CommandResult run_command(const ExperimentConfig& config);

/// 17-significant-digit scientific formatting used in every CSV cell.
std::string format_sci(double v);

}  // namespace picardlab
