#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <vector>

#include "wit/cli/config.hpp"
#include "wit/model/localizer.hpp"

namespace wit::cli {

// Stable process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // I/O, format or generation failures
inline constexpr int kExitConfig = 2;   // bad config or usage
inline constexpr int kExitTraining = 3;
inline constexpr int kExitEvaluation = 4;

/// Generates, splits, normalizes and saves a dataset; prints a summary.
void cmd_gen(const Config& cfg, const std::filesystem::path& out, std::ostream& report);

/// Trains one model on a saved dataset; writes the checkpoint and the
/// per-epoch history.
void cmd_train(const Config& cfg, const std::filesystem::path& dataset, model::ModelKind kind, model::Pooling pooling,
               const std::filesystem::path& checkpoint, const std::filesystem::path& history, std::ostream& report);

/// Evaluates checkpoints on the test part of a dataset: one "method MAE p95"
/// row each, plus an ECDF file per checkpoint (ecdf_out when given for a
/// single checkpoint, otherwise <checkpoint>.ecdf.txt).
void cmd_eval(const std::vector<std::filesystem::path>& checkpoints, const std::filesystem::path& dataset,
              const std::optional<std::filesystem::path>& ecdf_out, std::ostream& report);

/// Per-snapshot RMS delay and azimuth spread of one transmitter, one
/// "tau_rms_s phi_rms_rad" row per snapshot.
void cmd_diag(const Config& cfg, std::ostream& out);

/// Entry point of the `wit` tool; returns the process exit code.
int run(int argc, char** argv);

}  // namespace wit::cli
