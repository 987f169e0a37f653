#pragma once

#include <cstdint>
#include <filesystem>

#include "wit/model/localizer.hpp"
#include "wit/model/params.hpp"

namespace wit::model {

inline constexpr char kCheckpointMagic[] = "WITCK1";
inline constexpr std::uint64_t kCheckpointVersion = 1;

struct Checkpoint {
  ModelConfig config;
  ParameterSet params;
  std::uint64_t best_epoch = 0;
  double best_val_mae_m = 0.0;
};

/// Versioned header, the architecture, then one named blob per parameter
/// (name, rank, extents, little-endian doubles).
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace wit::model
