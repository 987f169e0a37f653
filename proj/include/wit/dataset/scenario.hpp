#pragma once

#include <cstddef>
#include <limits>

#include "wit/channel/channel.hpp"
#include "wit/channel/paths.hpp"
#include "wit/channel/scene.hpp"

namespace wit::data {

enum class NormMode { kAll, kTrainOnly };

/// Everything needed to synthesize a dataset.
struct ScenarioConfig {
  channel::SceneLayout layout;
  channel::SnapshotNoise noise;
  channel::PropagationConfig propagation;
  channel::OfdmGrid grid;
  std::size_t array_mx = 8;
  std::size_t array_mz = 8;
  std::size_t snapshots = 1;  // T
  double tx_power_dbm = 20.0;
  double power_threshold_dbm = -130.0;
  double split_ratio = 0.75;
  NormMode norm_mode = NormMode::kAll;

  channel::ArrayGeometry geometry() const {
    return channel::ArrayGeometry::half_wavelength(array_mx, array_mz, layout.num_rrh, propagation.carrier_hz);
  }
  std::size_t antennas() const { return array_mx * array_mz * layout.num_rrh; }
  std::size_t active_subcarriers() const { return grid.active().size(); }
};

}  // namespace wit::data
