#pragma once

#include <cstdint>
#include <string>

#include "wit/channel/geometry.hpp"
#include "wit/random.hpp"

namespace wit::channel {

struct Region {
  double xmin = 0.0, xmax = 100.0;
  double ymin = 0.0, ymax = 100.0;
};

enum class TxLayout { kRandom, kGrid };

struct SceneLayout {
  Region roi;
  std::size_t num_tx = 100;
  std::size_t num_scatterers = 20;
  std::size_t num_movable = 10;
  std::size_t num_rrh = 1;
  double tx_height = 1.5;
  double rrh_height = 20.0;
  double scatterer_max_height = 10.0;
  double bs_x = 50.0;
  double bs_y = -20.0;
  TxLayout tx_layout = TxLayout::kRandom;
  std::size_t num_materials = 4;
};

/// Static scene: transmitters at tx_height, a single BS at (bs_x, bs_y) or
/// M RRHs spread evenly along the ROI boundary, scatterers uniform in the ROI.
/// The first num_movable scatterers form the movable set.
Scene make_scene(const SceneLayout& layout, std::uint64_t seed);

struct SnapshotNoise {
  double sigma_scatterer = 0.0;  // sigma_z, m
  double sigma_tx = 0.0;         // sigma_n, m
  double rain_prob = 0.0;
};

/// Scene at one time snapshot: movable scatterers and transmitters jittered
/// with i.i.d. Gaussian offsets, materials redrawn uniformly from
/// num_materials types, rain drawn Bernoulli(rain_prob).
Scene perturb_scene(const Scene& base, const SnapshotNoise& noise, std::size_t num_materials, Rng& rng);

/// perturb_scene with the generator of substream (seed, t).
Scene snapshot_scene(const Scene& base, const SnapshotNoise& noise, std::size_t num_materials,
                     std::uint64_t seed, std::size_t t);

}  // namespace wit::channel
