#pragma once

#include <complex>
#include <cstddef>
#include <limits>
#include <vector>

#include "wit/channel/geometry.hpp"
#include "wit/random.hpp"

namespace wit::channel {

using Complex = std::complex<double>;

struct Path {
  Complex gain;
  double delay = 0.0;      // s
  double azimuth = 0.0;    // rad
  double elevation = 0.0;  // rad
  std::size_t rrh = 0;
  // 0 for line of sight, s + 1 for scatterer s.
  std::size_t source = 0;

  bool is_los() const { return source == 0; }
};

struct PathSet {
  std::vector<Path> paths;
  std::size_t skipped = 0;  // degenerate segments dropped during synthesis
};

struct PropagationConfig {
  double carrier_hz = 3.5e9;
  std::size_t max_paths = 4;          // L, strongest kept per RRH
  double rain_attenuation_db = 3.0;   // LOS penalty while raining
  double nlos_extra_loss_db = 6.0;    // applied on top of the material factor
  double blockage_radius_m = 0.0;     // 0 disables LOS blockage
  double blockage_loss_db = 20.0;
  MaterialTable materials = MaterialTable::defaults();

  double wavelength() const { return kSpeedOfLight / carrier_hz; }
};

/// Single-bounce synthesis of the propagation paths from transmitter u to
/// every RRH of the scene. One LOS path per RRH and one NLOS path per
/// scatterer; only the L strongest per RRH survive, ordered by decreasing
/// gain (ties by delay, then source). NLOS phases come from `rng`.
PathSet derive_paths(const Position& u, const Scene& scene, bool rain, const PropagationConfig& cfg,
                     Rng& rng);

/// Power-weighted RMS spread of the delays, measured after shifting the
/// strongest path to zero delay.
double rms_delay_spread(const std::vector<Path>& paths);
/// Power-weighted RMS spread of the azimuths (linear statistics).
double rms_azimuth_spread(const std::vector<Path>& paths);

/// tx_power_dbm + 10 log10(sum |eta|^2); -inf when every gain is zero.
double received_power_dbm(const std::vector<Path>& paths, double tx_power_dbm);

}  // namespace wit::channel
