#include "wit/channel/channel.hpp"

#include <cmath>

#include "wit/errors.hpp"

namespace wit::channel {

std::vector<Complex> steering_vector(double azimuth, double elevation, const ArrayGeometry& geom) {
  const double k = 2.0 * kPi / geom.wavelength * geom.spacing;
  const double phase_x = k * std::sin(elevation) * std::sin(azimuth);
  const double phase_z = k * std::cos(elevation);
  std::vector<Complex> a(geom.per_rrh());
  for (std::size_t iz = 0; iz < geom.mz; ++iz) {
    const Complex az = std::polar(1.0, phase_z * static_cast<double>(iz));
    for (std::size_t ix = 0; ix < geom.mx; ++ix) {
      a[iz * geom.mx + ix] = az * std::polar(1.0, phase_x * static_cast<double>(ix));
    }
  }
  return a;
}

std::vector<std::size_t> OfdmGrid::active() const {
  std::vector<std::size_t> ks;
  for (std::size_t k = 0; k < num_subcarriers; k += stride) ks.push_back(k);
  return ks;
}

ChannelMatrix channel_matrix(const std::vector<Path>& paths, const ArrayGeometry& geom, const OfdmGrid& grid) {
  ChannelMatrix h;
  h.antennas = geom.total_antennas();
  h.subcarriers = grid.active();
  h.spacing_hz = grid.spacing_hz();
  if (h.subcarriers.empty()) throw UsageError("channel_matrix: no active subcarriers");
  h.entries.assign(h.antennas * h.cols(), Complex{});
  const std::size_t per = geom.per_rrh();
  for (const Path& p : paths) {
    if (p.rrh >= geom.num_rrh) throw DimensionError("channel_matrix: path refers to a missing RRH");
    const auto a = steering_vector(p.azimuth, p.elevation, geom);
    for (std::size_t n = 0; n < h.cols(); ++n) {
      const double phase = 2.0 * kPi * static_cast<double>(h.subcarriers[n]) * h.spacing_hz * p.delay;
      const Complex coef = p.gain * std::polar(1.0, phase);
      for (std::size_t i = 0; i < per; ++i) h.at(p.rrh * per + i, n) += coef * a[i];
    }
  }
  return h;
}

}  // namespace wit::channel
