#include "wit/channel/geometry.hpp"

#include <algorithm>

namespace wit::channel {

double segment_distance(const Position& p, const Position& a, const Position& b) {
  const Position ab = b - a;
  const Position ap = p - a;
  const double len2 = ab.x * ab.x + ab.y * ab.y + ab.z * ab.z;
  if (len2 == 0.0) return norm(ap);
  const double t = std::clamp((ap.x * ab.x + ap.y * ab.y + ap.z * ab.z) / len2, 0.0, 1.0);
  const Position closest{a.x + t * ab.x, a.y + t * ab.y, a.z + t * ab.z};
  return distance(p, closest);
}

MaterialTable MaterialTable::defaults() {
  return {{"concrete", "brick", "metal", "wood"}, {0.5, 0.45, 0.9, 0.35}};
}

ArrayGeometry ArrayGeometry::half_wavelength(std::size_t mx, std::size_t mz, std::size_t num_rrh,
                                             double carrier_hz) {
  const double lambda = kSpeedOfLight / carrier_hz;
  return {mx, mz, num_rrh, lambda, lambda / 2.0};
}

Direction arrival_direction(const Position& from, const Position& at) {
  const Position v = from - at;
  const double r = norm(v);
  return {std::atan2(v.x, v.y), std::acos(std::clamp(v.z / r, -1.0, 1.0))};
}

}  // namespace wit::channel
