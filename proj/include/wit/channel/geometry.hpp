#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace wit::channel {

inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;

struct Position {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;

  friend bool operator==(const Position&, const Position&) = default;
};

inline Position operator-(const Position& a, const Position& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline double norm(const Position& v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }
inline double distance(const Position& a, const Position& b) { return norm(a - b); }

/// Shortest distance from p to the segment [a, b].
double segment_distance(const Position& p, const Position& a, const Position& b);

/// Material set K with a linear amplitude factor in (0, 1] per entry.
struct MaterialTable {
  std::vector<std::string> names;
  std::vector<double> amplitude;

  std::size_t size() const { return names.size(); }
  static MaterialTable defaults();  // concrete, brick, metal, wood
};

struct Scatterer {
  Position position;
  std::size_t material = 0;

  friend bool operator==(const Scatterer&, const Scatterer&) = default;
};

/// Geometric ground truth of one time snapshot.
struct Scene {
  std::vector<Position> transmitters;
  std::vector<Position> rrhs;
  std::vector<Scatterer> scatterers;
  std::vector<std::size_t> movable;  // indices into scatterers
  bool rain = false;

  friend bool operator==(const Scene&, const Scene&) = default;
};

/// Planar array of each RRH, laid out in the x-z plane. Antenna index is
/// iz * mx + ix, matching a = a_z kron a_x.
struct ArrayGeometry {
  std::size_t mx = 1;
  std::size_t mz = 1;
  std::size_t num_rrh = 1;
  double wavelength = 0.0;
  double spacing = 0.0;

  std::size_t per_rrh() const { return mx * mz; }
  std::size_t total_antennas() const { return mx * mz * num_rrh; }

  /// Half-wavelength spacing at the given carrier.
  static ArrayGeometry half_wavelength(std::size_t mx, std::size_t mz, std::size_t num_rrh,
                                       double carrier_hz);
};

/// Arrival direction at `at` of a wave coming from `from`, in the array frame:
/// elevation is measured from +z and azimuth from +y towards +x, so that
/// sin(el) sin(az) is the x direction cosine.
struct Direction {
  double azimuth = 0.0;
  double elevation = 0.0;
};
Direction arrival_direction(const Position& from, const Position& at);

}  // namespace wit::channel
