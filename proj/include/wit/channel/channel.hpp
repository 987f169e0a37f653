#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "wit/channel/geometry.hpp"
#include "wit/channel/paths.hpp"

namespace wit::channel {

using Complex = std::complex<double>;

/// a_z(el) kron a_x(az, el) for one RRH array.
std::vector<Complex> steering_vector(double azimuth, double elevation, const ArrayGeometry& geom);

/// Subcarrier grid: spacing B / N_c and every `stride`-th subcarrier active.
struct OfdmGrid {
  double bandwidth_hz = 20e6;
  std::size_t num_subcarriers = 512;
  std::size_t stride = 16;

  double spacing_hz() const { return bandwidth_hz / static_cast<double>(num_subcarriers); }
  std::vector<std::size_t> active() const;
};

/// Complex N_r x N_c' frequency response, row-major.
struct ChannelMatrix {
  std::size_t antennas = 0;
  std::vector<std::size_t> subcarriers;
  double spacing_hz = 0.0;
  std::vector<Complex> entries;

  std::size_t cols() const { return subcarriers.size(); }
  Complex& at(std::size_t row, std::size_t col) { return entries[row * cols() + col]; }
  const Complex& at(std::size_t row, std::size_t col) const { return entries[row * cols() + col]; }
};

/// Sums every path's contribution into the rows of its RRH; RRH blocks are
/// stacked in RRH order.
ChannelMatrix channel_matrix(const std::vector<Path>& paths, const ArrayGeometry& geom, const OfdmGrid& grid);

}  // namespace wit::channel
