#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "wit/channel/channel.hpp"
#include "wit/dataset/scenario.hpp"
#include "wit/numcore/tensor.hpp"

namespace wit::data {

struct SampleMeta {
  std::uint64_t tx = 0;        // r
  std::uint64_t snapshot = 0;  // t
  double power_dbm = 0.0;

  friend bool operator==(const SampleMeta&, const SampleMeta&) = default;
};

/// Max-abs scale of the Re, Im and Abs parts. Features are raw / scale.
struct Normalization {
  double re = 1.0;
  double im = 1.0;
  double abs = 1.0;

  friend bool operator==(const Normalization&, const Normalization&) = default;
};

struct LabelBounds {
  double xmin = 0.0, xmax = 1.0;
  double ymin = 0.0, ymax = 1.0;

  static LabelBounds from_region(const channel::Region& r) { return {r.xmin, r.xmax, r.ymin, r.ymax}; }
  friend bool operator==(const LabelBounds&, const LabelBounds&) = default;
};

/// Train indices and the holdout. The first half of the holdout validates,
/// the second half tests.
struct Split {
  std::vector<std::uint64_t> train;
  std::vector<std::uint64_t> holdout;

  std::vector<std::uint64_t> validation() const;
  std::vector<std::uint64_t> test() const;
  friend bool operator==(const Split&, const Split&) = default;
};

struct SampleView {
  std::span<const float> features;  // N_c' x 3N_r, row-major
  std::array<double, 2> label;      // scaled to [0, 1]
  SampleMeta meta;
};

struct Dataset {
  std::uint64_t num_tx = 0;     // R
  std::uint64_t snapshots = 0;  // T
  std::uint64_t num_rrh = 1;    // M
  std::uint64_t antennas = 0;   // N_r
  std::uint64_t subcarriers = 0;  // N_c'
  std::uint64_t discarded = 0;
  bool normalized = false;
  Normalization scale;
  LabelBounds bounds;
  Split split;
  std::vector<float> features;
  std::vector<double> labels;
  std::vector<SampleMeta> meta;

  std::size_t size() const { return meta.size(); }
  std::size_t feature_width() const { return 3 * antennas; }
  std::size_t sample_stride() const { return subcarriers * feature_width(); }
  SampleView sample(std::size_t i) const;

  /// Rows of the given samples as a [n, N_c', 3N_r] tensor, and their labels
  /// as [n, 2].
  num::Tensor feature_batch(std::span<const std::uint64_t> idx) const;
  num::Tensor label_batch(std::span<const std::uint64_t> idx) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Row n is [Re(h_n) | Im(h_n) | |h_n|] for column n of the channel.
num::Tensor realify(const channel::ChannelMatrix& h);

std::array<double, 2> scale_labels(const channel::Position& u, const LabelBounds& bounds);
channel::Position unscale_labels(const std::array<double, 2>& s, const LabelBounds& bounds);

/// Divides each part by its max-abs over the selected samples. Stored scales
/// accumulate, so a second call leaves the features unchanged.
Dataset normalize(Dataset ds, NormMode mode = NormMode::kAll);

Split split_indices(std::size_t n, double ratio, std::uint64_t seed);

enum class Exec { kSerial, kParallel };

/// Raw (unnormalized, unsplit) samples for every (r, t) whose received power
/// reaches the threshold.
Dataset generate(const ScenarioConfig& cfg, std::uint64_t seed, Exec exec = Exec::kParallel);

/// generate, then split, then normalize.
Dataset build_dataset(const ScenarioConfig& cfg, std::uint64_t seed, Exec exec = Exec::kParallel);

inline constexpr char kDatasetMagic[] = "WITDS1";
inline constexpr std::uint64_t kDatasetVersion = 1;
std::size_t dataset_header_bytes();
std::size_t dataset_record_bytes(const Dataset& ds);

void save(const Dataset& ds, const std::filesystem::path& path);
Dataset load(const std::filesystem::path& path);

}  // namespace wit::data
