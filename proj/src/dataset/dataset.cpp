#include "wit/dataset/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>

#include "wit/errors.hpp"
#include "wit/numcore/kernels.hpp"
#include "wit/random.hpp"

namespace wit::data {

std::vector<std::uint64_t> Split::validation() const {
  return {holdout.begin(), holdout.begin() + static_cast<std::ptrdiff_t>(holdout.size() / 2)};
}

std::vector<std::uint64_t> Split::test() const {
  return {holdout.begin() + static_cast<std::ptrdiff_t>(holdout.size() / 2), holdout.end()};
}

SampleView Dataset::sample(std::size_t i) const {
  if (i >= size()) throw UsageError("sample index out of range");
  return {std::span<const float>(features).subspan(i * sample_stride(), sample_stride()),
          {labels[2 * i], labels[2 * i + 1]},
          meta[i]};
}

num::Tensor Dataset::feature_batch(std::span<const std::uint64_t> idx) const {
  const std::size_t stride = sample_stride();
  num::Tensor out({idx.size(), subcarriers, feature_width()});
  for (std::size_t b = 0; b < idx.size(); ++b) {
    if (idx[b] >= size()) throw UsageError("sample index out of range");
    const float* src = features.data() + idx[b] * stride;
    std::copy(src, src + stride, out.ptr() + b * stride);
  }
  return out;
}

num::Tensor Dataset::label_batch(std::span<const std::uint64_t> idx) const {
  num::Tensor out({idx.size(), 2});
  for (std::size_t b = 0; b < idx.size(); ++b) {
    if (idx[b] >= size()) throw UsageError("sample index out of range");
    out[2 * b] = labels[2 * idx[b]];
    out[2 * b + 1] = labels[2 * idx[b] + 1];
  }
  return out;
}

num::Tensor realify(const channel::ChannelMatrix& h) {
  const std::size_t nr = h.antennas;
  const std::size_t nc = h.cols();
  num::Tensor out({nc, 3 * nr});
  for (std::size_t n = 0; n < nc; ++n) {
    for (std::size_t a = 0; a < nr; ++a) {
      const auto v = h.at(a, n);
      out.at(n, a) = v.real();
      out.at(n, nr + a) = v.imag();
      out.at(n, 2 * nr + a) = std::abs(v);
    }
  }
  return out;
}

std::array<double, 2> scale_labels(const channel::Position& u, const LabelBounds& b) {
  if (!(b.xmin < b.xmax) || !(b.ymin < b.ymax)) throw ConfigError("label bounds must satisfy min < max");
  std::array<double, 2> s{(u.x - b.xmin) / (b.xmax - b.xmin), (u.y - b.ymin) / (b.ymax - b.ymin)};
  for (double& v : s) {
    if (v < 0.0 || v > 1.0) {
      std::cerr << "warning: label outside the region of interest, clamped\n";
      v = std::clamp(v, 0.0, 1.0);
    }
  }
  return s;
}

channel::Position unscale_labels(const std::array<double, 2>& s, const LabelBounds& b) {
  return {b.xmin + s[0] * (b.xmax - b.xmin), b.ymin + s[1] * (b.ymax - b.ymin), 0.0};
}

Dataset normalize(Dataset ds, NormMode mode) {
  const std::size_t nr = ds.antennas;
  const std::size_t width = ds.feature_width();
  std::vector<std::uint64_t> pick;
  if (mode == NormMode::kTrainOnly) {
    if (ds.split.train.empty()) throw NormalizationError("train-only normalization needs a split");
    pick = ds.split.train;
  } else {
    pick.resize(ds.size());
    std::iota(pick.begin(), pick.end(), 0);
  }

  std::array<double, 3> peak{0.0, 0.0, 0.0};
  for (std::uint64_t i : pick) {
    const float* f = ds.features.data() + i * ds.sample_stride();
    for (std::size_t n = 0; n < ds.subcarriers; ++n) {
      for (std::size_t c = 0; c < width; ++c) {
        const double v = std::abs(static_cast<double>(f[n * width + c]));
        double& p = peak[c / nr];
        if (v > p) p = v;
      }
    }
  }
  for (double p : peak) {
    if (!(p > 0.0)) throw NormalizationError("a feature part is identically zero");
  }
  for (std::size_t i = 0; i < ds.size(); ++i) {
    float* f = ds.features.data() + i * ds.sample_stride();
    for (std::size_t n = 0; n < ds.subcarriers; ++n) {
      for (std::size_t c = 0; c < width; ++c) {
        float& v = f[n * width + c];
        v = static_cast<float>(static_cast<double>(v) / peak[c / nr]);
      }
    }
  }
  ds.scale.re *= peak[0];
  ds.scale.im *= peak[1];
  ds.scale.abs *= peak[2];
  ds.normalized = true;
  return ds;
}

Split split_indices(std::size_t n, double ratio, std::uint64_t seed) {
  if (n < 4) throw UsageError("split needs at least four samples");
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split ratio must lie in (0, 1)");
  std::vector<std::uint64_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Rng rng = substream(seed, Stream::kSplit);
  std::shuffle(perm.begin(), perm.end(), rng);
  const auto n_train = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(n)));
  Split s;
  s.train.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(n_train));
  s.holdout.assign(perm.begin() + static_cast<std::ptrdiff_t>(n_train), perm.end());
  return s;
}

namespace {

struct Slot {
  bool keep = false;
  double power_dbm = 0.0;
};

// One (r, t) sample: paths, power, realified features into `out`.
Slot synthesize(const ScenarioConfig& cfg, const channel::Scene& snap, const channel::ArrayGeometry& geom,
                std::uint64_t seed, std::size_t r, std::size_t t, float* out) {
  Rng rng = substream(seed, Stream::kSample, {r, t});
  const auto paths = channel::derive_paths(snap.transmitters[r], snap, snap.rain, cfg.propagation, rng);
  Slot slot;
  slot.power_dbm = channel::received_power_dbm(paths.paths, cfg.tx_power_dbm);
  if (paths.paths.empty() || !(slot.power_dbm >= cfg.power_threshold_dbm)) return slot;
  const auto h = channel::channel_matrix(paths.paths, geom, cfg.grid);
  const auto feat = realify(h);
  for (std::size_t i = 0; i < feat.size(); ++i) out[i] = static_cast<float>(feat[i]);
  slot.keep = true;
  return slot;
}

}  // namespace

Dataset generate(const ScenarioConfig& cfg, std::uint64_t seed, Exec exec) {
  const auto& layout = cfg.layout;
  if (layout.num_tx == 0 || cfg.snapshots == 0) throw ConfigError("need at least one transmitter and snapshot");
  if (layout.num_rrh == 0) throw ConfigError("need at least one RRH");
  if (cfg.propagation.materials.size() == 0) throw ConfigError("material set is empty");
  if (cfg.grid.stride == 0 || cfg.grid.num_subcarriers == 0) throw ConfigError("bad subcarrier grid");

  const channel::Scene base = channel::make_scene(layout, seed);
  const auto geom = cfg.geometry();
  const std::size_t n_mat = cfg.propagation.materials.size();
  std::vector<channel::Scene> snaps;
  snaps.reserve(cfg.snapshots);
  for (std::size_t t = 0; t < cfg.snapshots; ++t) {
    snaps.push_back(channel::snapshot_scene(base, cfg.noise, n_mat, seed, t));
  }

  Dataset ds;
  ds.num_tx = layout.num_tx;
  ds.snapshots = cfg.snapshots;
  ds.num_rrh = layout.num_rrh;
  ds.antennas = cfg.antennas();
  ds.subcarriers = cfg.active_subcarriers();
  ds.bounds = LabelBounds::from_region(layout.roi);

  const std::size_t total = layout.num_tx * cfg.snapshots;
  const std::size_t stride = ds.sample_stride();
  std::vector<float> buffer(total * stride);
  std::vector<Slot> slots(total);

  // Sample index is r * T + t; each slot owns its substream and buffer range.
  if (exec == Exec::kParallel) {
#pragma omp parallel for schedule(dynamic, 16) num_threads(num::kernels::max_threads())
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(total); ++i) {
      const auto r = static_cast<std::size_t>(i) / cfg.snapshots;
      const auto t = static_cast<std::size_t>(i) % cfg.snapshots;
      slots[i] = synthesize(cfg, snaps[t], geom, seed, r, t, buffer.data() + i * stride);
    }
  } else {
    for (std::size_t i = 0; i < total; ++i) {
      const std::size_t r = i / cfg.snapshots;
      const std::size_t t = i % cfg.snapshots;
      slots[i] = synthesize(cfg, snaps[t], geom, seed, r, t, buffer.data() + i * stride);
    }
  }

  for (std::size_t i = 0; i < total; ++i) {
    if (!slots[i].keep) {
      ++ds.discarded;
      continue;
    }
    const std::size_t r = i / cfg.snapshots;
    const std::size_t t = i % cfg.snapshots;
    ds.features.insert(ds.features.end(), buffer.begin() + static_cast<std::ptrdiff_t>(i * stride),
                       buffer.begin() + static_cast<std::ptrdiff_t>((i + 1) * stride));
    const auto s = scale_labels(base.transmitters[r], ds.bounds);
    ds.labels.push_back(s[0]);
    ds.labels.push_back(s[1]);
    ds.meta.push_back({r, t, slots[i].power_dbm});
  }
  if (ds.size() == 0) {
    throw GenerationError("every sample fell below the received-power threshold of " +
                          std::to_string(cfg.power_threshold_dbm) + " dBm");
  }
  return ds;
}

Dataset build_dataset(const ScenarioConfig& cfg, std::uint64_t seed, Exec exec) {
  Dataset ds = generate(cfg, seed, exec);
  ds.split = split_indices(ds.size(), cfg.split_ratio, seed);
  return normalize(std::move(ds), cfg.norm_mode);
}

}  // namespace wit::data
