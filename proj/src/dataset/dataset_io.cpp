#include <fstream>

#include "wit/dataset/dataset.hpp"
#include "wit/errors.hpp"
#include "wit/io/binary.hpp"

namespace wit::data {
namespace {

constexpr std::size_t kMagicBytes = sizeof(kDatasetMagic) - 1;
constexpr std::size_t kHeaderU64 = 11;  // version + 10 counts
constexpr std::size_t kHeaderF64 = 7;   // 3 scales + 4 bounds
constexpr std::size_t kMetaBytes = 8 + 8 + 8;

}  // namespace

std::size_t dataset_header_bytes() { return kMagicBytes + 8 * kHeaderU64 + 8 * kHeaderF64; }

std::size_t dataset_record_bytes(const Dataset& ds) { return ds.sample_stride() * 4 + 2 * 8 + kMetaBytes; }

void save(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  io::write_magic(os, {kDatasetMagic, kMagicBytes});
  io::write_le<std::uint64_t>(os, kDatasetVersion);
  io::write_le<std::uint64_t>(os, ds.num_tx);
  io::write_le<std::uint64_t>(os, ds.snapshots);
  io::write_le<std::uint64_t>(os, ds.num_rrh);
  io::write_le<std::uint64_t>(os, ds.antennas);
  io::write_le<std::uint64_t>(os, ds.subcarriers);
  io::write_le<std::uint64_t>(os, ds.size());
  io::write_le<std::uint64_t>(os, ds.discarded);
  io::write_le<std::uint64_t>(os, ds.normalized ? 1 : 0);
  io::write_le<std::uint64_t>(os, ds.split.train.size());
  io::write_le<std::uint64_t>(os, ds.split.holdout.size());
  io::write_le(os, ds.scale.re);
  io::write_le(os, ds.scale.im);
  io::write_le(os, ds.scale.abs);
  io::write_le(os, ds.bounds.xmin);
  io::write_le(os, ds.bounds.xmax);
  io::write_le(os, ds.bounds.ymin);
  io::write_le(os, ds.bounds.ymax);

  const std::size_t stride = ds.sample_stride();
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const float* f = ds.features.data() + i * stride;
    for (std::size_t j = 0; j < stride; ++j) io::write_le(os, f[j]);
    io::write_le(os, ds.labels[2 * i]);
    io::write_le(os, ds.labels[2 * i + 1]);
    io::write_le<std::uint64_t>(os, ds.meta[i].tx);
    io::write_le<std::uint64_t>(os, ds.meta[i].snapshot);
    io::write_le(os, ds.meta[i].power_dbm);
  }
  for (auto i : ds.split.train) io::write_le<std::uint64_t>(os, i);
  for (auto i : ds.split.holdout) io::write_le<std::uint64_t>(os, i);
  if (!os.flush()) throw IoError("write failed for " + path.string());
}

Dataset load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  io::expect_magic(is, {kDatasetMagic, kMagicBytes});
  const auto version = io::read_le<std::uint64_t>(is);
  if (version != kDatasetVersion) throw FormatError("unsupported dataset version " + std::to_string(version));

  Dataset ds;
  ds.num_tx = io::read_le<std::uint64_t>(is);
  ds.snapshots = io::read_le<std::uint64_t>(is);
  ds.num_rrh = io::read_le<std::uint64_t>(is);
  ds.antennas = io::read_le<std::uint64_t>(is);
  ds.subcarriers = io::read_le<std::uint64_t>(is);
  const auto n = io::read_le<std::uint64_t>(is);
  ds.discarded = io::read_le<std::uint64_t>(is);
  ds.normalized = io::read_le<std::uint64_t>(is) != 0;
  const auto n_train = io::read_le<std::uint64_t>(is);
  const auto n_holdout = io::read_le<std::uint64_t>(is);
  ds.scale.re = io::read_le<double>(is);
  ds.scale.im = io::read_le<double>(is);
  ds.scale.abs = io::read_le<double>(is);
  ds.bounds.xmin = io::read_le<double>(is);
  ds.bounds.xmax = io::read_le<double>(is);
  ds.bounds.ymin = io::read_le<double>(is);
  ds.bounds.ymax = io::read_le<double>(is);

  // Reject headers whose counts disagree with the file length before
  // allocating anything.
  const auto here = static_cast<std::uintmax_t>(is.tellg());
  const std::uintmax_t file_size = std::filesystem::file_size(path);
  const std::uintmax_t need = static_cast<std::uintmax_t>(n) * dataset_record_bytes(ds) + 8 * (n_train + n_holdout);
  if (file_size < here || file_size - here < need) throw IoError("dataset file is truncated");
  if (n_train + n_holdout != 0 && n_train + n_holdout != n) throw FormatError("split does not cover the samples");

  const std::size_t stride = ds.sample_stride();
  ds.features.resize(n * stride);
  ds.labels.resize(2 * n);
  ds.meta.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    float* f = ds.features.data() + i * stride;
    for (std::size_t j = 0; j < stride; ++j) f[j] = io::read_le<float>(is);
    ds.labels[2 * i] = io::read_le<double>(is);
    ds.labels[2 * i + 1] = io::read_le<double>(is);
    ds.meta[i].tx = io::read_le<std::uint64_t>(is);
    ds.meta[i].snapshot = io::read_le<std::uint64_t>(is);
    ds.meta[i].power_dbm = io::read_le<double>(is);
  }
  ds.split.train.resize(n_train);
  ds.split.holdout.resize(n_holdout);
  for (auto& i : ds.split.train) i = io::read_le<std::uint64_t>(is);
  for (auto& i : ds.split.holdout) i = io::read_le<std::uint64_t>(is);
  for (auto i : ds.split.train) {
    if (i >= n) throw FormatError("split index out of range");
  }
  for (auto i : ds.split.holdout) {
    if (i >= n) throw FormatError("split index out of range");
  }
  return ds;
}

}  // namespace wit::data
