#include "wit/model/checkpoint.hpp"

#include <fstream>

#include "wit/errors.hpp"
#include "wit/io/binary.hpp"

namespace wit::model {
namespace {

constexpr std::size_t kMagicBytes = sizeof(kCheckpointMagic) - 1;

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  const ModelConfig& c = ckpt.config;
  io::write_magic(os, {kCheckpointMagic, kMagicBytes});
  io::write_le<std::uint64_t>(os, kCheckpointVersion);
  io::write_le<std::uint64_t>(os, static_cast<std::uint64_t>(c.kind));
  io::write_le<std::uint64_t>(os, static_cast<std::uint64_t>(c.pooling));
  io::write_le<std::uint64_t>(os, c.subcarriers);
  io::write_le<std::uint64_t>(os, c.feature_width);
  io::write_le<std::uint64_t>(os, c.dim);
  io::write_le<std::uint64_t>(os, c.outputs);
  io::write_le<std::uint64_t>(os, c.blocks);
  io::write_le<std::uint64_t>(os, c.ln_learned ? 1 : 0);
  io::write_le<std::uint64_t>(os, c.residual ? 1 : 0);
  io::write_le(os, c.dropout);
  io::write_le(os, c.base_dropout);
  io::write_le(os, c.ln_gamma);
  io::write_le(os, c.ln_beta);
  io::write_le<std::uint64_t>(os, ckpt.best_epoch);
  io::write_le(os, ckpt.best_val_mae_m);
  io::write_le<std::uint64_t>(os, ckpt.params.size());
  for (std::size_t i = 0; i < ckpt.params.size(); ++i) {
    const auto& t = ckpt.params.value(i);
    io::write_string(os, ckpt.params.name(i));
    io::write_le<std::uint64_t>(os, t.rank());
    for (auto d : t.shape()) io::write_le<std::uint64_t>(os, d);
    for (double v : t.data()) io::write_le(os, v);
  }
  if (!os.flush()) throw IoError("write failed for " + path.string());
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  io::expect_magic(is, {kCheckpointMagic, kMagicBytes});
  const auto version = io::read_le<std::uint64_t>(is);
  if (version != kCheckpointVersion) throw FormatError("unsupported checkpoint version " + std::to_string(version));
  Checkpoint ckpt;
  ModelConfig& c = ckpt.config;
  const auto kind = io::read_le<std::uint64_t>(is);
  const auto pooling = io::read_le<std::uint64_t>(is);
  if (kind > 1 || pooling > 1) throw FormatError("unknown model kind or pooling in checkpoint");
  c.kind = static_cast<ModelKind>(kind);
  c.pooling = static_cast<Pooling>(pooling);
  c.subcarriers = io::read_le<std::uint64_t>(is);
  c.feature_width = io::read_le<std::uint64_t>(is);
  c.dim = io::read_le<std::uint64_t>(is);
  c.outputs = io::read_le<std::uint64_t>(is);
  c.blocks = io::read_le<std::uint64_t>(is);
  c.ln_learned = io::read_le<std::uint64_t>(is) != 0;
  c.residual = io::read_le<std::uint64_t>(is) != 0;
  c.dropout = io::read_le<double>(is);
  c.base_dropout = io::read_le<double>(is);
  c.ln_gamma = io::read_le<double>(is);
  c.ln_beta = io::read_le<double>(is);
  ckpt.best_epoch = io::read_le<std::uint64_t>(is);
  ckpt.best_val_mae_m = io::read_le<double>(is);
  const auto count = io::read_le<std::uint64_t>(is);
  if (count > 10000) throw FormatError("implausible parameter count");
  for (std::uint64_t i = 0; i < count; ++i) {
    std::string name = io::read_string(is);
    const auto rank = io::read_le<std::uint64_t>(is);
    if (rank > 8) throw FormatError("implausible tensor rank");
    num::Shape shape(rank);
    for (auto& d : shape) d = io::read_le<std::uint64_t>(is);
    const std::size_t n = num::shape_size(shape);
    if (n > (std::size_t{1} << 32)) throw FormatError("implausible tensor size");
    std::vector<double> data(n);
    for (double& v : data) v = io::read_le<double>(is);
    ckpt.params.add(std::move(name), num::Tensor(std::move(shape), std::move(data)));
  }
  return ckpt;
}

}  // namespace wit::model
