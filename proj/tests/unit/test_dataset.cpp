#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <set>

#include <unistd.h>

#include "doctest.h"
#include "wit/dataset/dataset.hpp"
#include "wit/errors.hpp"

using namespace wit;
using namespace wit::data;

namespace {

ScenarioConfig small_config() {
  ScenarioConfig c;
  c.layout.roi = {0, 40, 0, 40};
  c.layout.bs_x = 20;
  c.layout.bs_y = -10;
  c.layout.num_tx = 12;
  c.layout.num_scatterers = 8;
  c.layout.num_movable = 4;
  c.array_mx = 2;
  c.array_mz = 2;
  c.grid = {20e6, 512, 64};
  c.snapshots = 3;
  c.noise = {0.5, 0.05, 0.3};
  c.power_threshold_dbm = -std::numeric_limits<double>::infinity();
  return c;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("wit_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST_CASE("realify") {
  channel::ChannelMatrix h;
  h.antennas = 1;
  h.subcarriers = {0};
  h.entries = {channel::Complex(3, 4)};
  CHECK(realify(h) == num::Tensor::matrix({{3, 4, 5}}));

  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  h.antennas = 5;
  h.subcarriers = {0, 16, 32};
  h.entries.clear();
  for (int i = 0; i < 15; ++i) h.entries.emplace_back(n(rng), n(rng));
  const auto f = realify(h);
  REQUIRE(f.shape() == num::Shape{3, 15});
  for (std::size_t c = 0; c < 3; ++c) {
    for (std::size_t r = 0; r < 5; ++r) {
      const auto z = h.at(r, c);
      CHECK(channel::Complex(f.at(c, r), f.at(c, 5 + r)) == z);
      CHECK(std::abs(f.at(c, 10 + r) - std::sqrt(z.real() * z.real() + z.imag() * z.imag())) < 1e-12);
    }
  }

  for (auto& z : h.entries) z = z.real();
  const auto g = realify(h);
  for (std::size_t c = 0; c < 3; ++c)
    for (std::size_t r = 0; r < 5; ++r) {
      CHECK(g.at(c, 5 + r) == 0.0);
      CHECK(g.at(c, 10 + r) == std::abs(g.at(c, r)));
    }
}

TEST_CASE("label scaling") {
  const LabelBounds b{0, 100, 0, 100};
  const auto s = scale_labels({50, 25, 1.5}, b);
  CHECK(s[0] == 0.5);
  CHECK(s[1] == 0.25);
  CHECK(scale_labels({0, 0, 0}, b) == std::array<double, 2>{0, 0});
  CHECK(scale_labels({120, -3, 0}, b) == std::array<double, 2>{1, 0});

  const LabelBounds odd{-13.5, 71.25, 4.0, 9.0};
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ux(-13.5, 71.25), uy(4.0, 9.0);
  for (int i = 0; i < 10000; ++i) {
    const channel::Position u{ux(rng), uy(rng), 0};
    const auto back = unscale_labels(scale_labels(u, odd), odd);
    CHECK(std::abs(back.x - u.x) < 1e-12);
    CHECK(std::abs(back.y - u.y) < 1e-12);
  }
  CHECK_THROWS_AS(scale_labels({0, 0, 0}, LabelBounds{1, 1, 0, 1}), ConfigError);
}

TEST_CASE("split") {
  const Split s = split_indices(100, 0.75, 4);
  CHECK(s.train.size() == 75);
  CHECK(s.holdout.size() == 25);
  CHECK(s == split_indices(100, 0.75, 4));
  CHECK(!(s == split_indices(100, 0.75, 5)));
  std::set<std::uint64_t> all(s.train.begin(), s.train.end());
  all.insert(s.holdout.begin(), s.holdout.end());
  CHECK(all.size() == 100);
  CHECK(*all.rbegin() == 99);
  CHECK(s.validation().size() == 12);
  CHECK(s.test().size() == 13);
  CHECK_THROWS_AS(split_indices(3, 0.75, 1), UsageError);

  for (std::size_t n = 4; n < 60; ++n) {
    const auto t = split_indices(n, 0.75, n);
    CHECK(std::abs(static_cast<double>(t.train.size()) - 0.75 * static_cast<double>(n)) <= 1.0);
  }
}

TEST_CASE("generation counts and subcarriers") {
  auto c = small_config();
  c.layout.num_tx = 2;
  const Dataset ds = generate(c, 1);
  CHECK(ds.size() == 6);
  CHECK(ds.discarded == 0);
  CHECK(ds.subcarriers == 8);
  CHECK(ds.antennas == 4);
  CHECK(ds.features.size() == 6 * 8 * 12);

  c.grid = {20e6, 512, 16};
  CHECK(c.active_subcarriers() == 32);
  CHECK(generate(c, 1).subcarriers == 32);

  c.power_threshold_dbm = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(generate(c, 1), GenerationError);
}

TEST_CASE("discard rule is monotone in the threshold") {
  auto c = small_config();
  c.layout.num_tx = 30;
  c.tx_power_dbm = 0.0;
  c.propagation.blockage_radius_m = 3.0;
  c.propagation.blockage_loss_db = 40.0;
  std::vector<double> powers;
  for (const auto& m : generate(c, 7).meta) powers.push_back(m.power_dbm);
  std::sort(powers.begin(), powers.end());
  std::size_t last = 0;
  for (double threshold : {powers.back() + 1.0, powers[60], powers[30], powers[0], -1e9}) {
    c.power_threshold_dbm = threshold;
    std::size_t n = 0;
    try {
      n = generate(c, 7).size();
    } catch (const GenerationError&) {
      n = 0;
    }
    CHECK(n >= last);
    last = n;
  }
  CHECK(last == 90);
}

TEST_CASE("generation is deterministic and matches serial execution") {
  const auto c = small_config();
  const Dataset a = generate(c, 11, Exec::kParallel);
  const Dataset b = generate(c, 11, Exec::kSerial);
  CHECK(a == b);
  CHECK(std::memcmp(a.features.data(), b.features.data(), a.features.size() * sizeof(float)) == 0);
  CHECK(!(generate(c, 12) == a));
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (double l : a.sample(i).label) {
      CHECK(l >= 0.0);
      CHECK(l <= 1.0);
    }
  }
}

TEST_CASE("normalization") {
  const auto c = small_config();
  const Dataset raw = generate(c, 3);
  const std::size_t nr = raw.antennas;
  std::array<double, 3> peak{0, 0, 0};
  std::array<std::size_t, 3> arg{0, 0, 0};
  for (std::size_t i = 0; i < raw.features.size(); ++i) {
    const std::size_t part = (i % raw.feature_width()) / nr;
    const double v = std::abs(static_cast<double>(raw.features[i]));
    if (v > peak[part]) {
      peak[part] = v;
      arg[part] = i;
    }
  }
  const Dataset n1 = normalize(raw);
  CHECK(n1.normalized);
  CHECK(n1.scale.re == peak[0]);
  CHECK(n1.scale.im == peak[1]);
  CHECK(n1.scale.abs == peak[2]);
  std::array<double, 3> after{0, 0, 0};
  for (std::size_t i = 0; i < n1.features.size(); ++i) {
    const std::size_t part = (i % n1.feature_width()) / nr;
    after[part] = std::max(after[part], std::abs(static_cast<double>(n1.features[i])));
  }
  for (std::size_t p = 0; p < 3; ++p) {
    CHECK(after[p] == 1.0);
    CHECK(std::abs(n1.features[arg[p]]) == 1.0f);
  }

  const Dataset n2 = normalize(n1);
  CHECK(n2.features == n1.features);
  CHECK(n2.scale == n1.scale);

  Dataset zero = raw;
  for (std::size_t i = 0; i < zero.features.size(); ++i)
    if ((i % zero.feature_width()) / nr == 1) zero.features[i] = 0.0f;
  CHECK_THROWS_AS(normalize(zero), NormalizationError);

  Dataset with_split = raw;
  with_split.split = split_indices(raw.size(), 0.75, 1);
  const Dataset train_only = normalize(with_split, NormMode::kTrainOnly);
  CHECK(train_only.scale.re <= n1.scale.re);
  CHECK_THROWS_AS(normalize(raw, NormMode::kTrainOnly), NormalizationError);
}

TEST_CASE("save and load") {
  const Dataset ds = build_dataset(small_config(), 5);
  const auto path = temp_file("ds.bin");
  save(ds, path);
  const Dataset back = load(path);
  CHECK(back == ds);
  CHECK(std::memcmp(back.features.data(), ds.features.data(), ds.features.size() * sizeof(float)) == 0);
  CHECK(std::memcmp(back.labels.data(), ds.labels.data(), ds.labels.size() * sizeof(double)) == 0);

  // 150 header bytes, then per sample f32 features, two f64 labels and
  // (u64 r, u64 t, f64 power), then the split indices.
  CHECK(dataset_header_bytes() == 6 + 11 * 8 + 7 * 8);
  CHECK(dataset_record_bytes(ds) == ds.subcarriers * 3 * ds.antennas * 4 + 2 * 8 + 3 * 8);
  CHECK(std::filesystem::file_size(path) ==
        dataset_header_bytes() + ds.size() * dataset_record_bytes(ds) + ds.size() * 8);

  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.seekp(0);
    f.put('X');
  }
  CHECK_THROWS_AS(load(path), FormatError);

  save(ds, path);
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 9);
  CHECK_THROWS_AS(load(path), IoError);

  std::filesystem::remove(path);
  CHECK_THROWS_AS(load(path), IoError);
}

TEST_CASE("batches follow the index order") {
  const Dataset ds = build_dataset(small_config(), 6);
  const std::vector<std::uint64_t> idx = {4, 1};
  const auto f = ds.feature_batch(idx);
  const auto l = ds.label_batch(idx);
  REQUIRE(f.shape() == num::Shape{2, ds.subcarriers, ds.feature_width()});
  CHECK(f[0] == static_cast<double>(ds.sample(4).features[0]));
  CHECK(f[ds.sample_stride()] == static_cast<double>(ds.sample(1).features[0]));
  CHECK(l.at(1, 1) == ds.sample(1).label[1]);
}
