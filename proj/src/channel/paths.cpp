#include "wit/channel/paths.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

namespace wit::channel {
namespace {

double db_to_amplitude(double db) { return std::pow(10.0, -db / 20.0); }

}  // namespace

PathSet derive_paths(const Position& u, const Scene& scene, bool rain, const PropagationConfig& cfg,
                     Rng& rng) {
  const double lambda = cfg.wavelength();
  const double four_pi = 4.0 * kPi;
  const double nlos_loss = db_to_amplitude(cfg.nlos_extra_loss_db);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);

  PathSet out;
  std::vector<Path> candidates;
  for (std::size_t m = 0; m < scene.rrhs.size(); ++m) {
    const Position& b = scene.rrhs[m];
    candidates.clear();

    const double d_los = distance(u, b);
    if (d_los > 0.0) {
      double amp = lambda / (four_pi * d_los);
      if (rain) amp *= db_to_amplitude(cfg.rain_attenuation_db);
      if (cfg.blockage_radius_m > 0.0) {
        const bool blocked = std::any_of(scene.scatterers.begin(), scene.scatterers.end(), [&](const Scatterer& s) {
          return segment_distance(s.position, u, b) < cfg.blockage_radius_m;
        });
        if (blocked) amp *= db_to_amplitude(cfg.blockage_loss_db);
      }
      const Direction dir = arrival_direction(u, b);
      candidates.push_back({Complex(amp, 0.0), d_los / kSpeedOfLight, dir.azimuth, dir.elevation, m, 0});
    } else {
      ++out.skipped;
    }

    for (std::size_t s = 0; s < scene.scatterers.size(); ++s) {
      const Scatterer& sc = scene.scatterers[s];
      // The phase is drawn before any skip so the substream stays aligned.
      const double ph = phase(rng);
      const double d1 = distance(u, sc.position);
      const double d2 = distance(sc.position, b);
      if (d1 == 0.0 || d2 == 0.0) {
        ++out.skipped;
        continue;
      }
      const double total = d1 + d2;
      const double amp = cfg.materials.amplitude.at(sc.material) * lambda / (four_pi * total) * nlos_loss;
      const Direction dir = arrival_direction(sc.position, b);
      candidates.push_back({std::polar(amp, ph), total / kSpeedOfLight, dir.azimuth, dir.elevation, m, s + 1});
    }

    std::stable_sort(candidates.begin(), candidates.end(), [](const Path& a, const Path& b) {
      const double ga = std::abs(a.gain), gb = std::abs(b.gain);
      if (ga != gb) return ga > gb;
      if (a.delay != b.delay) return a.delay < b.delay;
      return a.source < b.source;
    });
    const std::size_t keep = std::min(cfg.max_paths, candidates.size());
    out.paths.insert(out.paths.end(), candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(keep));
  }
  if (out.skipped > 0) {
    std::cerr << "derive_paths: skipped " << out.skipped << " degenerate path(s)\n";
  }
  return out;
}

namespace {

std::vector<double> power_weights(const std::vector<Path>& paths) {
  std::vector<double> w(paths.size());
  double total = 0.0;
  for (std::size_t i = 0; i < paths.size(); ++i) {
    w[i] = std::norm(paths[i].gain);
    total += w[i];
  }
  for (double& v : w) v = total > 0.0 ? v / total : 1.0 / static_cast<double>(paths.size());
  return w;
}

double weighted_spread(const std::vector<double>& w, const std::vector<double>& x) {
  double mean = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) mean += w[i] * x[i];
  double var = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) var += w[i] * (x[i] - mean) * (x[i] - mean);
  return std::sqrt(var);
}

}  // namespace

double rms_delay_spread(const std::vector<Path>& paths) {
  if (paths.empty()) return 0.0;
  const auto w = power_weights(paths);
  std::size_t strongest = 0;
  for (std::size_t i = 1; i < paths.size(); ++i) {
    if (w[i] > w[strongest]) strongest = i;
  }
  std::vector<double> x(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) x[i] = paths[i].delay - paths[strongest].delay;
  return weighted_spread(w, x);
}

double rms_azimuth_spread(const std::vector<Path>& paths) {
  if (paths.empty()) return 0.0;
  const auto w = power_weights(paths);
  std::vector<double> x(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) x[i] = paths[i].azimuth;
  return weighted_spread(w, x);
}

double received_power_dbm(const std::vector<Path>& paths, double tx_power_dbm) {
  double p = 0.0;
  for (const auto& path : paths) p += std::norm(path.gain);
  if (p <= 0.0) return -std::numeric_limits<double>::infinity();
  return tx_power_dbm + 10.0 * std::log10(p);
}

}  // namespace wit::channel
