#include "wit/channel/scene.hpp"

#include <cmath>

namespace wit::channel {
namespace {

std::vector<Position> boundary_rrhs(const Region& roi, std::size_t m, double height) {
  const double w = roi.xmax - roi.xmin;
  const double h = roi.ymax - roi.ymin;
  const double perimeter = 2.0 * (w + h);
  std::vector<Position> out;
  for (std::size_t i = 0; i < m; ++i) {
    double s = perimeter * static_cast<double>(i) / static_cast<double>(m);
    Position p{roi.xmin, roi.ymin, height};
    if (s < w) {
      p.x += s;
    } else if ((s -= w) < h) {
      p.x = roi.xmax;
      p.y += s;
    } else if ((s -= h) < w) {
      p.x = roi.xmax - s;
      p.y = roi.ymax;
    } else {
      s -= w;
      p.y = roi.ymax - s;
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace

Scene make_scene(const SceneLayout& layout, std::uint64_t seed) {
  Rng rng = substream(seed, Stream::kScene);
  const Region& roi = layout.roi;
  std::uniform_real_distribution<double> ux(roi.xmin, roi.xmax);
  std::uniform_real_distribution<double> uy(roi.ymin, roi.ymax);
  std::uniform_real_distribution<double> uz(0.0, layout.scatterer_max_height);

  Scene scene;
  if (layout.tx_layout == TxLayout::kGrid) {
    const auto nx = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(layout.num_tx))));
    const std::size_t ny = nx == 0 ? 0 : (layout.num_tx + nx - 1) / nx;
    for (std::size_t i = 0; i < layout.num_tx; ++i) {
      const double fx = (static_cast<double>(i % nx) + 0.5) / static_cast<double>(nx);
      const double fy = (static_cast<double>(i / nx) + 0.5) / static_cast<double>(ny);
      scene.transmitters.push_back(
          {roi.xmin + fx * (roi.xmax - roi.xmin), roi.ymin + fy * (roi.ymax - roi.ymin), layout.tx_height});
    }
  } else {
    for (std::size_t i = 0; i < layout.num_tx; ++i) {
      const double x = ux(rng);
      const double y = uy(rng);
      scene.transmitters.push_back({x, y, layout.tx_height});
    }
  }

  if (layout.num_rrh == 1) {
    scene.rrhs.push_back({layout.bs_x, layout.bs_y, layout.rrh_height});
  } else {
    scene.rrhs = boundary_rrhs(roi, layout.num_rrh, layout.rrh_height);
  }

  std::uniform_int_distribution<std::size_t> mat(0, layout.num_materials - 1);
  for (std::size_t s = 0; s < layout.num_scatterers; ++s) {
    const double x = ux(rng);
    const double y = uy(rng);
    const double z = uz(rng);
    scene.scatterers.push_back({{x, y, z}, mat(rng)});
  }
  for (std::size_t s = 0; s < std::min(layout.num_movable, layout.num_scatterers); ++s) {
    scene.movable.push_back(s);
  }
  return scene;
}

Scene perturb_scene(const Scene& base, const SnapshotNoise& noise, std::size_t num_materials, Rng& rng) {
  Scene out = base;
  std::normal_distribution<double> nz(0.0, noise.sigma_scatterer);
  std::normal_distribution<double> nn(0.0, noise.sigma_tx);
  std::uniform_int_distribution<std::size_t> mat(0, num_materials - 1);
  std::bernoulli_distribution rain(noise.rain_prob);

  if (noise.sigma_scatterer > 0.0) {
    for (std::size_t s : out.movable) {
      Position& p = out.scatterers[s].position;
      p.x += nz(rng);
      p.y += nz(rng);
      p.z += nz(rng);
    }
  }
  if (noise.sigma_tx > 0.0) {
    for (Position& u : out.transmitters) {
      u.x += nn(rng);
      u.y += nn(rng);
      u.z += nn(rng);
    }
  }
  for (Scatterer& s : out.scatterers) s.material = mat(rng);
  out.rain = rain(rng);
  return out;
}

Scene snapshot_scene(const Scene& base, const SnapshotNoise& noise, std::size_t num_materials,
                     std::uint64_t seed, std::size_t t) {
  Rng rng = substream(seed, Stream::kSnapshot, {t});
  return perturb_scene(base, noise, num_materials, rng);
}

}  // namespace wit::channel
