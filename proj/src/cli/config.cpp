#include "wit/cli/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "wit/errors.hpp"

namespace wit::cli {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': '" + v + "' is not a number");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
    const auto n = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': '" + v + "' is not a nonnegative integer");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("key '" + key + "': '" + v + "' is not a boolean");
}

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  std::array<char, 32> buf{};
  const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), r.ptr);
}

channel::MaterialTable to_materials(const std::string& key, const std::string& v) {
  channel::MaterialTable t;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("key '" + key + "': expected name:amplitude, got '" + item + "'");
    const double a = to_double(key, trim(item.substr(colon + 1)));
    if (!(a > 0.0 && a <= 1.0)) throw ConfigError("key '" + key + "': amplitude factors must lie in (0, 1]");
    t.names.push_back(trim(item.substr(0, colon)));
    t.amplitude.push_back(a);
  }
  if (t.size() == 0) throw ConfigError("key '" + key + "': empty material list");
  return t;
}

std::string materials_string(const channel::MaterialTable& t) {
  std::string s;
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + t.names[i] + ":" + fmt(t.amplitude[i]);
  return s;
}

struct Entry {
  const char* key;
  const char* help;
  std::function<void(Config&, const std::string&, const std::string&)> set;
  std::function<std::string(const Config&)> get;
};

#define WIT_DOUBLE(name, help, field)                                                                 \
  Entry {                                                                                            \
    name, help, [](Config& c, const std::string& k, const std::string& v) { c.field = to_double(k, v); }, \
        [](const Config& c) { return fmt(c.field); }                                                 \
  }
#define WIT_SIZE(name, help, field)                                                                 \
  Entry {                                                                                          \
    name, help, [](Config& c, const std::string& k, const std::string& v) { c.field = to_u64(k, v); }, \
        [](const Config& c) { return std::to_string(c.field); }                                    \
  }
#define WIT_BOOL(name, help, field)                                                                  \
  Entry {                                                                                           \
    name, help, [](Config& c, const std::string& k, const std::string& v) { c.field = to_bool(k, v); }, \
        [](const Config& c) { return std::string(c.field ? "true" : "false"); }                     \
  }

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      WIT_SIZE("seed", "master seed for scene, snapshots, split, init and shuffling", seed),
      WIT_SIZE("num_tx", "R, transmitter locations", scenario.layout.num_tx),
      WIT_SIZE("snapshots", "T, time snapshots per location", scenario.snapshots),
      WIT_SIZE("num_scatterers", "S, scattering objects", scenario.layout.num_scatterers),
      WIT_SIZE("num_movable", "S', scatterers that move between snapshots", scenario.layout.num_movable),
      WIT_SIZE("num_rrh", "M, remote radio heads (1 = co-located BS)", scenario.layout.num_rrh),
      WIT_SIZE("array_mx", "antennas along x per RRH", scenario.array_mx),
      WIT_SIZE("array_mz", "antennas along z per RRH", scenario.array_mz),
      WIT_DOUBLE("carrier_hz", "f_c", scenario.propagation.carrier_hz),
      WIT_DOUBLE("bandwidth_hz", "B", scenario.grid.bandwidth_hz),
      WIT_SIZE("num_subcarriers", "N_c", scenario.grid.num_subcarriers),
      WIT_SIZE("subcarrier_stride", "every stride-th subcarrier is active", scenario.grid.stride),
      WIT_SIZE("max_paths", "L, strongest paths kept per RRH", scenario.propagation.max_paths),
      WIT_DOUBLE("sigma_scatterer_m", "sigma_z, movable scatterer jitter", scenario.noise.sigma_scatterer),
      WIT_DOUBLE("sigma_tx_m", "sigma_n, transmitter antenna jitter", scenario.noise.sigma_tx),
      WIT_DOUBLE("rain_prob", "P(rain) per snapshot", scenario.noise.rain_prob),
      WIT_DOUBLE("rain_db", "LOS attenuation while raining", scenario.propagation.rain_attenuation_db),
      WIT_DOUBLE("nlos_loss_db", "extra loss of every scattered path", scenario.propagation.nlos_extra_loss_db),
      WIT_DOUBLE("blockage_radius_m", "scatterers closer than this to a LOS segment block it (0 = off)",
                 scenario.propagation.blockage_radius_m),
      WIT_DOUBLE("blockage_db", "LOS attenuation when blocked", scenario.propagation.blockage_loss_db),
      WIT_DOUBLE("tx_power_dbm", "transmit power", scenario.tx_power_dbm),
      WIT_DOUBLE("power_threshold_dbm", "samples received below this are discarded", scenario.power_threshold_dbm),
      WIT_DOUBLE("roi_xmin", "region of interest, also the label bounds", scenario.layout.roi.xmin),
      WIT_DOUBLE("roi_xmax", "", scenario.layout.roi.xmax),
      WIT_DOUBLE("roi_ymin", "", scenario.layout.roi.ymin),
      WIT_DOUBLE("roi_ymax", "", scenario.layout.roi.ymax),
      WIT_DOUBLE("tx_height_m", "u_{r,3}", scenario.layout.tx_height),
      WIT_DOUBLE("rrh_height_m", "RRH / BS height", scenario.layout.rrh_height),
      WIT_DOUBLE("scatterer_max_height_m", "scatterer heights are uniform in [0, this]",
                 scenario.layout.scatterer_max_height),
      WIT_DOUBLE("bs_x", "BS position when num_rrh = 1", scenario.layout.bs_x),
      WIT_DOUBLE("bs_y", "", scenario.layout.bs_y),
      Entry{"tx_layout", "random | grid",
            [](Config& c, const std::string& k, const std::string& v) {
              if (v == "random") {
                c.scenario.layout.tx_layout = channel::TxLayout::kRandom;
              } else if (v == "grid") {
                c.scenario.layout.tx_layout = channel::TxLayout::kGrid;
              } else {
                throw ConfigError("key '" + k + "': expected random or grid");
              }
            },
            [](const Config& c) {
              return std::string(c.scenario.layout.tx_layout == channel::TxLayout::kGrid ? "grid" : "random");
            }},
      Entry{"materials", "comma list of name:amplitude",
            [](Config& c, const std::string& k, const std::string& v) {
              c.scenario.propagation.materials = to_materials(k, v);
              c.scenario.layout.num_materials = c.scenario.propagation.materials.size();
            },
            [](const Config& c) { return materials_string(c.scenario.propagation.materials); }},
      WIT_DOUBLE("split_ratio", "train fraction", scenario.split_ratio),
      Entry{"norm_mode", "all (train+test maxima) | train",
            [](Config& c, const std::string& k, const std::string& v) {
              if (v == "all") {
                c.scenario.norm_mode = data::NormMode::kAll;
              } else if (v == "train") {
                c.scenario.norm_mode = data::NormMode::kTrainOnly;
              } else {
                throw ConfigError("key '" + k + "': expected all or train");
              }
            },
            [](const Config& c) { return std::string(c.scenario.norm_mode == data::NormMode::kAll ? "all" : "train"); }},
      WIT_SIZE("dim", "D, hidden width of both models", model.dim),
      WIT_DOUBLE("dropout", "WiT dropout rate", model.dropout),
      WIT_DOUBLE("base_dropout", "base-DNN dropout rate", model.base_dropout),
      Entry{"pooling", "avg | lid",
            [](Config& c, const std::string&, const std::string& v) {
              try {
                c.model.pooling = model::parse_pooling(v);
              } catch (const UsageError& e) {
                throw ConfigError(e.what());
              }
            },
            [](const Config& c) { return std::string(model::to_string(c.model.pooling)); }},
      WIT_DOUBLE("ln_gamma", "LayerNorm scale", model.ln_gamma),
      WIT_DOUBLE("ln_beta", "LayerNorm shift", model.ln_beta),
      WIT_BOOL("ln_learned", "learn the LayerNorm scalars instead of fixing them", model.ln_learned),
      WIT_SIZE("blocks", "transformer blocks", model.blocks),
      WIT_BOOL("residual", "keep the residual paths of the transformer block", model.residual),
      WIT_DOUBLE("lr", "initial learning rate", train.adam.lr),
      WIT_DOUBLE("weight_decay", "decoupled weight decay", train.adam.weight_decay),
      WIT_SIZE("batch", "mini-batch size", train.batch),
      WIT_SIZE("epochs", "training epochs", train.epochs),
      WIT_SIZE("patience_wit", "early-stopping patience for WiT (0 = off)", patience_wit),
      WIT_SIZE("patience_base", "early-stopping patience for the base-DNN (0 = off)", patience_base),
      WIT_SIZE("diag_tx", "transmitter used by diag", diag_tx),
  };
  return table;
}

#undef WIT_DOUBLE
#undef WIT_SIZE
#undef WIT_BOOL

void validate(const Config& c) {
  const auto& s = c.scenario;
  if (s.layout.num_rrh == 0) throw ConfigError("num_rrh must be at least 1");
  if (s.array_mx == 0 || s.array_mz == 0) throw ConfigError("array dimensions must be at least 1");
  if (s.grid.stride == 0 || s.grid.num_subcarriers == 0) throw ConfigError("subcarrier grid is empty");
  if (s.layout.num_movable > s.layout.num_scatterers) throw ConfigError("num_movable exceeds num_scatterers");
  if (!(s.propagation.carrier_hz > 0.0) || !(s.grid.bandwidth_hz > 0.0)) throw ConfigError("frequencies must be positive");
  if (s.noise.sigma_scatterer < 0.0 || s.noise.sigma_tx < 0.0) throw ConfigError("noise levels must be nonnegative");
  if (!(s.noise.rain_prob >= 0.0 && s.noise.rain_prob <= 1.0)) throw ConfigError("rain_prob must lie in [0, 1]");
  if (!(s.layout.roi.xmin < s.layout.roi.xmax) || !(s.layout.roi.ymin < s.layout.roi.ymax)) {
    throw ConfigError("region of interest needs min < max");
  }
  if (!(s.split_ratio > 0.0 && s.split_ratio < 1.0)) throw ConfigError("split_ratio must lie in (0, 1)");
  if (s.propagation.max_paths == 0) throw ConfigError("max_paths must be at least 1");
  if (c.model.dim < 2) throw ConfigError("dim must be at least 2");
  if (c.model.blocks == 0) throw ConfigError("blocks must be at least 1");
  if (!(c.model.dropout >= 0.0 && c.model.dropout < 1.0) || !(c.model.base_dropout >= 0.0 && c.model.base_dropout < 1.0)) {
    throw ConfigError("dropout rates must lie in [0, 1)");
  }
  if (c.train.batch == 0) throw ConfigError("batch must be at least 1");
  if (!(c.train.adam.lr >= 0.0)) throw ConfigError("lr must be nonnegative");
}

}  // namespace

model::ModelConfig Config::model_for(model::ModelKind kind, model::Pooling pooling) const {
  model::ModelConfig m = model;
  m.kind = kind;
  m.pooling = pooling;
  m.subcarriers = scenario.active_subcarriers();
  m.feature_width = 3 * scenario.antennas();
  return m;
}

train::TrainConfig Config::train_for(model::ModelKind kind) const {
  train::TrainConfig t = train;
  t.seed = seed;
  t.patience = kind == model::ModelKind::kBase ? patience_base : patience_wit;
  return t;
}

void set_config_value(Config& cfg, const std::string& key, const std::string& value) {
  const auto& table = entries();
  const auto it = std::find_if(table.begin(), table.end(), [&](const Entry& e) { return key == e.key; });
  if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
  it->set(cfg, key, value);
}

Config parse_config(std::istream& in, const std::string& origin) {
  Config cfg;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": expected key = value");
    }
    try {
      set_config_value(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  validate(cfg);
  return cfg;
}

Config load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  return parse_config(in, path.string());
}

std::vector<std::string> preset_names() { return {"s-static", "s-dynamic", "hb-das", "tiny"}; }

std::string preset_text(const std::string& name) {
  // Shared by the three paper-scale scenarios.
  static const std::string common =
      "carrier_hz = 3.5e9\n"
      "bandwidth_hz = 20e6\n"
      "num_subcarriers = 512\n"
      "subcarrier_stride = 16\n"
      "max_paths = 4\n"
      "tx_height_m = 1.5\n"
      "rrh_height_m = 20\n"
      "rain_prob = 0.3\n"
      "power_threshold_dbm = -130\n"
      "dim = 650\n"
      "dropout = 0.1\n"
      "base_dropout = 0.2\n"
      "lr = 3e-4\n"
      "batch = 512\n"
      "epochs = 1800\n"
      "patience_base = 80\n"
      "patience_wit = 0\n";
  if (name == "s-static") {
    return "# single BS, static environment, dense grid of locations\n" + common +
           "num_tx = 72000\nsnapshots = 1\ntx_layout = grid\nnum_rrh = 1\narray_mx = 8\narray_mz = 8\n"
           "num_scatterers = 40\nnum_movable = 15\nsigma_scatterer_m = 0\nsigma_tx_m = 0.05\n"
           "roi_xmin = 0\nroi_xmax = 600\nroi_ymin = 0\nroi_ymax = 60\nbs_x = 300\nbs_y = -40\n"
           "blockage_radius_m = 4\nblockage_db = 40\ntx_power_dbm = 0\n";
  }
  if (name == "s-dynamic") {
    return "# single BS, moving scatterers over T = 200 snapshots\n" + common +
           "num_tx = 360\nsnapshots = 200\ntx_layout = random\nnum_rrh = 1\narray_mx = 8\narray_mz = 8\n"
           "num_scatterers = 40\nnum_movable = 15\nsigma_scatterer_m = 2\nsigma_tx_m = 0.05\n"
           "roi_xmin = 0\nroi_xmax = 600\nroi_ymin = 0\nroi_ymax = 60\nbs_x = 300\nbs_y = -40\n"
           "blockage_radius_m = 4\nblockage_db = 40\ntx_power_dbm = 0\n";
  }
  if (name == "hb-das") {
    return "# distributed antennas: 8 RRHs with 8 antennas each\n" + common +
           "num_tx = 406\nsnapshots = 200\ntx_layout = random\nnum_rrh = 8\narray_mx = 4\narray_mz = 2\n"
           "num_scatterers = 40\nnum_movable = 15\nsigma_scatterer_m = 2\nsigma_tx_m = 0.05\n"
           "roi_xmin = 0\nroi_xmax = 400\nroi_ymin = 0\nroi_ymax = 150\n"
           "blockage_radius_m = 4\nblockage_db = 40\ntx_power_dbm = 0\n";
  }
  if (name == "tiny") {
    return "# CI-sized scenario: 8 antennas (2 x 4), 16 active subcarriers, D = 64\n"
           "carrier_hz = 3.5e9\nbandwidth_hz = 20e6\nnum_subcarriers = 512\nsubcarrier_stride = 32\n"
           "max_paths = 4\ntx_height_m = 1.5\nrrh_height_m = 20\nrain_prob = 0.3\n"
           "power_threshold_dbm = -130\nnlos_loss_db = 15\n"
           "num_tx = 100\nsnapshots = 20\ntx_layout = random\nnum_rrh = 1\narray_mx = 2\narray_mz = 4\n"
           "num_scatterers = 12\nnum_movable = 6\nsigma_scatterer_m = 1\nsigma_tx_m = 0.05\n"
           "roi_xmin = 0\nroi_xmax = 60\nroi_ymin = 0\nroi_ymax = 60\nbs_x = 30\nbs_y = -20\n"
           "dim = 64\ndropout = 0.1\nbase_dropout = 0.2\n"
           "lr = 3e-4\nbatch = 8\nepochs = 60\npatience_base = 80\npatience_wit = 0\n";
  }
  throw ConfigError("unknown preset '" + name + "'");
}

Config preset(const std::string& name) {
  std::istringstream in(preset_text(name));
  return parse_config(in, "preset " + name);
}

std::string format_config(const Config& cfg) {
  std::ostringstream os;
  for (const auto& e : entries()) os << e.key << " = " << e.get(cfg) << '\n';
  return os.str();
}

std::string config_reference() {
  const Config defaults;
  std::ostringstream os;
  for (const auto& e : entries()) {
    os << e.key << " = " << e.get(defaults);
    if (*e.help) os << "    # " << e.help;
    os << '\n';
  }
  return os.str();
}

}  // namespace wit::cli
