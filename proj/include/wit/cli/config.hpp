#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "wit/dataset/scenario.hpp"
#include "wit/model/localizer.hpp"
#include "wit/training/fit.hpp"

namespace wit::cli {

/// Scenario, model and training settings of one workflow run.
struct Config {
  std::uint64_t seed = 1;
  data::ScenarioConfig scenario;
  model::ModelConfig model;
  train::TrainConfig train;
  std::size_t patience_wit = 0;
  std::size_t patience_base = 80;
  std::size_t diag_tx = 0;

  /// Model architecture for a dataset of the configured scenario.
  model::ModelConfig model_for(model::ModelKind kind, model::Pooling pooling) const;
  /// Training settings for the given model kind.
  train::TrainConfig train_for(model::ModelKind kind) const;
};

/// Plain `key = value` lines; `#` starts a comment. Every key is optional
/// (defaults are listed by config_reference()); unknown keys and malformed
/// values raise ConfigError.
Config parse_config(std::istream& in, const std::string& origin = "<config>");
Config load_config(const std::filesystem::path& path);

/// Applies one key; throws ConfigError for unknown keys.
void set_config_value(Config& cfg, const std::string& key, const std::string& value);

/// Built-in presets: "s-static", "s-dynamic", "hb-das", "tiny".
std::vector<std::string> preset_names();
std::string preset_text(const std::string& name);
Config preset(const std::string& name);

/// Every key with its value in `cfg`; parsing the text gives back `cfg`.
std::string format_config(const Config& cfg);

/// One line per key: name, default, meaning.
std::string config_reference();

}  // namespace wit::cli
