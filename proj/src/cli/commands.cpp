#include "wit/cli/commands.hpp"

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>

#include "CLI11.hpp"
#include "wit/channel/paths.hpp"
#include "wit/channel/scene.hpp"
#include "wit/dataset/dataset.hpp"
#include "wit/errors.hpp"
#include "wit/model/checkpoint.hpp"
#include "wit/numcore/kernels.hpp"
#include "wit/training/fit.hpp"
#include "wit/training/metrics.hpp"

namespace wit::cli {

void cmd_gen(const Config& cfg, const std::filesystem::path& out, std::ostream& report) {
  const data::Dataset ds = data::build_dataset(cfg.scenario, cfg.seed);
  data::save(ds, out);
  report << "samples " << ds.size() << " (discarded " << ds.discarded << " of " << ds.num_tx * ds.snapshots
         << ")\n"
         << "N_r = " << ds.antennas << ", N_c' = " << ds.subcarriers << ", delta_f = " << std::setprecision(10)
         << cfg.scenario.grid.spacing_hz() << " Hz\n"
         << std::setprecision(6) << "scale Re " << ds.scale.re << ", Im " << ds.scale.im << ", Abs " << ds.scale.abs
         << '\n'
         << "split train " << ds.split.train.size() << ", validation " << ds.split.validation().size() << ", test "
         << ds.split.test().size() << '\n'
         << "wrote " << out.string() << '\n';
}

void cmd_train(const Config& cfg, const std::filesystem::path& dataset, model::ModelKind kind, model::Pooling pooling,
               const std::filesystem::path& checkpoint, const std::filesystem::path& history, std::ostream& report) {
  const data::Dataset ds = data::load(dataset);
  model::ModelConfig mc = cfg.model_for(kind, pooling);
  mc.subcarriers = ds.subcarriers;
  mc.feature_width = ds.feature_width();
  auto net = train::make_model(mc, cfg.seed);
  const train::TrainConfig tc = cfg.train_for(kind);
  report << net->label() << ": " << net->params().scalar_count() << " parameters, " << tc.epochs << " epochs\n";

  auto write_hist = [&history](const std::vector<train::EpochRecord>& h) {
    std::ofstream hs(history);
    if (!hs) throw IoError("cannot write " + history.string());
    train::write_history(hs, h);
  };
  train::FitResult result;
  try {
    result = train::fit(*net, ds, tc);
  } catch (const train::DivergenceError& e) {
    write_hist(e.history());
    throw;
  }
  write_hist(result.history);
  model::save_checkpoint(train::make_checkpoint(*net, result), checkpoint);
  report << "best epoch " << result.best_epoch << (result.stopped_early ? " (stopped early)" : "") << '\n'
         << "validation MAE(m) " << std::setprecision(6) << result.best_val_mae_m << '\n';
}

void cmd_eval(const std::vector<std::filesystem::path>& checkpoints, const std::filesystem::path& dataset,
              const std::optional<std::filesystem::path>& ecdf_out, std::ostream& report) {
  if (checkpoints.empty()) throw UsageError("eval needs at least one checkpoint");
  const data::Dataset ds = data::load(dataset);
  const auto test = ds.split.test();
  if (test.empty()) throw UsageError("dataset has no test split");

  report << std::left << std::setw(14) << "Method" << std::right << std::setw(10) << "MAE(m)" << std::setw(10)
         << "p95(m)" << '\n';
  for (const auto& path : checkpoints) {
    const auto ckpt = model::load_checkpoint(path);
    if (ckpt.config.subcarriers != ds.subcarriers || ckpt.config.feature_width != ds.feature_width()) {
      throw DimensionError("checkpoint " + path.string() + " expects " + std::to_string(ckpt.config.subcarriers) +
                           " x " + std::to_string(ckpt.config.feature_width) + " features, dataset has " +
                           std::to_string(ds.subcarriers) + " x " + std::to_string(ds.feature_width()));
    }
    const auto net = train::from_checkpoint(ckpt);
    const auto errors = train::localization_errors(train::predict(*net, ds, test), ds.label_batch(test), ds.bounds);
    report << std::left << std::setw(14) << net->label() << std::right << std::fixed << std::setprecision(4)
           << std::setw(10) << train::mean_error(errors) << std::setw(10) << train::percentile95(errors) << '\n'
           << std::defaultfloat;

    const std::filesystem::path ecdf_path =
        ecdf_out && checkpoints.size() == 1 ? *ecdf_out : std::filesystem::path(path.string() + ".ecdf.txt");
    std::ofstream os(ecdf_path);
    if (!os) throw IoError("cannot write " + ecdf_path.string());
    train::write_ecdf(os, train::ecdf(errors));
  }
}

void cmd_diag(const Config& cfg, std::ostream& out) {
  const auto& sc = cfg.scenario;
  if (cfg.diag_tx >= sc.layout.num_tx) throw ConfigError("diag_tx is out of range");
  const channel::Scene base = channel::make_scene(sc.layout, cfg.seed);
  const std::size_t n_mat = sc.propagation.materials.size();
  out << "# tau_rms_s phi_rms_rad\n" << std::setprecision(17);
  for (std::size_t t = 0; t < sc.snapshots; ++t) {
    const auto snap = channel::snapshot_scene(base, sc.noise, n_mat, cfg.seed, t);
    Rng rng = substream(cfg.seed, Stream::kSample, {cfg.diag_tx, t});
    const auto paths = channel::derive_paths(snap.transmitters[cfg.diag_tx], snap, snap.rain, sc.propagation, rng);
    out << channel::rms_delay_spread(paths.paths) << ' ' << channel::rms_azimuth_spread(paths.paths) << '\n';
  }
}

namespace {

Config resolve_config(const std::string& config_path, const std::string& preset_name,
                      const std::optional<std::uint64_t>& seed) {
  if (!config_path.empty() && !preset_name.empty()) throw ConfigError("give either --config or --preset, not both");
  Config cfg = !config_path.empty() ? load_config(config_path) : !preset_name.empty() ? preset(preset_name) : Config{};
  if (seed) cfg.seed = *seed;
  return cfg;
}

}  // namespace

int run(int argc, char** argv) {
  if (const char* env = std::getenv("WIT_THREADS")) {
    num::kernels::set_max_threads(std::atoi(env));
  }

  CLI::App app{"Synthetic massive-MIMO CSI generation and attention-based localization"};
  app.require_subcommand(1);

  std::string config_path, preset_name, out, dataset, model_kind = "wit", pooling, history, ecdf;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> checkpoints;

  auto add_config_opts = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "key = value config file");
    sub->add_option("--preset", preset_name, "built-in preset: s-static, s-dynamic, hb-das, tiny");
    sub->add_option("--seed", seed, "override the config seed");
  };

  auto* gen = app.add_subcommand("gen", "generate a dataset");
  add_config_opts(gen);
  gen->add_option("--out", out, "dataset file")->required();

  auto* trn = app.add_subcommand("train", "train a model");
  add_config_opts(trn);
  trn->add_option("--dataset", dataset, "dataset file")->required();
  trn->add_option("--model", model_kind, "wit | base");
  trn->add_option("--pooling", pooling, "avg | lid (defaults to the config)");
  trn->add_option("--out", out, "checkpoint file")->required();
  trn->add_option("--history", history, "history file (default <out>.history.txt)");

  auto* evl = app.add_subcommand("eval", "evaluate checkpoints on the test split");
  evl->add_option("--checkpoint", checkpoints, "checkpoint file (repeatable)")->required();
  evl->add_option("--dataset", dataset, "dataset file")->required();
  evl->add_option("--ecdf", ecdf, "ECDF output for a single checkpoint");

  auto* diag = app.add_subcommand("diag", "RMS delay / azimuth spread over the snapshots");
  add_config_opts(diag);
  diag->add_option("--out", out, "output file (default stdout)");

  auto* keys = app.add_subcommand("keys", "list config keys and their defaults");

  auto* show = app.add_subcommand("show", "print the resolved config");
  add_config_opts(show);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*keys) {
      std::cout << config_reference();
    } else if (*show) {
      std::cout << format_config(resolve_config(config_path, preset_name, seed));
    } else if (*gen) {
      cmd_gen(resolve_config(config_path, preset_name, seed), out, std::cout);
    } else if (*trn) {
      const Config cfg = resolve_config(config_path, preset_name, seed);
      const auto kind = model::parse_model_kind(model_kind);
      const auto pool = pooling.empty() ? cfg.model.pooling : model::parse_pooling(pooling);
      cmd_train(cfg, dataset, kind, pool, out, history.empty() ? out + ".history.txt" : history, std::cout);
    } else if (*evl) {
      std::vector<std::filesystem::path> paths(checkpoints.begin(), checkpoints.end());
      std::optional<std::filesystem::path> ecdf_path;
      if (!ecdf.empty()) ecdf_path = ecdf;
      try {
        cmd_eval(paths, dataset, ecdf_path, std::cout);
      } catch (const UsageError&) {
        throw;
      } catch (const Error& e) {
        std::cerr << "evaluation error: " << e.what() << '\n';
        return kExitEvaluation;
      }
    } else if (*diag) {
      const Config cfg = resolve_config(config_path, preset_name, seed);
      if (out.empty()) {
        cmd_diag(cfg, std::cout);
      } else {
        std::ofstream os(out);
        if (!os) throw IoError("cannot write " + out);
        cmd_diag(cfg, os);
      }
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const train::DivergenceError& e) {
    std::cerr << "training error: " << e.what() << '\n';
    return kExitTraining;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitOk;
}

}  // namespace wit::cli
