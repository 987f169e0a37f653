// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.
//
//   acceptance --wit path/to/wit [--only A5] [--workdir DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

#include "CLI11.hpp"
#include "oracle.hpp"
#include "wit/channel/channel.hpp"
#include "wit/channel/paths.hpp"
#include "wit/cli/config.hpp"
#include "wit/dataset/dataset.hpp"
#include "wit/model/wit.hpp"
#include "wit/numcore/grad_check.hpp"
#include "wit/numcore/ops.hpp"
#include "wit/training/fit.hpp"
#include "wit/training/metrics.hpp"

using namespace wit;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int precision = 3) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

num::Tensor normal_tensor(num::Shape shape, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> n(0.0, sd);
  num::Tensor t(std::move(shape));
  for (double& v : t.data()) v = n(rng);
  return t;
}

num::Tensor eval_model(const model::Localizer& m, const num::Tensor& x) {
  num::Graph g;
  const auto p = model::bind(g, m.params(), false);
  Rng rng(0);
  return g.value(m.forward(g, p, g.input(x), rng, false));
}

// ---------------------------------------------------------------------------

Outcome a1_gradients() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  // N_r = 2 antennas -> 3 N_r = 6 features per subcarrier.
  const num::Tensor x = normal_tensor({3, 4, 6}, rng, 0.5);
  const num::Tensor y = normal_tensor({3, 2}, rng, 0.3);
  double worst = 0.0;
  std::string worst_name;
  auto check = [&](model::ModelConfig cfg, const std::string& name) {
    cfg.subcarriers = 4;
    cfg.feature_width = 6;
    cfg.dim = 8;
    const auto m = train::make_model(cfg, 7);
    const num::ScalarFn loss = [&](num::Graph& g, std::span<const num::Var> p) {
      Rng drop(3);
      return train::mse_loss(m->forward(g, p, g.input(x), drop, true), g.input(y));
    };
    const double e = num::grad_check(loss, m->params().values(), 1e-5);
    if (e >= worst) {
      worst = e;
      worst_name = name;
    }
  };
  model::ModelConfig c;
  c.pooling = model::Pooling::kAverage;
  check(c, "WiT avg");
  c.pooling = model::Pooling::kLid;
  check(c, "WiT LID");
  c.kind = model::ModelKind::kBase;
  check(c, "base-DNN");
  const double elapsed = seconds_since(t0);
  return {worst < 1e-4 && elapsed < 30.0,
          "max rel err " + fmt(worst) + " (" + worst_name + "), " + fmt(elapsed, 2) + " s"};
}

Outcome a2_attention() {
  double row_err = 0.0, sym_err = 0.0, single_err = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    std::mt19937_64 rng(seed);
    const std::size_t c = std::uniform_int_distribution<std::size_t>(2, 33)(rng);
    const std::size_t d = std::uniform_int_distribution<std::size_t>(2, 24)(rng);
    const num::Tensor x = normal_tensor({1, c, d}, rng, 2.0);
    const num::Tensor w = normal_tensor({d, d}, rng, 1.0 / std::sqrt(static_cast<double>(d)));
    num::Graph g;
    const model::NormSpec norm{1.0, 1e-4, {}, {}};
    const auto r = model::attention(g.input(x), g.input(w), norm);
    const auto& s = g.value(r.scores);
    const auto& a = g.value(r.weights);
    for (std::size_t i = 0; i < c; ++i) {
      double total = 0.0;
      for (std::size_t j = 0; j < c; ++j) {
        total += a.at(i, j);
        sym_err = std::max(sym_err, std::abs(s.at(i, j) - s.at(j, i)));
      }
      row_err = std::max(row_err, std::abs(total - 1.0));
    }

    const num::Tensor one = normal_tensor({1, 1, d}, rng, 2.0);
    const auto r1 = model::attention(g.input(one), g.input(w), norm);
    const oracle::Mat want =
        oracle::mm(oracle::layer_norm(oracle::Mat(1, d, one.ptr()), 1.0, 1e-4), oracle::Mat(d, d, w.ptr()));
    const auto& o = g.value(r1.output);
    for (std::size_t j = 0; j < d; ++j) single_err = std::max(single_err, std::abs(o[j] - want.v[j]));
  }
  return {row_err <= 1e-9 && sym_err <= 1e-10 && single_err <= 1e-12,
          "row sum err " + fmt(row_err) + ", asymmetry " + fmt(sym_err) + ", single-token err " + fmt(single_err) +
              " over 100 seeds"};
}

data::Dataset small_dataset(std::uint64_t seed) {
  cli::Config c = cli::preset("tiny");
  c.scenario.layout.num_tx = 30;
  c.scenario.snapshots = 4;
  return data::build_dataset(c.scenario, seed);
}

Outcome a3_permutation() {
  const data::Dataset ds = small_dataset(5);
  model::ModelConfig cfg = cli::preset("tiny").model_for(model::ModelKind::kWit, model::Pooling::kAverage);
  cfg.subcarriers = ds.subcarriers;
  cfg.feature_width = ds.feature_width();
  auto m = train::make_model(cfg, 5);
  auto* wit_model = dynamic_cast<model::WitModel*>(m.get());
  const std::size_t g_index = wit_model->param("positional");

  std::mt19937_64 rng(17);
  std::vector<std::size_t> perm(ds.subcarriers);
  auto permuted = [&](const num::Tensor& x) {
    num::Tensor y = x;
    const std::size_t w = ds.feature_width();
    for (std::size_t b = 0; b < x.dim(0); ++b)
      for (std::size_t i = 0; i < perm.size(); ++i)
        for (std::size_t j = 0; j < w; ++j) y[(b * perm.size() + i) * w + j] = x[(b * perm.size() + perm[i]) * w + j];
    return y;
  };
  std::vector<std::uint64_t> idx(std::min<std::size_t>(ds.size(), 16));
  std::iota(idx.begin(), idx.end(), 0);
  const num::Tensor x = ds.feature_batch(idx);

  // G = 0, no LID, average pooling: invariant.
  auto frozen = train::make_model(cfg, 5);
  frozen->params().value(g_index).fill(0.0);
  const num::Tensor base = eval_model(*frozen, x);
  double invariant_err = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    invariant_err = std::max(invariant_err, num::max_abs_diff(eval_model(*frozen, permuted(x)), base));
  }

  // Trained G: some permutation moves the estimate.
  train::TrainConfig tc;
  tc.epochs = 5;
  tc.batch = 16;
  train::fit(*m, ds, tc);
  const bool g_trained = num::frobenius(m->params().value(g_index)) > 0.0;
  const num::Tensor trained = eval_model(*m, x);
  double largest = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    largest = std::max(largest, num::max_abs_diff(eval_model(*m, permuted(x)), trained));
  }
  return {invariant_err < 1e-9 && g_trained && largest > 1e-6,
          "G=0 max change " + fmt(invariant_err) + ", trained G max change " + fmt(largest)};
}

Outcome a4_channel() {
  using channel::Complex;
  const double carrier = 3.5e9;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  double modulus_err = 0.0, kron_err = 0.0;
  const auto geom = channel::ArrayGeometry::half_wavelength(4, 3, 1, carrier);
  const double k0 = 2.0 * channel::kPi / geom.wavelength * geom.spacing;
  for (int trial = 0; trial < 500; ++trial) {
    const double az = 2.0 * channel::kPi * (u(rng) - 0.5), el = channel::kPi * u(rng);
    const auto a = channel::steering_vector(az, el, geom);
    for (std::size_t iz = 0; iz < 3; ++iz)
      for (std::size_t ix = 0; ix < 4; ++ix) {
        const Complex az_part = std::polar(1.0, k0 * static_cast<double>(iz) * std::cos(el));
        const Complex ax_part = std::polar(1.0, k0 * static_cast<double>(ix) * std::sin(el) * std::sin(az));
        kron_err = std::max(kron_err, std::abs(a[iz * 4 + ix] - az_part * ax_part));
        modulus_err = std::max(modulus_err, std::abs(std::abs(a[iz * 4 + ix]) - 1.0));
      }
  }

  auto random_paths = [&](std::size_t n) {
    std::vector<channel::Path> out(n);
    for (auto& p : out) {
      p.gain = std::polar(1e-3 * (0.1 + u(rng)), 2.0 * channel::kPi * u(rng));
      p.delay = 1e-7 + 4e-7 * u(rng);
      p.azimuth = channel::kPi * (u(rng) - 0.5);
      p.elevation = channel::kPi * u(rng);
    }
    return out;
  };
  const cli::Config s = cli::preset("s-dynamic");
  double linear_err = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto p1 = random_paths(3), p2 = random_paths(4);
    auto both = p1;
    both.insert(both.end(), p2.begin(), p2.end());
    const auto h1 = channel::channel_matrix(p1, s.scenario.geometry(), s.scenario.grid);
    const auto h2 = channel::channel_matrix(p2, s.scenario.geometry(), s.scenario.grid);
    const auto h = channel::channel_matrix(both, s.scenario.geometry(), s.scenario.grid);
    for (std::size_t i = 0; i < h.entries.size(); ++i)
      linear_err = std::max(linear_err, std::abs(h.entries[i] - (h1.entries[i] + h2.entries[i])));
  }
  const double df = s.scenario.grid.spacing_hz();

  // Weighted moments against the pairwise form sum_ij w_i w_j (x_i - x_j)^2 / 2.
  auto pairwise = [](const std::vector<double>& w, const std::vector<double>& x) {
    double total = std::accumulate(w.begin(), w.end(), 0.0), acc = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
      for (std::size_t j = 0; j < x.size(); ++j) acc += w[i] * w[j] * (x[i] - x[j]) * (x[i] - x[j]);
    return std::sqrt(acc / (2.0 * total * total));
  };
  double spread_err = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const auto p = random_paths(4);
    std::vector<double> w, tau, phi;
    std::size_t strongest = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      w.push_back(std::norm(p[i].gain));
      if (w[i] > w[strongest]) strongest = i;
    }
    for (const auto& q : p) {
      tau.push_back(q.delay - p[strongest].delay);
      phi.push_back(q.azimuth);
    }
    const double t_ref = pairwise(w, tau), p_ref = pairwise(w, phi);
    spread_err = std::max(spread_err, std::abs(channel::rms_delay_spread(p) - t_ref) / t_ref);
    spread_err = std::max(spread_err, std::abs(channel::rms_azimuth_spread(p) - p_ref) / p_ref);
  }
  const bool pass = modulus_err <= 1e-12 && kron_err <= 1e-12 && linear_err <= 1e-12 && df == 39062.5 &&
                    spread_err <= 1e-12;
  return {pass, "|a|-1 " + fmt(modulus_err) + ", kron " + fmt(kron_err) + ", linearity " + fmt(linear_err) +
                    ", delta_f " + fmt(df, 10) + " Hz, spread rel err " + fmt(spread_err)};
}

struct Run {
  double avg = 0.0, lid = 0.0, base = 0.0;
  double avg_val = 0.0;  // validation MAE of WiT-avg, reused by A10
};

Run tiny_run(std::uint64_t seed) {
  cli::Config c = cli::preset("tiny");
  c.seed = seed;
  const data::Dataset ds = data::build_dataset(c.scenario, seed);
  const auto test = ds.split.test();
  Run r;
  auto train_eval = [&](model::ModelKind kind, model::Pooling pooling, double* val) {
    model::ModelConfig mc = c.model_for(kind, pooling);
    auto m = train::make_model(mc, seed);
    const auto fr = train::fit(*m, ds, c.train_for(kind));
    if (val) *val = fr.best_val_mae_m;
    return train::evaluate_mae(*m, ds, test);
  };
  r.avg = train_eval(model::ModelKind::kWit, model::Pooling::kAverage, &r.avg_val);
  r.lid = train_eval(model::ModelKind::kWit, model::Pooling::kLid, nullptr);
  r.base = train_eval(model::ModelKind::kBase, model::Pooling::kAverage, nullptr);
  return r;
}

std::vector<Run> g_runs;  // filled by A5

Outcome a5_ordering() {
  const auto t0 = Clock::now();
  std::size_t ordered = 0;
  Run mean;
  std::string per_run;
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const Run r = tiny_run(seed);
    g_runs.push_back(r);
    const bool ok = r.avg < r.lid && r.lid < r.base && r.avg <= 0.8 * r.base;
    ordered += ok ? 1 : 0;
    mean.avg += r.avg / 3.0;
    mean.lid += r.lid / 3.0;
    mean.base += r.base / 3.0;
    per_run += " [" + fmt(r.avg) + " " + fmt(r.lid) + " " + fmt(r.base) + (ok ? " ok]" : " no]");
  }
  const double elapsed = seconds_since(t0);
  const bool mean_ok = mean.avg < mean.lid && mean.lid < mean.base && mean.avg <= 0.8 * mean.base;
  return {ordered >= 2 && mean_ok && elapsed < 900.0,
          "test MAE m avg/LID/base mean " + fmt(mean.avg) + " / " + fmt(mean.lid) + " / " + fmt(mean.base) +
              ", ratio " + fmt(mean.avg / mean.base) + ", runs" + per_run + ", ordered " + std::to_string(ordered) +
              "/3, " + fmt(elapsed, 4) + " s"};
}

Outcome a6_optimizer() {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> lr_dist(1e-5, 1e-1);
  double step_err = 0.0;
  bool identity = true;
  for (int trial = 0; trial < 100; ++trial) {
    const double lr = lr_dist(rng);
    std::vector<num::Tensor> p = {normal_tensor({3, 4}, rng), normal_tensor({5}, rng)};
    const auto before = p;
    train::OptimState st = train::make_optim_state(p, {lr, 0.9, 0.999, 1e-12, 0.0});
    train::adamw_step(p, {num::Tensor({3, 4}, 1.0), num::Tensor({5}, 1.0)}, st);
    for (std::size_t t = 0; t < p.size(); ++t)
      for (std::size_t i = 0; i < p[t].size(); ++i)
        step_err = std::max(step_err, std::abs((p[t][i] - before[t][i]) - (-lr)));

    std::vector<num::Tensor> q = before;
    train::OptimState zero = train::make_optim_state(q, {0.0, 0.9, 0.999, 1e-8, 1e-2});
    train::adamw_step(q, {normal_tensor({3, 4}, rng), normal_tensor({5}, rng)}, zero);
    identity = identity && q == before;
  }
  return {step_err <= 1e-9 && identity,
          "first-step err " + fmt(step_err) + ", lr=0 identity " + (identity ? "yes" : "no")};
}

Outcome a7_metrics() {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double mae_err = 0.0;
  std::size_t p95_mismatch = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 400)(rng);
    const data::LabelBounds b{-20.0 * u(rng), 10.0 + 100.0 * u(rng), -5.0, 5.0 + 50.0 * u(rng)};
    num::Tensor pred({n, 2}), truth({n, 2});
    for (std::size_t i = 0; i < 2 * n; ++i) {
      pred[i] = u(rng);
      truth[i] = u(rng);
    }
    std::vector<double> errors;
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double dx = (pred.at(i, 0) - truth.at(i, 0)) * (b.xmax - b.xmin);
      const double dy = (pred.at(i, 1) - truth.at(i, 1)) * (b.ymax - b.ymin);
      errors.push_back(std::sqrt(dx * dx + dy * dy));
      total += errors.back();
    }
    const double got = train::mae(pred, truth, b);
    mae_err = std::max(mae_err, std::abs(got - total / static_cast<double>(n)) / std::max(1.0, got));
    std::sort(errors.begin(), errors.end());
    std::size_t rank = 1;  // smallest r with r >= 0.95 n
    while (100 * rank < 95 * n) ++rank;
    const auto errs = train::localization_errors(pred, truth, b);
    if (std::abs(train::percentile95(errs) - errors[rank - 1]) > 1e-12 * std::max(1.0, errors[rank - 1])) ++p95_mismatch;
  }
  const data::LabelBounds unit{0.0, 10.0, 0.0, 10.0};
  const double single = train::mae(num::Tensor::matrix({{0.3, 0.4}}), num::Tensor::matrix({{0.0, 0.0}}), unit);
  return {mae_err <= 1e-12 && p95_mismatch == 0 && std::abs(single - 5.0) <= 1e-12,
          "MAE err " + fmt(mae_err) + ", p95 mismatches " + std::to_string(p95_mismatch) + "/1000, 3-4-5 MAE " +
              fmt(single, 17)};
}

// Runs `wit args` inside `dir`, stdout and stderr to `log` there.
int run_wit(const std::string& bin, const fs::path& dir, const std::string& args, const std::string& log) {
  const std::string cmd = "cd '" + dir.string() + "' && '" + bin + "' " + args + " > " + log + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome a8_pipeline(const std::string& bin, const fs::path& work) {
  // The tiny preset with a short training budget.
  cli::Config c = cli::preset("tiny");
  c.train.epochs = 4;
  fs::create_directories(work);
  const std::string text = cli::format_config(c);
  const std::vector<std::string> files = {"ds.bin",   "wit.ck",        "wit.ck.history.txt", "base.ck",
                                          "base.ck.history.txt", "gen.txt", "train_wit.txt", "train_base.txt",
                                          "eval.txt", "wit.ck.ecdf.txt", "base.ck.ecdf.txt"};
  const fs::path abs_bin = fs::absolute(bin);
  for (const char* round : {"run1", "run2"}) {
    const fs::path d = work / round;
    fs::remove_all(d);
    fs::create_directories(d);
    std::ofstream(d / "pipeline.cfg") << text;
    const std::string b = abs_bin.string();
    if (run_wit(b, d, "gen --config pipeline.cfg --out ds.bin", "gen.txt") != 0 ||
        run_wit(b, d, "train --config pipeline.cfg --dataset ds.bin --model wit --pooling avg --out wit.ck",
                "train_wit.txt") != 0 ||
        run_wit(b, d, "train --config pipeline.cfg --dataset ds.bin --model base --out base.ck", "train_base.txt") != 0 ||
        run_wit(b, d, "eval --dataset ds.bin --checkpoint wit.ck --checkpoint base.ck", "eval.txt") != 0) {
      return {false, std::string("pipeline command failed in ") + round};
    }
  }
  std::size_t identical = 0;
  std::string differing;
  for (const auto& f : files) {
    const std::string a = slurp(work / "run1" / f), b = slurp(work / "run2" / f);
    if (!a.empty() && a == b) {
      ++identical;
    } else {
      differing += " " + f;
    }
  }
  return {identical == files.size(),
          std::to_string(identical) + "/" + std::to_string(files.size()) + " artifacts byte-identical" +
              (differing.empty() ? "" : ", differing:" + differing)};
}

Outcome a9_overfit() {
  cli::Config c = cli::preset("tiny");
  data::Dataset ds = data::build_dataset(c.scenario, 9);
  ds.split.train.resize(10);
  ds.split.holdout = ds.split.train;  // validation on the same ten samples
  model::ModelConfig mc = c.model_for(model::ModelKind::kWit, model::Pooling::kAverage);
  mc.dropout = 0.0;  // memorisation check, regularisation off
  auto m = train::make_model(mc, 9);
  train::TrainConfig tc = c.train_for(model::ModelKind::kWit);
  tc.epochs = 500;
  tc.batch = 2;
  train::fit(*m, ds, tc);
  const auto& idx = ds.split.train;
  const data::LabelBounds unit{0.0, 1.0, 0.0, 1.0};
  const double scaled = train::mae(train::predict(*m, ds, idx), ds.label_batch(idx), unit);
  return {scaled < 0.01, "train MAE " + fmt(scaled) + " (scaled units) after 500 epochs"};
}

Outcome a10_residual() {
  cli::Config c = cli::preset("tiny");
  const std::uint64_t seed = 1;
  c.seed = seed;
  const data::Dataset ds = data::build_dataset(c.scenario, seed);
  auto val_mae = [&](bool residual) {
    model::ModelConfig mc = c.model_for(model::ModelKind::kWit, model::Pooling::kAverage);
    mc.residual = residual;
    auto m = train::make_model(mc, seed);
    return train::fit(*m, ds, c.train_for(model::ModelKind::kWit)).best_val_mae_m;
  };
  const double with = !g_runs.empty() ? g_runs.front().avg_val : val_mae(true);
  const double without = val_mae(false);
  const double rel = without / with - 1.0;
  return {rel >= 0.10, "validation MAE with residual " + fmt(with) + " m, without " + fmt(without) + " m, " +
                           (rel >= 0.0 ? "+" : "") + fmt(100.0 * rel, 3) + "%"};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria A1-A10"};
  std::string bin;
  std::vector<std::string> only;
  std::string workdir = (fs::temp_directory_path() / ("wit_acceptance_" + std::to_string(::getpid()))).string();
  app.add_option("--wit", bin, "path to the wit executable")->required();
  app.add_option("--only", only, "run only these criteria (e.g. A5)");
  app.add_option("--workdir", workdir, "scratch directory for A8");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"A1", a1_gradients},
      {"A2", a2_attention},
      {"A3", a3_permutation},
      {"A4", a4_channel},
      {"A5", a5_ordering},
      {"A6", a6_optimizer},
      {"A7", a7_metrics},
      {"A8", [&] { return a8_pipeline(bin, workdir); }},
      {"A9", a9_overfit},
      {"A10", a10_residual},
  };
  int failed = 0;
  for (const auto& [id, fn] : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += o.pass ? 0 : 1;
    std::cout << std::left << std::setw(4) << id << (o.pass ? "PASS  " : "FAIL  ") << o.detail << std::endl;
  }
  fs::remove_all(workdir);
  return failed;
}
