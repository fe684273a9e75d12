// rftwin: simulate jamming scenarios, train and evaluate detectors, run sweeps.
//
//   rftwin generate --sigma 2 --grid 10 --n-train 10000 --n-test 10000 --anomaly-frac 0.5 --seed 1 --out data.csv
//   rftwin train    --detector lof --data data.csv [--sorted] --model-out lof.json
//   rftwin evaluate --model lof.json --data data.csv [--sorted] --report report.json
//   rftwin sweep    --config sweep.cfg --out-dir out/
//   rftwin radiomap --sigma 4 --seed 7 --resolution 1 --out map.txt
//
// Exit codes: 0 success, 2 config error, 3 data error, 4 solver non-convergence.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "rftwin/dataset.hpp"
#include "rftwin/detectors.hpp"
#include "rftwin/error.hpp"
#include "rftwin/experiments.hpp"
#include "rftwin/metrics.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitSolver = 4;

int exit_code_for(rftwin::ErrorKind kind) {
  using rftwin::ErrorKind;
  switch (kind) {
    case ErrorKind::InvalidConfig:
    case ErrorKind::KTooLarge:
      return kExitConfig;
    case ErrorKind::NonConvergence:
      return kExitSolver;
    default:
      return kExitData;
  }
}

struct GenerateArgs {
  double sigma = 2.0;
  double grid = 10.0;
  std::size_t n_train = 10000;
  std::size_t n_test = 10000;
  double anomaly_frac = 0.5;
  std::uint64_t seed = 1;
  std::string out;
  std::string config;
  double pos_err_std = -1.0;
  unsigned threads = 1;
};

struct TrainArgs {
  std::string detector;
  std::string data;
  bool sorted = false;
  std::string model_out;
  rftwin::DetectorParams params;
};

struct EvaluateArgs {
  std::string model;
  std::string data;
  bool sorted = false;
  std::string report;
  unsigned threads = 1;
};

struct SweepArgs {
  std::string config;
  std::string out_dir;
  unsigned threads = 0;
};

struct RadioMapArgs {
  double sigma = 4.0;
  std::uint64_t seed = 1;
  double resolution = 1.0;
  std::string out;
  double grid = 10.0;
  bool no_jammer = false;
  double pos_err_std = -1.0;
};

rftwin::ScenarioConfig base_config(const std::string& path) {
  if (path.empty()) return {};
  return rftwin::scenario_config_from(rftwin::read_key_values(path));
}

int run_generate(const GenerateArgs& a) {
  auto config = base_config(a.config);
  config.sigma_shadow = a.sigma;
  config.grid_size = a.grid;
  config.master_seed = a.seed;
  if (a.pos_err_std >= 0) config.pos_err_std = a.pos_err_std;
  const auto ds = rftwin::generate(config, a.n_train, a.n_test, a.anomaly_frac, a.threads);
  rftwin::save_csv(ds, a.out);
  std::cout << "wrote " << ds.train.size() << " train and " << ds.test.size() << " test samples ("
            << ds.test_anomaly_count() << " anomalies, " << ds.feature_dim() << " features) to " << a.out << '\n';
  return 0;
}

rftwin::Dataset load_for(const std::string& path, bool sorted) {
  auto ds = rftwin::load_csv(path);
  if (sorted && !ds.sorted_features) ds = rftwin::sort_descending(ds);
  return ds;
}

int run_train(const TrainArgs& a) {
  const auto kind = rftwin::parse_detector(a.detector);
  const auto ds = load_for(a.data, a.sorted);
  const auto model = rftwin::fit_detector(kind, rftwin::to_matrix(ds.train), a.params);
  rftwin::save_model({model, ds.sorted_features}, a.model_out);
  std::cout << "trained " << rftwin::to_string(kind) << " on " << ds.train.size() << " samples -> " << a.model_out
            << '\n';
  return 0;
}

int run_evaluate(const EvaluateArgs& a) {
  const auto stored = rftwin::load_model(a.model);
  const auto ds = load_for(a.data, a.sorted);
  if (stored.sorted_features != ds.sorted_features) {
    throw rftwin::Error(rftwin::ErrorKind::InvalidConfig,
                        std::string("model was trained ") + (stored.sorted_features ? "with" : "without") +
                            " --sorted; pass the same flag to evaluate");
  }
  const auto test = rftwin::to_matrix(ds.test);
  const auto labels = rftwin::labels_of(ds.test);
  const auto scores = rftwin::score_batch(stored.model, test, a.threads);
  std::vector<rftwin::Label> predictions(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    predictions[i] = rftwin::is_anomalous_score(stored.model, scores[i]) ? rftwin::Label::Anomaly
                                                                          : rftwin::Label::Normal;
  }
  const auto report = rftwin::evaluate_metrics(labels, scores, predictions);

  nlohmann::json roc = nlohmann::json::array();
  for (const auto& p : rftwin::thin_roc(report.roc, 1000).points) roc.push_back({p.fpr, p.tpr});
  nlohmann::json doc = {
      {"detector", std::string(rftwin::to_string(rftwin::kind_of(stored.model)))},
      {"n_test", labels.size()},
      {"sorted_features", ds.sorted_features},
      {"confusion", {{"tp", report.confusion.tp}, {"fp", report.confusion.fp}, {"tn", report.confusion.tn},
                     {"fn", report.confusion.fn}}},
      {"precision", report.precision},
      {"recall", report.recall},
      {"f2", report.f2},
      {"tpr", report.tpr},
      {"fpr", report.fpr},
      {"auc", report.auc_undefined ? nlohmann::json(nullptr) : nlohmann::json(report.auc)},
      {"precision_undefined", report.precision_undefined},
      {"recall_undefined", report.recall_undefined},
      {"fpr_undefined", report.fpr_undefined},
      {"auc_undefined", report.auc_undefined},
      {"roc", roc},
  };
  std::ofstream out(a.report);
  if (!out) throw rftwin::Error(rftwin::ErrorKind::Io, "cannot write '" + a.report + "'");
  out << doc.dump(2) << '\n';
  std::cout << rftwin::to_string(rftwin::kind_of(stored.model)) << ": precision " << report.precision << ", recall "
            << report.recall << ", F2 " << report.f2 << ", AUC "
            << (report.auc_undefined ? std::string("n/a") : std::to_string(report.auc)) << '\n';
  return 0;
}

int run_sweep_cmd(const SweepArgs& a) {
  auto spec = rftwin::load_sweep_spec(a.config);
  if (a.threads > 0) spec.threads = a.threads;
  const auto result = rftwin::run_sweep_to_directory(spec, a.out_dir);
  std::cout << "sweep: " << result.rows.size() << " rows written to " << a.out_dir << '\n';
  // Everything is written first; a failed row then decides the exit code.
  int code = 0;
  for (const auto& r : result.rows) {
    if (r.failed) {
      std::cerr << "  failed: sigma=" << r.sigma_db << " grid=" << r.grid_m << " detector=" << rftwin::to_string(r.detector)
                << " seed=" << r.seed << ": " << r.error << '\n';
      if (code == 0) code = r.error_kind ? exit_code_for(*r.error_kind) : 3;
    }
  }
  return code;
}

int run_radiomap(const RadioMapArgs& a) {
  rftwin::ScenarioConfig config;
  config.sigma_shadow = a.sigma;
  config.grid_size = a.grid;
  config.master_seed = a.seed;
  if (a.pos_err_std >= 0) config.pos_err_std = a.pos_err_std;
  auto rng = rftwin::make_substream(a.seed, rftwin::StreamPhase::RadioMap, 0);
  const auto scenario = rftwin::sample_scenario(config, !a.no_jammer, rng);
  const auto files = rftwin::render_radio_map(config, scenario, a.resolution, a.out, rng);
  for (const auto& f : files) std::cout << "wrote " << f.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Digital-twin RSS jamming detection simulator and benchmark"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Simulate a labelled train/test dataset of Delta vectors");
  g->add_option("--sigma", gen.sigma, "Shadowing standard deviation [dB]")->required();
  g->add_option("--grid", gen.grid, "SU grid spacing [m]")->required();
  g->add_option("--n-train", gen.n_train, "Normal training samples")->required();
  g->add_option("--n-test", gen.n_test, "Test samples")->required();
  g->add_option("--anomaly-frac", gen.anomaly_frac, "Fraction of test samples with a jammer")->required();
  g->add_option("--seed", gen.seed, "Master seed")->required();
  g->add_option("--out", gen.out, "Output CSV (a .meta sidecar is written next to it)")->required();
  g->add_option("--config", gen.config, "Scenario key-value file for the remaining parameters");
  g->add_option("--pos-err-std", gen.pos_err_std, "Override localization error std per axis [m]");
  g->add_option("--threads", gen.threads, "Worker threads");

  TrainArgs train;
  auto* t = app.add_subcommand("train", "Fit a detector on the training part of a dataset");
  t->add_option("--detector", train.detector, "aed | ocsvm | lof | dbscan")
      ->required()
      ->check(CLI::IsMember({"aed", "ocsvm", "lof", "dbscan"}));
  t->add_option("--data", train.data, "Dataset CSV")->required();
  t->add_flag("--sorted", train.sorted, "Sort each Delta vector in descending order");
  t->add_option("--model-out", train.model_out, "Model file to write")->required();
  t->add_option("--nu", train.params.ocsvm.nu, "OCSVM nu");
  t->add_option("--lof-k", train.params.lof_k, "LOF neighbourhood size");
  t->add_option("--min-pts", train.params.dbscan.min_pts, "DBSCAN min_pts");
  t->add_option("--threads", train.params.threads, "Worker threads");

  EvaluateArgs eval;
  auto* e = app.add_subcommand("evaluate", "Score the test part of a dataset and write a metrics report");
  e->add_option("--model", eval.model, "Model file")->required();
  e->add_option("--data", eval.data, "Dataset CSV")->required();
  e->add_flag("--sorted", eval.sorted, "Sort each Delta vector in descending order");
  e->add_option("--report", eval.report, "JSON report to write")->required();
  e->add_option("--threads", eval.threads, "Worker threads");

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "Run a parameter sweep and write results.csv, aggregate.csv and plots/");
  s->add_option("--config", sweep.config, "Sweep key-value file")->required();
  s->add_option("--out-dir", sweep.out_dir, "Output directory")->required();
  s->add_option("--threads", sweep.threads, "Override the worker thread count");

  RadioMapArgs map;
  auto* r = app.add_subcommand("radiomap", "Render original, twin and difference radio maps for one scenario");
  r->add_option("--sigma", map.sigma, "Shadowing standard deviation [dB]")->required();
  r->add_option("--seed", map.seed, "Seed")->required();
  r->add_option("--resolution", map.resolution, "Raster spacing [m]")->required();
  r->add_option("--out", map.out, "Grid file to write (an .svg is written next to it)")->required();
  r->add_option("--grid", map.grid, "SU grid spacing [m]");
  r->add_flag("--no-jammer", map.no_jammer, "Leave the jammer out");
  r->add_option("--pos-err-std", map.pos_err_std, "Override localization error std per axis [m]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (g->parsed()) return run_generate(gen);
    if (t->parsed()) return run_train(train);
    if (e->parsed()) return run_evaluate(eval);
    if (s->parsed()) return run_sweep_cmd(sweep);
    if (r->parsed()) return run_radiomap(map);
  } catch (const rftwin::Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return exit_code_for(err.kind());
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitData;
  }
  return kExitConfig;
}
