#include "rftwin/experiments.hpp"

#include <algorithm>
#include <optional>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <tuple>

#include "rftwin/error.hpp"
#include "rftwin/key_values.hpp"
#include "rftwin/parallel.hpp"

namespace rftwin {

namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

template <typename T, typename Parse>
std::vector<T> parse_list(const std::string& text, Parse parse) {
  std::vector<T> out;
  for (const auto& item : split_list(text)) out.push_back(parse(item));
  return out;
}

}  // namespace

void validate(const SweepSpec& spec) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::InvalidConfig, what);
  };
  require(!spec.sigma_list.empty(), "sigma_list must not be empty");
  require(!spec.grid_list.empty(), "grid_list must not be empty");
  require(!spec.detectors.empty(), "detectors must not be empty");
  require(!spec.seeds.empty(), "seeds must not be empty");
  require(std::set<std::uint64_t>(spec.seeds.begin(), spec.seeds.end()).size() == spec.seeds.size(),
          "seeds must be distinct");
  require(spec.n_train >= 1 && spec.n_test >= 1, "n_train and n_test must be >= 1");
  require(spec.anomaly_fraction >= 0.0 && spec.anomaly_fraction <= 1.0, "anomaly_fraction must lie in [0, 1]");
  for (const double s : spec.sigma_list) require(std::isfinite(s) && s >= 0, "sigma values must be >= 0");
  for (const double g : spec.grid_list) {
    require(std::isfinite(g) && g > 0 && g <= spec.base.area_side, "grid sizes must lie in (0, area_side]");
  }
  validate(spec.base);
}

SweepSpec sweep_spec_from(const KeyValues& kv) {
  SweepSpec spec;
  auto& p = spec.params;
  for (const auto& [key, value] : kv.entries()) {
    if (key == "sigma_list") {
      spec.sigma_list = parse_list<double>(value, [&](const std::string& s) { return parse_double(s, key); });
    } else if (key == "grid_list") {
      spec.grid_list = parse_list<double>(value, [&](const std::string& s) { return parse_double(s, key); });
    } else if (key == "detectors") {
      spec.detectors = parse_list<DetectorKind>(value, [](const std::string& s) { return parse_detector(s); });
    } else if (key == "seeds") {
      spec.seeds = parse_list<std::uint64_t>(value, [&](const std::string& s) { return parse_u64(s, key); });
    } else if (key == "n_train") {
      spec.n_train = parse_u64(value, key);
    } else if (key == "n_test") {
      spec.n_test = parse_u64(value, key);
    } else if (key == "anomaly_fraction") {
      spec.anomaly_fraction = parse_double(value, key);
    } else if (key == "sorting") {
      spec.sorting = parse_bool(value, key);
    } else if (key == "threads") {
      spec.threads = static_cast<unsigned>(parse_u64(value, key));
    } else if (key == "timing") {
      spec.timing = parse_bool(value, key);
    } else if (key == "roc_points") {
      spec.roc_points = parse_u64(value, key);
    } else if (key == "aed_percentile") {
      p.aed_percentile = parse_double(value, key);
    } else if (key == "ocsvm_nu") {
      p.ocsvm.nu = parse_double(value, key);
    } else if (key == "ocsvm_gamma") {
      if (value == "scale") {
        p.ocsvm.gamma_mode = GammaMode::Scale;
      } else {
        p.ocsvm.gamma_mode = GammaMode::Fixed;
        p.ocsvm.gamma = parse_double(value, key);
      }
    } else if (key == "ocsvm_tolerance") {
      p.ocsvm.tolerance = parse_double(value, key);
    } else if (key == "ocsvm_max_iterations") {
      p.ocsvm.max_iterations = parse_u64(value, key);
    } else if (key == "lof_k") {
      p.lof_k = parse_u64(value, key);
    } else if (key == "lof_threshold") {
      p.lof_threshold = parse_double(value, key);
    } else if (key == "dbscan_min_pts") {
      p.dbscan.min_pts = parse_u64(value, key);
    } else if (key == "dbscan_eps") {
      if (value == "kdist-percentile") {
        p.dbscan.eps_mode = EpsMode::KdistPercentile;
      } else {
        p.dbscan.eps_mode = EpsMode::Fixed;
        p.dbscan.eps = parse_double(value, key);
      }
    } else if (key == "dbscan_eps_percentile") {
      p.dbscan.eps_percentile = parse_double(value, key);
    } else if (!set_config_field(spec.base, key, value)) {
      throw Error(ErrorKind::InvalidConfig, "unknown sweep key '" + key + "'");
    }
  }
  validate(spec);
  return spec;
}

SweepSpec load_sweep_spec(const std::filesystem::path& path) { return sweep_spec_from(read_key_values(path)); }

std::size_t SweepResult::failed_count() const {
  return static_cast<std::size_t>(std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.failed; }));
}

namespace {

struct Cell {
  double sigma;
  double grid;
  std::uint64_t seed;
};

std::vector<SweepRow> run_cell(const SweepSpec& spec, const Cell& cell) {
  std::vector<SweepRow> rows;
  for (const auto kind : spec.detectors) {
    SweepRow row;
    row.sigma_db = cell.sigma;
    row.grid_m = cell.grid;
    row.detector = kind;
    row.seed = cell.seed;
    rows.push_back(row);
  }
  auto fail_all = [&](const std::string& what, std::optional<ErrorKind> kind) {
    for (auto& r : rows) {
      r.failed = true;
      r.error = what;
      r.error_kind = kind;
    }
  };

  Dataset ds;
  try {
    ScenarioConfig config = spec.base;
    config.sigma_shadow = cell.sigma;
    config.grid_size = cell.grid;
    config.master_seed = cell.seed;
    ds = generate(config, spec.n_train, spec.n_test, spec.anomaly_fraction, 1);
    if (spec.sorting) ds = sort_descending(ds);
  } catch (const Error& e) {
    fail_all(e.what(), e.kind());
    return rows;
  } catch (const std::exception& e) {
    fail_all(e.what(), std::nullopt);
    return rows;
  }
  const FeatureMatrix train = to_matrix(ds.train);
  const FeatureMatrix test = to_matrix(ds.test);
  const std::vector<Label> labels = labels_of(ds.test);

  DetectorParams params = spec.params;
  params.threads = 1;
  for (auto& row : rows) {
    try {
      const auto fit_start = Clock::now();
      const DetectorModel model = fit_detector(row.detector, train, params);
      row.fit_ms = spec.timing ? elapsed_ms(fit_start) : 0.0;

      const auto score_start = Clock::now();
      const auto scores = score_batch(model, test, 1);
      row.score_ms = spec.timing ? elapsed_ms(score_start) : 0.0;

      std::vector<Label> predictions(scores.size());
      for (std::size_t i = 0; i < scores.size(); ++i) {
        predictions[i] = is_anomalous_score(model, scores[i]) ? Label::Anomaly : Label::Normal;
      }
      const auto report = evaluate_metrics(labels, scores, predictions);
      row.auc = report.auc_undefined ? std::nan("") : report.auc;
      row.precision = report.precision;
      row.recall = report.recall;
      row.f2 = report.f2;
      row.roc = thin_roc(report.roc, spec.roc_points);
    } catch (const Error& e) {
      row.failed = true;
      row.error = e.what();
      row.error_kind = e.kind();
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = e.what();
    }
  }
  return rows;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  validate(spec);
  auto sigmas = spec.sigma_list;
  auto grids = spec.grid_list;
  auto seeds = spec.seeds;
  std::sort(sigmas.begin(), sigmas.end());
  std::sort(grids.begin(), grids.end());
  std::sort(seeds.begin(), seeds.end());

  std::vector<Cell> cells;
  for (const double s : sigmas) {
    for (const double g : grids) {
      for (const auto seed : seeds) cells.push_back({s, g, seed});
    }
  }
  std::vector<std::vector<SweepRow>> per_cell(cells.size());
  parallel_for(cells.size(), spec.threads, [&](std::size_t c) { per_cell[c] = run_cell(spec, cells[c]); });

  SweepResult result;
  for (auto& rows : per_cell) {
    for (auto& r : rows) result.rows.push_back(std::move(r));
  }
  auto detector_rank = [](DetectorKind k) { return static_cast<int>(k); };
  std::stable_sort(result.rows.begin(), result.rows.end(), [&](const SweepRow& a, const SweepRow& b) {
    return std::make_tuple(a.sigma_db, a.grid_m, detector_rank(a.detector), a.seed) <
           std::make_tuple(b.sigma_db, b.grid_m, detector_rank(b.detector), b.seed);
  });
  return result;
}

Stat mean_std(const std::vector<double>& values) {
  Stat s;
  if (values.empty()) return {std::nan(""), std::nan("")};
  for (const double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

std::vector<AggregateRow> aggregate(const SweepResult& result) {
  using Key = std::tuple<double, double, int>;
  struct Acc {
    std::vector<double> auc, precision, recall, f2;
    std::size_t failed = 0;
  };
  std::map<Key, Acc> groups;
  for (const auto& r : result.rows) {
    auto& acc = groups[{r.sigma_db, r.grid_m, static_cast<int>(r.detector)}];
    if (r.failed) {
      ++acc.failed;
      continue;
    }
    acc.auc.push_back(r.auc);
    acc.precision.push_back(r.precision);
    acc.recall.push_back(r.recall);
    acc.f2.push_back(r.f2);
  }
  std::vector<AggregateRow> out;
  for (const auto& [key, acc] : groups) {
    AggregateRow row;
    row.sigma_db = std::get<0>(key);
    row.grid_m = std::get<1>(key);
    row.detector = static_cast<DetectorKind>(std::get<2>(key));
    row.n_seeds = acc.auc.size();
    row.n_failed = acc.failed;
    row.auc = mean_std(acc.auc);
    row.precision = mean_std(acc.precision);
    row.recall = mean_std(acc.recall);
    row.f2 = mean_std(acc.f2);
    out.push_back(row);
  }
  return out;
}

void write_results_csv(std::ostream& out, const SweepResult& result) {
  out << "sigma_db,grid_m,detector,seed,auc,precision,recall,f2,fit_ms,score_ms\n";
  const std::string nan = "nan";
  for (const auto& r : result.rows) {
    out << format_double(r.sigma_db) << ',' << format_double(r.grid_m) << ',' << to_string(r.detector) << ','
        << r.seed << ',';
    if (r.failed) {
      out << nan << ',' << nan << ',' << nan << ',' << nan << ',' << nan << ',' << nan << '\n';
      continue;
    }
    out << format_double(r.auc) << ',' << format_double(r.precision) << ',' << format_double(r.recall) << ','
        << format_double(r.f2) << ',' << format_double(r.fit_ms) << ',' << format_double(r.score_ms) << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
  out << "sigma_db,grid_m,detector,n_seeds,n_failed,auc_mean,auc_std,precision_mean,precision_std,"
         "recall_mean,recall_std,f2_mean,f2_std\n";
  for (const auto& r : rows) {
    out << format_double(r.sigma_db) << ',' << format_double(r.grid_m) << ',' << to_string(r.detector) << ','
        << r.n_seeds << ',' << r.n_failed << ',' << format_double(r.auc.mean) << ',' << format_double(r.auc.std)
        << ',' << format_double(r.precision.mean) << ',' << format_double(r.precision.std) << ','
        << format_double(r.recall.mean) << ',' << format_double(r.recall.std) << ',' << format_double(r.f2.mean)
        << ',' << format_double(r.f2.std) << '\n';
  }
}

SweepResult run_sweep_to_directory(const SweepSpec& spec, const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create '" + out_dir.string() + "': " + ec.message());

  auto result = run_sweep(spec);
  const auto table = aggregate(result);
  auto write = [&](const std::string& name, auto&& writer) {
    const auto path = out_dir / name;
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    writer(out);
    if (!out) throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
  };
  write("results.csv", [&](std::ostream& o) { write_results_csv(o, result); });
  write("aggregate.csv", [&](std::ostream& o) { write_aggregate_csv(o, table); });
  render_plots(result, table, out_dir / "plots");
  return result;
}

}  // namespace rftwin
