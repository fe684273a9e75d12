#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rftwin/dataset.hpp"
#include "rftwin/detectors.hpp"
#include "rftwin/error.hpp"
#include "rftwin/metrics.hpp"
#include "rftwin/scenario.hpp"

namespace rftwin {

struct SweepSpec {
  std::vector<double> sigma_list{0, 1, 2, 3, 4, 5, 6};
  std::vector<double> grid_list{5, 10, 15};
  std::vector<DetectorKind> detectors{DetectorKind::Aed, DetectorKind::Ocsvm, DetectorKind::Lof,
                                      DetectorKind::Dbscan};
  std::vector<std::uint64_t> seeds{1, 2, 3};
  std::size_t n_train = 4000;  // desk-scale preset; 10000 reproduces the full protocol
  std::size_t n_test = 4000;
  double anomaly_fraction = 0.5;
  bool sorting = false;
  // Template for every cell; sigma_shadow, grid_size and master_seed are
  // overwritten per cell.
  ScenarioConfig base;
  DetectorParams params;
  unsigned threads = 1;
  // When false, fit_ms/score_ms are written as 0 so that results.csv is
  // byte-reproducible.
  bool timing = true;
  std::size_t roc_points = 256;  // per row, kept for plotting
};

void validate(const SweepSpec& spec);
/// Flat key-value file: sweep keys (sigma_list, grid_list, detectors, seeds,
/// n_train, n_test, anomaly_fraction, sorting, threads, timing, detector
/// parameters) plus any ScenarioConfig key.
SweepSpec sweep_spec_from(const KeyValues& kv);
SweepSpec load_sweep_spec(const std::filesystem::path& path);

struct SweepRow {
  double sigma_db = 0.0;
  double grid_m = 0.0;
  DetectorKind detector = DetectorKind::Aed;
  std::uint64_t seed = 0;
  double auc = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f2 = 0.0;
  double fit_ms = 0.0;
  double score_ms = 0.0;
  bool failed = false;
  std::string error;
  std::optional<ErrorKind> error_kind;  // unset for non-library exceptions
  RocCurve roc;  // thinned
};

struct SweepResult {
  std::vector<SweepRow> rows;  // ordered by (sigma, grid, detector, seed)

  std::size_t failed_count() const;
};

/// Generates one dataset per (sigma, grid, seed) cell, fits each detector on
/// its training part and scores the test part. A failing cell or detector is
/// marked in its rows; the sweep continues.
SweepResult run_sweep(const SweepSpec& spec);

struct Stat {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation; 0 for one value
};

struct AggregateRow {
  double sigma_db = 0.0;
  double grid_m = 0.0;
  DetectorKind detector = DetectorKind::Aed;
  std::size_t n_seeds = 0;   // successful rows
  std::size_t n_failed = 0;
  Stat auc, precision, recall, f2;
};

/// Mean and std over seeds per (sigma, grid, detector), in key order.
std::vector<AggregateRow> aggregate(const SweepResult& result);

Stat mean_std(const std::vector<double>& values);

/// Header: sigma_db,grid_m,detector,seed,auc,precision,recall,f2,fit_ms,score_ms
void write_results_csv(std::ostream& out, const SweepResult& result);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

struct PlotOutput {
  std::vector<std::filesystem::path> files;
  std::string notice;  // set when nothing was drawn
};

/// SVG charts: ROC overlay per (sigma, grid), AUC versus sigma per grid and
/// F2/recall bars per grid.
PlotOutput render_plots(const SweepResult& result, const std::vector<AggregateRow>& table,
                        const std::filesystem::path& out_dir);

/// Runs the sweep and writes results.csv, aggregate.csv and plots/.
SweepResult run_sweep_to_directory(const SweepSpec& spec, const std::filesystem::path& out_dir);

// ---------------------------------------------------------------------------
// Radio maps

struct RadioMap {
  double area_side = 0.0;
  double resolution = 0.0;
  std::size_t nx = 0;  // raster is nx by nx, row-major from y = 0
  std::vector<double> original;    // dBm
  std::vector<double> twin;        // dBm
  std::vector<double> difference;  // dB
  ScenarioInstance scenario;
};

/// Largest shadowed raster; the shadowing Cholesky factor is dense.
inline constexpr std::size_t kMaxShadowedRasterPoints = 4096;

std::size_t raster_side(double area_side, double resolution);

/// Original, twin and difference rasters over the whole area for one
/// scenario; shadowing is drawn over the raster points.
RadioMap compute_radio_map(const ScenarioConfig& config, const ScenarioInstance& scenario, double resolution,
                           RandomStream& rng);

/// Writes the text grid to `out_path` and an SVG heatmap to `out_path`.svg.
std::vector<std::filesystem::path> write_radio_map(const RadioMap& map, const std::filesystem::path& out_path);

std::vector<std::filesystem::path> render_radio_map(const ScenarioConfig& config, const ScenarioInstance& scenario,
                                                    double resolution, const std::filesystem::path& out_path,
                                                    RandomStream& rng);

}  // namespace rftwin
