#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "rftwin/error.hpp"
#include "rftwin/experiments.hpp"
#include "rftwin/random.hpp"
#include "support.hpp"

using namespace rftwin;
using rftwin::testing::TempDir;
using rftwin::testing::thrown_kind;

namespace {

// Small enough to run the full cartesian product in a unit test.
SweepSpec tiny_spec() {
  SweepSpec s;
  s.n_train = 40;
  s.n_test = 30;
  s.params.lof_k = 8;
  s.timing = false;
  return s;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string results_text(const SweepResult& r) {
  std::ostringstream out;
  write_results_csv(out, r);
  return out.str();
}

SweepRow row(double sigma, DetectorKind d, std::uint64_t seed, double auc, double f2 = 0.5) {
  SweepRow r;
  r.sigma_db = sigma;
  r.grid_m = 10;
  r.detector = d;
  r.seed = seed;
  r.auc = auc;
  r.precision = 0.5;
  r.recall = 0.5;
  r.f2 = f2;
  return r;
}

}  // namespace

TEST(SweepSpecTest, DefaultsAndValidation) {
  const SweepSpec s;
  EXPECT_EQ(s.sigma_list.size(), 7u);
  EXPECT_EQ(s.grid_list, (std::vector<double>{5, 10, 15}));
  EXPECT_EQ(s.seeds.size(), 3u);
  EXPECT_NO_THROW(validate(s));
  const auto bad = [](auto mutate) {
    SweepSpec s;
    mutate(s);
    return thrown_kind([&] { validate(s); });
  };
  EXPECT_EQ(bad([](SweepSpec& s) { s.sigma_list.clear(); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(bad([](SweepSpec& s) { s.seeds = {1, 1}; }), ErrorKind::InvalidConfig);
  EXPECT_EQ(bad([](SweepSpec& s) { s.detectors.clear(); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(bad([](SweepSpec& s) { s.grid_list = {50}; }), ErrorKind::InvalidConfig);
  EXPECT_EQ(bad([](SweepSpec& s) { s.anomaly_fraction = 2; }), ErrorKind::InvalidConfig);
}

TEST(SweepSpecTest, ParsesKeyValues) {
  std::istringstream in(
      "sigma_list = 0, 2\ngrid_list = 10\ndetectors = aed, lof\nseeds = 4,5\nn_train = 100\nn_test = 60\n"
      "sorting = true\nthreads = 2\ntiming = false\nlof_k = 12\nocsvm_gamma = 0.25\npos_err_std = 0.5\n"
      "dbscan_eps = 2.5\n");
  const auto s = sweep_spec_from(parse_key_values(in, "spec"));
  EXPECT_EQ(s.sigma_list, (std::vector<double>{0, 2}));
  EXPECT_EQ(s.detectors, (std::vector<DetectorKind>{DetectorKind::Aed, DetectorKind::Lof}));
  EXPECT_EQ(s.seeds, (std::vector<std::uint64_t>{4, 5}));
  EXPECT_EQ(s.n_train, 100u);
  EXPECT_TRUE(s.sorting);
  EXPECT_EQ(s.threads, 2u);
  EXPECT_FALSE(s.timing);
  EXPECT_EQ(s.params.lof_k, 12u);
  EXPECT_EQ(s.params.ocsvm.gamma_mode, GammaMode::Fixed);
  EXPECT_EQ(s.params.ocsvm.gamma, 0.25);
  EXPECT_EQ(s.params.dbscan.eps_mode, EpsMode::Fixed);
  EXPECT_EQ(s.base.pos_err_std, 0.5);

  std::istringstream unknown("sigmas = 1\n");
  EXPECT_EQ(thrown_kind([&] { sweep_spec_from(parse_key_values(unknown, "spec")); }), ErrorKind::InvalidConfig);
  std::istringstream bad_detector("detectors = aed, svm\n");
  EXPECT_EQ(thrown_kind([&] { sweep_spec_from(parse_key_values(bad_detector, "spec")); }), ErrorKind::InvalidConfig);
}

TEST(Sweep, SigmaSweepCardinalityAndOrder) {
  auto spec = tiny_spec();
  spec.grid_list = {10};
  const auto r = run_sweep(spec);
  ASSERT_EQ(r.rows.size(), 7u * 3u * 4u);
  EXPECT_EQ(r.failed_count(), 0u);
  for (std::size_t i = 1; i < r.rows.size(); ++i) {
    const auto& a = r.rows[i - 1];
    const auto& b = r.rows[i];
    EXPECT_TRUE(std::tuple(a.sigma_db, a.grid_m, static_cast<int>(a.detector), a.seed) <
                std::tuple(b.sigma_db, b.grid_m, static_cast<int>(b.detector), b.seed));
  }
  for (const auto& row : r.rows) {
    for (double m : {row.auc, row.precision, row.recall, row.f2}) {
      EXPECT_GE(m, 0.0);
      EXPECT_LE(m, 1.0);
    }
    EXPECT_EQ(row.fit_ms, 0.0);
    EXPECT_FALSE(row.roc.points.empty());
    EXPECT_LE(row.roc.points.size(), spec.roc_points);
  }
}

TEST(Sweep, FullDefaultGridCardinality) {
  const auto r = run_sweep(tiny_spec());
  EXPECT_EQ(r.rows.size(), 7u * 3u * 3u * 4u);
  EXPECT_EQ(r.failed_count(), 0u);
}

TEST(Sweep, PerfectTwinGivesAedAucOne) {
  auto spec = tiny_spec();
  spec.sigma_list = {0};
  spec.grid_list = {10};
  spec.detectors = {DetectorKind::Aed};
  spec.base.pos_err_std = 0;
  for (const auto& row : run_sweep(spec).rows) EXPECT_EQ(row.auc, 1.0);
}

TEST(Sweep, DeterministicAcrossThreadCounts) {
  auto spec = tiny_spec();
  spec.sigma_list = {0, 3};
  spec.grid_list = {10, 15};
  spec.threads = 1;
  const auto a = results_text(run_sweep(spec));
  spec.threads = 3;
  const auto b = results_text(run_sweep(spec));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.substr(0, a.find('\n')), "sigma_db,grid_m,detector,seed,auc,precision,recall,f2,fit_ms,score_ms");
}

TEST(Sweep, FailingDetectorMarkedOthersContinue) {
  auto spec = tiny_spec();
  spec.sigma_list = {2};
  spec.grid_list = {10};
  spec.params.lof_k = 1000;  // larger than the training set
  const auto r = run_sweep(spec);
  ASSERT_EQ(r.rows.size(), 12u);
  EXPECT_EQ(r.failed_count(), 3u);
  for (const auto& row : r.rows) {
    EXPECT_EQ(row.failed, row.detector == DetectorKind::Lof);
    if (row.failed) {
      EXPECT_FALSE(row.error.empty());
    }
  }
  const auto text = results_text(r);
  EXPECT_NE(text.find("lof,1,nan,nan,nan,nan,nan,nan"), std::string::npos);
  const auto agg = aggregate(r);
  for (const auto& a : agg) {
    if (a.detector == DetectorKind::Lof) {
      EXPECT_EQ(a.n_seeds, 0u);
      EXPECT_EQ(a.n_failed, 3u);
    }
  }
}

TEST(Sweep, SortingFlagKeepsAedIdentical) {
  auto spec = tiny_spec();
  spec.sigma_list = {2};
  spec.grid_list = {10};
  spec.detectors = {DetectorKind::Aed};
  const auto plain = run_sweep(spec);
  spec.sorting = true;
  const auto sorted = run_sweep(spec);
  EXPECT_EQ(results_text(plain), results_text(sorted));
}

TEST(Aggregate, MeanAndSampleStd) {
  EXPECT_EQ(mean_std({0.4}).std, 0.0);
  EXPECT_NEAR(mean_std({0.6, 0.8}).mean, 0.7, 1e-15);
  EXPECT_NEAR(mean_std({0.6, 0.8}).std, std::sqrt(0.02), 1e-15);
  EXPECT_NEAR(mean_std({1, 2, 3, 4}).std, std::sqrt(5.0 / 3.0), 1e-15);

  SweepResult r;
  r.rows = {row(0, DetectorKind::Aed, 1, 0.6), row(0, DetectorKind::Aed, 2, 0.8), row(0, DetectorKind::Lof, 1, 0.9),
            row(0, DetectorKind::Lof, 2, 0.9), row(2, DetectorKind::Aed, 1, 0.5)};
  const auto agg = aggregate(r);
  ASSERT_EQ(agg.size(), 3u);
  EXPECT_NEAR(agg[0].auc.mean, 0.7, 1e-15);
  EXPECT_EQ(agg[0].n_seeds, 2u);
  EXPECT_EQ(agg[1].detector, DetectorKind::Lof);
  EXPECT_EQ(agg[1].auc.mean, 0.9);
  EXPECT_EQ(agg[1].auc.std, 0.0);
  EXPECT_EQ(agg[2].sigma_db, 2.0);
  EXPECT_EQ(agg[2].auc.std, 0.0);

  std::ostringstream out;
  write_aggregate_csv(out, agg);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')),
            "sigma_db,grid_m,detector,n_seeds,n_failed,auc_mean,auc_std,precision_mean,precision_std,"
            "recall_mean,recall_std,f2_mean,f2_std");
}

TEST(Plots, EmptyTableWritesNothing) {
  TempDir dir;
  const auto out = render_plots({}, {}, dir / "plots");
  EXPECT_TRUE(out.files.empty());
  EXPECT_FALSE(out.notice.empty());
  EXPECT_FALSE(std::filesystem::exists(dir / "plots"));
}

TEST(Plots, SingleScenarioSingleRocFile) {
  TempDir dir;
  auto spec = tiny_spec();
  spec.sigma_list = {1};
  spec.grid_list = {10};
  spec.detectors = {DetectorKind::Aed};
  const auto r = run_sweep(spec);
  const auto out = render_plots(r, aggregate(r), dir.path());
  EXPECT_TRUE(out.notice.empty());
  std::vector<std::filesystem::path> rocs;
  for (const auto& f : out.files) {
    EXPECT_TRUE(std::filesystem::exists(f));
    if (f.filename().string().rfind("roc_", 0) == 0) rocs.push_back(f);
  }
  ASSERT_EQ(rocs.size(), 1u);
  const auto svg = slurp(rocs[0]);
  std::size_t curves = 0;
  for (auto pos = svg.find("<polyline"); pos != std::string::npos; pos = svg.find("<polyline", pos + 1)) ++curves;
  EXPECT_EQ(curves, 1u);
  EXPECT_NE(svg.find("stroke-dasharray"), std::string::npos);  // no-skill diagonal
}

TEST(Sweep, DirectoryOutputs) {
  TempDir dir;
  auto spec = tiny_spec();
  spec.sigma_list = {0, 2};
  spec.grid_list = {15};
  run_sweep_to_directory(spec, dir / "out");
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "results.csv"));
  EXPECT_TRUE(std::filesystem::exists(dir / "out" / "aggregate.csv"));
  EXPECT_TRUE(std::filesystem::is_directory(dir / "out" / "plots"));
  const auto text = slurp(dir / "out" / "results.csv");
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 1 + 2 * 3 * 4);
}

TEST(RadioMapTest, PerfectTwinWithoutJammerHasZeroDifference) {
  ScenarioConfig c;
  c.pos_err_std = 0;
  auto rng = make_substream(1, StreamPhase::RadioMap, 0);
  const auto s = sample_scenario(c, false, rng);
  const auto map = compute_radio_map(c, s, 1.0, rng);
  EXPECT_EQ(map.nx, 41u);
  EXPECT_EQ(map.original.size(), 41u * 41u);
  EXPECT_EQ(map.twin.size(), map.original.size());
  for (double d : map.difference) EXPECT_EQ(d, 0.0);
}

TEST(RadioMapTest, LargestDeviationNextToJammer) {
  ScenarioConfig c;
  c.pos_err_std = 0;
  for (std::uint64_t i = 0; i < 10; ++i) {
    auto rng = make_substream(2, StreamPhase::RadioMap, i);
    const auto s = sample_scenario(c, true, rng);
    const auto map = compute_radio_map(c, s, 0.5, rng);
    const auto it = std::max_element(map.difference.begin(), map.difference.end(),
                                     [](double a, double b) { return std::abs(a) < std::abs(b); });
    const auto k = static_cast<std::size_t>(it - map.difference.begin());
    const Point2D at{static_cast<double>(k % map.nx) * 0.5, static_cast<double>(k / map.nx) * 0.5};
    EXPECT_LE(distance(at, s.jammer->position), 0.5) << "sample " << i;
  }
}

TEST(RadioMapTest, ShadowedRasterLimitsAndFiles) {
  TempDir dir;
  ScenarioConfig c;
  c.sigma_shadow = 2;
  auto rng = make_substream(3, StreamPhase::RadioMap, 0);
  const auto s = sample_scenario(c, true, rng);
  EXPECT_EQ(thrown_kind([&] { compute_radio_map(c, s, 0.5, rng); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(thrown_kind([&] { raster_side(40, 0); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(raster_side(40, 0.7), 58u);
  const auto map = compute_radio_map(c, s, 1.0, rng);
  bool any_nonzero = false;
  for (double d : map.difference) any_nonzero |= d != 0.0;
  EXPECT_TRUE(any_nonzero);
  const auto files = write_radio_map(map, dir / "map.txt");
  ASSERT_EQ(files.size(), 2u);
  for (const auto& f : files) EXPECT_GT(std::filesystem::file_size(f), 0u);
  EXPECT_EQ(slurp(dir / "map.txt").rfind("# rftwin radio map v1", 0), 0u);
}
