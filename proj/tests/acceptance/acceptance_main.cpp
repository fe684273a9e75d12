// Acceptance suite: one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria. Pass criterion numbers as arguments to run a
// subset, e.g. `rftwin_acceptance 1 2 3`.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "rftwin/channel.hpp"
#include "rftwin/dataset.hpp"
#include "rftwin/detectors.hpp"
#include "rftwin/experiments.hpp"
#include "rftwin/metrics.hpp"
#include "rftwin/random.hpp"
#include "rftwin/scenario.hpp"

using namespace rftwin;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

std::string results_text(const SweepResult& r) {
  std::ostringstream out;
  write_results_csv(out, r);
  return out.str();
}

// Shared sweeps, computed on first use.
class Sweeps {
 public:
  // Default protocol at desk scale, sorting off.
  const SweepResult& main() {
    if (!main_) {
      const auto t = Clock::now();
      main_ = run_sweep(main_spec(1));
      main_seconds_ = seconds_since(t);
    }
    return *main_;
  }
  double main_seconds() const { return main_seconds_; }

  const SweepResult& main_parallel() {
    if (!parallel_) parallel_ = run_sweep(main_spec(4));
    return *parallel_;
  }

  // Sorted features, sigma in {0, 2, 4}, every grid.
  const SweepResult& sorted() {
    if (!sorted_) {
      auto spec = main_spec(1);
      spec.sigma_list = {0, 2, 4};
      spec.detectors = {DetectorKind::Aed, DetectorKind::Dbscan};
      spec.sorting = true;
      sorted_ = run_sweep(spec);
    }
    return *sorted_;
  }

  static SweepSpec main_spec(unsigned threads) {
    SweepSpec spec;  // sigma 0..6, grids 5/10/15, seeds 1..3, 4000/4000
    spec.timing = false;
    spec.threads = threads;
    return spec;
  }

 private:
  std::optional<SweepResult> main_, parallel_, sorted_;
  double main_seconds_ = 0.0;
};

struct Key {
  double sigma;
  double grid;
  DetectorKind detector;
  auto operator<=>(const Key&) const = default;
};

std::map<Key, AggregateRow> table_of(const SweepResult& r) {
  std::map<Key, AggregateRow> t;
  for (const auto& a : aggregate(r)) t[{a.sigma_db, a.grid_m, a.detector}] = a;
  return t;
}

std::string failures_note(const SweepResult& r) {
  return r.failed_count() ? " (" + std::to_string(r.failed_count()) + " failed rows)" : "";
}

// ---------------------------------------------------------------------------

Outcome perfect_twin() {
  const auto t = Clock::now();
  ScenarioConfig c;
  c.sigma_shadow = 0;
  c.pos_err_std = 0;
  const auto ds = generate(c, 1000, 1000, 0.5);
  bool h0_zero = true, h1_positive = true;
  for (const auto& s : ds.test) {
    if (s.label == Label::Normal) {
      h0_zero &= std::all_of(s.features.begin(), s.features.end(), [](double v) { return v == 0.0; });
    } else {
      h1_positive &= *std::min_element(s.features.begin(), s.features.end()) > 0.0;
    }
  }
  const auto model = fit_detector(DetectorKind::Aed, to_matrix(ds.train));
  const auto scores = score_batch(model, to_matrix(ds.test));
  const double auc = roc_curve(labels_of(ds.test), scores).auc;
  const double secs = seconds_since(t);
  return {h0_zero && h1_positive && auc == 1.0 && secs < 5.0,
          "H0 delta == 0: " + std::string(h0_zero ? "yes" : "no") + ", H1 min delta > 0: " +
              (h1_positive ? "yes" : "no") + ", AED AUC = " + fmt(auc, 12) + ", " + fmt(secs, 2) + " s"};
}

// Brute-force oracles: confusion recount and pairwise AUC with tie half-credit.
Outcome metric_oracles() {
  std::mt19937_64 rng(20240611);
  double worst = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t n = 2 + rng() % 1999;
    std::vector<Label> labels(n), preds(n);
    std::vector<double> scores(n);
    std::bernoulli_distribution pos(0.1 + 0.8 * std::uniform_real_distribution<double>()(rng));
    std::normal_distribution<double> z;
    const bool coarse = inst % 3 == 0;
    for (std::size_t i = 0; i < n; ++i) {
      labels[i] = pos(rng) ? Label::Anomaly : Label::Normal;
      scores[i] = z(rng) + (labels[i] == Label::Anomaly ? 0.8 : 0.0);
      if (coarse) scores[i] = std::round(scores[i] * 4) / 4;
      preds[i] = scores[i] > 0.4 ? Label::Anomaly : Label::Normal;
    }
    labels[0] = Label::Anomaly;
    labels[1] = Label::Normal;
    const auto report = evaluate_metrics(labels, scores, preds);

    std::uint64_t tp = 0, fp = 0, fn = 0, twice_wins = 0, npos = 0, nneg = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool a = labels[i] == Label::Anomaly, p = preds[i] == Label::Anomaly;
      tp += a && p;
      fp += !a && p;
      fn += a && !p;
      npos += a;
      nneg += !a;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (labels[i] != Label::Anomaly) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (labels[j] != Label::Normal) continue;
        twice_wins += scores[i] > scores[j] ? 2 : scores[i] == scores[j] ? 1 : 0;
      }
    }
    const double p = tp + fp ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
    const double r = static_cast<double>(tp) / static_cast<double>(tp + fn);
    const double f2 = p + r > 0 ? 5.0 * p * r / (4.0 * p + r) : 0.0;
    const double f05 = p + r > 0 ? 1.25 * p * r / (0.25 * p + r) : 0.0;
    const double auc = static_cast<double>(twice_wins) / (2.0 * static_cast<double>(npos) * static_cast<double>(nneg));
    worst = std::max({worst, std::abs(report.precision - p), std::abs(report.recall - r), std::abs(report.f2 - f2),
                      std::abs(f_beta(report.precision, report.recall, 0.5) - f05), std::abs(report.auc - auc)});
  }
  return {worst <= 1e-12, "max abs error over 100 instances = " + fmt(worst * 1e12, 3) + "e-12"};
}

Outcome shadowing_statistics() {
  const double sigma = 2.0;
  const auto su = build_su_grid(40, 10);
  const ShadowingField field(su, sigma, 1.0);
  const auto n = static_cast<Eigen::Index>(su.size());
  const int draws = 100000;
  Eigen::MatrixXd outer = Eigen::MatrixXd::Zero(n, n);
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(n);
  auto rng = make_substream(77, StreamPhase::Synthetic, 0);
  for (int i = 0; i < draws; ++i) {
    const Eigen::VectorXd x = field.sample(1, rng).row(0).transpose();
    sum += x;
    outer += x * x.transpose();
  }
  const Eigen::VectorXd mean = sum / draws;
  const Eigen::MatrixXd cov = (outer - draws * mean * mean.transpose()) / (draws - 1);
  double worst_cov = 0.0, worst_std = 0.0;
  for (Eigen::Index k = 0; k < n; ++k) {
    worst_std = std::max(worst_std, std::abs(std::sqrt(cov(k, k)) - sigma) / sigma);
    for (Eigen::Index l = 0; l < n; ++l) {
      const double model = sigma * sigma * std::exp(-distance(su[k], su[l]) / 1.0);
      worst_cov = std::max(worst_cov, std::abs(cov(k, l) - model));
    }
  }
  return {worst_cov <= 0.05 * sigma * sigma && worst_std <= 0.02,
          "max |cov - model| = " + fmt(worst_cov) + " (limit " + fmt(0.05 * sigma * sigma, 2) +
              "), max std rel. error = " + fmt(100 * worst_std, 2) + "%"};
}

Outcome aed_high_noise() {
  const auto t = Clock::now();
  SweepSpec spec;
  spec.sigma_list = {6};
  spec.grid_list = {10};
  spec.detectors = {DetectorKind::Aed};
  spec.n_train = 10000;
  spec.n_test = 10000;
  spec.timing = false;
  const auto r = run_sweep(spec);
  const auto a = aggregate(r).front();
  const double secs = seconds_since(t);
  return {r.failed_count() == 0 && a.auc.mean > 0.65 && secs < 600,
          "AED mean AUC at sigma 6 dB, grid 10 m, 10000/10000, 3 seeds = " + fmt(a.auc.mean) + " (std " +
              fmt(a.auc.std) + "), " + fmt(secs, 1) + " s"};
}

Outcome lof_leads_at_zero_noise(Sweeps& s) {
  const auto t = table_of(s.main());
  const double lof = t.at({0, 10, DetectorKind::Lof}).auc.mean;
  bool pass = s.main().failed_count() == 0;
  std::string detail = "sigma 0 dB, grid 10 m mean AUC: lof " + fmt(lof);
  for (auto k : {DetectorKind::Aed, DetectorKind::Ocsvm, DetectorKind::Dbscan}) {
    const double other = t.at({0, 10, k}).auc.mean;
    pass &= lof >= other - 0.01;
    detail += ", " + std::string(to_string(k)) + " " + fmt(other);
  }
  return {pass, detail + failures_note(s.main())};
}

Outcome monotone_degradation(Sweeps& s) {
  const auto t = table_of(s.main());
  bool pass = s.main().failed_count() == 0;
  std::string detail = "grid 10 m mean AUC at sigma 0/2/4/6:";
  for (auto k : kAllDetectors) {
    detail += " " + std::string(to_string(k));
    double prev = 2.0;
    for (double sigma : {0.0, 2.0, 4.0, 6.0}) {
      const double v = t.at({sigma, 10, k}).auc.mean;
      pass &= v <= prev + 0.02;
      prev = v;
      detail += (sigma == 0.0 ? " " : "/") + fmt(v, 3);
    }
    detail += ";";
  }
  return {pass, detail + failures_note(s.main())};
}

Outcome grid_density(Sweeps& s) {
  const auto t = table_of(s.main());
  bool pass = s.main().failed_count() == 0;
  std::string detail = "sigma 2 dB mean AUC grid 5 m vs 10 m:";
  for (auto k : kAllDetectors) {
    const double g5 = t.at({2, 5, k}).auc.mean, g10 = t.at({2, 10, k}).auc.mean;
    pass &= g5 - g10 >= 0.0;
    detail += " " + std::string(to_string(k)) + " " + fmt(g5, 3) + " vs " + fmt(g10, 3) + ";";
  }
  return {pass, detail + failures_note(s.main())};
}

Outcome sorting_effect(Sweeps& s) {
  const auto plain = table_of(s.main());
  const auto sorted = table_of(s.sorted());
  const double f2_plain = plain.at({2, 10, DetectorKind::Dbscan}).f2.mean;
  const double f2_sorted = sorted.at({2, 10, DetectorKind::Dbscan}).f2.mean;

  // AED rows must match bit for bit in every shared cell.
  bool aed_identical = true;
  std::size_t compared = 0;
  for (const auto& r : s.sorted().rows) {
    if (r.detector != DetectorKind::Aed) continue;
    for (const auto& p : s.main().rows) {
      if (p.detector == r.detector && p.sigma_db == r.sigma_db && p.grid_m == r.grid_m && p.seed == r.seed) {
        aed_identical &= p.auc == r.auc && p.precision == r.precision && p.recall == r.recall && p.f2 == r.f2 &&
                         !p.failed && !r.failed;
        ++compared;
      }
    }
  }
  // And at the level of individual scores.
  ScenarioConfig c;
  c.sigma_shadow = 2;
  const auto ds = generate(c, 2000, 2000, 0.5);
  const auto sds = sort_descending(ds);
  const auto m1 = fit_detector(DetectorKind::Aed, to_matrix(ds.train));
  const auto m2 = fit_detector(DetectorKind::Aed, to_matrix(sds.train));
  aed_identical &= std::get<AedModel>(m1).threshold == std::get<AedModel>(m2).threshold;
  aed_identical &= score_batch(m1, to_matrix(ds.test)) == score_batch(m2, to_matrix(sds.test));

  return {f2_sorted > f2_plain && aed_identical && compared == 27,
          "DBSCAN F2 at sigma 2 dB, grid 10 m: sorted " + fmt(f2_sorted) + " vs unsorted " + fmt(f2_plain) +
              "; AED bit-identical over " + std::to_string(compared) + " rows and 2000 scores: " +
              (aed_identical ? "yes" : "no")};
}

Outcome dbscan_recall(Sweeps& s) {
  const auto t = table_of(s.sorted());
  int hits = 0;
  std::string detail;
  for (double grid : {5.0, 10.0, 15.0}) {
    for (double sigma : {0.0, 2.0, 4.0}) {
      const auto& a = t.at({sigma, grid, DetectorKind::Dbscan});
      const bool ok = a.n_failed == 0 && a.recall.mean >= 0.8;
      hits += ok;
      detail += " s" + fmt(sigma, 0) + "/g" + fmt(grid, 0) + " " + fmt(a.recall.mean, 3) + ";";
    }
  }
  return {hits >= 7, std::to_string(hits) + "/9 scenarios with sorted DBSCAN mean recall >= 0.8:" + detail};
}

Outcome ocsvm_nu_property() {
  ScenarioConfig c;
  c.sigma_shadow = 2;
  const auto ds = generate(c, 2000, 1, 0.0);
  const auto train = to_matrix(ds.train);
  OcsvmOptions o;
  o.nu = 0.5;
  const auto m = ocsvm_fit(train, o);
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < train.rows(); ++i) flagged += ocsvm_predict(m, train.row(i));
  const double frac = static_cast<double>(flagged) / static_cast<double>(train.rows());
  return {frac >= 0.45 && frac <= 0.55 && m.kkt_residual <= 1e-3,
          "training anomaly fraction = " + fmt(frac) + ", KKT residual = " + fmt(m.kkt_residual * 1e3, 4) +
              "e-3, support vectors = " + std::to_string(m.alpha.size())};
}

Outcome lof_homogeneity() {
  // 40 x 40 unit lattice, default k = 100. Interior points are far enough
  // from the edge that their neighbours' neighbourhoods are complete.
  const int side = 40;
  FeatureMatrix grid(static_cast<std::size_t>(side * side), 2);
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) {
      auto r = grid.row(static_cast<std::size_t>(y * side + x));
      r[0] = x;
      r[1] = y;
    }
  const auto m = lof_fit(grid, 100);
  double lo = INFINITY, hi = -INFINITY;
  for (std::size_t i = 0; i < grid.rows(); ++i) {
    const auto p = grid.row(i);
    if (p[0] < 12 || p[0] > side - 13 || p[1] < 12 || p[1] > side - 13) continue;
    const double s = lof_score(m, p);
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  // Cluster radius: largest distance from the centroid.
  const double centre = (side - 1) / 2.0;
  const double radius = std::sqrt(2.0) * centre;
  const std::vector<double> far{centre + 10 * radius, centre};
  const double far_score = lof_score(m, far);
  return {lo >= 0.9 && hi <= 1.1 && far_score > 2.0,
          "interior LOF in [" + fmt(lo) + ", " + fmt(hi) + "], point 10 radii away = " + fmt(far_score, 2)};
}

Outcome determinism(Sweeps& s) {
  const auto a = results_text(s.main());
  const auto b = results_text(s.main_parallel());
  const auto lines = std::count(a.begin(), a.end(), '\n');
  return {a == b, std::to_string(lines - 1) + " rows, 1 vs 4 threads: " +
                      (a == b ? "byte-identical" : "DIFFERENT") + " results.csv; single-thread sweep " +
                      fmt(s.main_seconds(), 1) + " s"};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  Sweeps sweeps;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"perfect-twin sanity", perfect_twin},
      {"metric oracles", metric_oracles},
      {"shadowing sampler statistics", shadowing_statistics},
      {"AED AUC > 0.65 at 6 dB", aed_high_noise},
      {"LOF leads at 0 dB", [&] { return lof_leads_at_zero_noise(sweeps); }},
      {"monotone degradation over sigma", [&] { return monotone_degradation(sweeps); }},
      {"denser grid helps", [&] { return grid_density(sweeps); }},
      {"sorting effect", [&] { return sorting_effect(sweeps); }},
      {"sorted DBSCAN recall >= 0.8", [&] { return dbscan_recall(sweeps); }},
      {"OCSVM nu-property", ocsvm_nu_property},
      {"LOF homogeneity", lof_homogeneity},
      {"sweep determinism", [&] { return determinism(sweeps); }},
  };

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    const auto t = Clock::now();
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s  %2d  %-34s %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                o.detail.c_str(), seconds_since(t));
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failed);
  return failed;
}
