#pragma once

#include <cstddef>
#include <filesystem>
#include <memory>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "rftwin/feature_matrix.hpp"
#include "rftwin/knn.hpp"

// Novelty detectors trained on normal Delta vectors only. Every detector
// scores so that a larger value means "more anomalous"; the binary decision
// is a threshold on that score.

namespace rftwin {

/// Nearest-rank percentile: the ceil(p * n)-th smallest value (1-based),
/// clamped to [1, n]. `values` need not be sorted.
double nearest_rank_percentile(std::vector<double> values, double p);

// ---------------------------------------------------------------------------
// Adapted energy detector

struct AedModel {
  double threshold = 0.0;  // dB, compared against the mean of Delta
  double percentile = 0.9;
  std::size_t n_features = 0;
};

AedModel aed_fit(const FeatureMatrix& train, double percentile = 0.9);
double aed_score(const AedModel& model, std::span<const double> x);
/// Inclusive: a mean exactly at the threshold is an anomaly.
bool aed_predict(const AedModel& model, std::span<const double> x);

// ---------------------------------------------------------------------------
// One-class SVM (nu formulation, RBF kernel)

enum class GammaMode { Scale, Fixed };

struct OcsvmOptions {
  double nu = 0.5;
  GammaMode gamma_mode = GammaMode::Scale;
  double gamma = 1.0;  // used when gamma_mode == Fixed
  double tolerance = 1e-3;
  std::size_t max_iterations = 0;  // 0: max(1e7, 100 n)
  std::size_t cache_mb = 256;
};

struct OcsvmModel {
  FeatureMatrix support_vectors;
  std::vector<double> alpha;  // normalized: 0 <= alpha_i <= 1/(nu n), sum = 1
  double rho = 0.0;
  double gamma = 1.0;
  double nu = 0.5;
  std::size_t n_train = 0;
  // Maximal KKT violation at exit, in the solver's unnormalized units
  // (upper bound 1 per coefficient); <= tolerance on success.
  double kkt_residual = 0.0;
  std::size_t iterations = 0;
};

/// 1 / (n_features * variance of all training entries); 1 when the
/// variance is zero.
double gamma_scale(const FeatureMatrix& train);

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma) noexcept;

OcsvmModel ocsvm_fit(const FeatureMatrix& train, const OcsvmOptions& options = {});
/// Sum over support vectors of alpha_i k(sv_i, x).
double ocsvm_kernel_sum(const OcsvmModel& model, std::span<const double> x);
/// rho - sum alpha_i k(sv_i, x).
double ocsvm_score(const OcsvmModel& model, std::span<const double> x);
bool ocsvm_predict(const OcsvmModel& model, std::span<const double> x);

// ---------------------------------------------------------------------------
// Local outlier factor, novelty mode

inline constexpr double kLofDistanceFloor = 1e-12;

struct LofModel {
  std::shared_ptr<const KnnIndex> index;  // training points
  std::size_t k = 100;
  std::vector<double> k_distance;
  std::vector<double> lrd;
  double threshold = 1.5;
};

LofModel lof_fit(const FeatureMatrix& train, std::size_t k = 100, double threshold = 1.5, unsigned threads = 1,
                 KnnBackend backend = KnnBackend::Auto);
double lof_score(const LofModel& model, std::span<const double> x);
bool lof_predict(const LofModel& model, std::span<const double> x);

// ---------------------------------------------------------------------------
// DBSCAN, novelty adaptation

inline constexpr double kDbscanEpsFloor = 1e-12;

enum class EpsMode {
  // eps = nearest-rank percentile of every training point's distance to its
  // min_pts-th nearest other training point.
  KdistPercentile,
  // eps given directly.
  Fixed,
};

struct DbscanOptions {
  std::size_t min_pts = 5;
  EpsMode eps_mode = EpsMode::KdistPercentile;
  double eps_percentile = 0.95;
  double eps = 0.5;  // used when eps_mode == Fixed
};

struct DbscanModel {
  std::shared_ptr<const KnnIndex> core;  // core points of the training set; may be empty
  double eps = 0.0;
  std::size_t min_pts = 5;
  EpsMode eps_mode = EpsMode::KdistPercentile;
  double eps_percentile = 0.95;
};

/// Core points are the training points with at least min_pts other training
/// points within eps.
DbscanModel dbscan_fit(const FeatureMatrix& train, const DbscanOptions& options = {}, unsigned threads = 1,
                       KnnBackend backend = KnnBackend::Auto);
/// Distance to the nearest core point; +inf when there are no core points.
double dbscan_score(const DbscanModel& model, std::span<const double> x);
/// Anomaly iff no core point lies within eps (inclusive).
bool dbscan_predict(const DbscanModel& model, std::span<const double> x);

// ---------------------------------------------------------------------------
// Common interface

enum class DetectorKind { Aed, Ocsvm, Lof, Dbscan };

inline constexpr DetectorKind kAllDetectors[] = {DetectorKind::Aed, DetectorKind::Ocsvm, DetectorKind::Lof,
                                                 DetectorKind::Dbscan};

std::string_view to_string(DetectorKind kind) noexcept;
/// Throws Error(InvalidConfig) for an unknown name.
DetectorKind parse_detector(std::string_view name);

struct DetectorParams {
  double aed_percentile = 0.9;
  OcsvmOptions ocsvm;
  std::size_t lof_k = 100;
  double lof_threshold = 1.5;
  DbscanOptions dbscan;
  unsigned threads = 1;
};

using DetectorModel = std::variant<AedModel, OcsvmModel, LofModel, DbscanModel>;

DetectorModel fit_detector(DetectorKind kind, const FeatureMatrix& train, const DetectorParams& params = {});
DetectorKind kind_of(const DetectorModel& model) noexcept;
std::size_t feature_dim(const DetectorModel& model) noexcept;
double score(const DetectorModel& model, std::span<const double> x);
bool predict(const DetectorModel& model, std::span<const double> x);
/// The default operating point applied to an already computed score.
bool is_anomalous_score(const DetectorModel& model, double score) noexcept;
/// Scores every row; independent of `threads`.
std::vector<double> score_batch(const DetectorModel& model, const FeatureMatrix& x, unsigned threads = 1);

// Model files are JSON documents: {"format": "rftwin-model", "version": 1,
// "detector": ..., "n_features": ..., "sorted_features": ..., ...} followed
// by the detector's fitted state. LOF and DBSCAN store their points; the
// neighbour index is rebuilt on load.
inline constexpr int kModelFormatVersion = 1;

struct StoredModel {
  DetectorModel model;
  bool sorted_features = false;
};

void save_model(const StoredModel& stored, const std::filesystem::path& path);
StoredModel load_model(const std::filesystem::path& path);

}  // namespace rftwin
