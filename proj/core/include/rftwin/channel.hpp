#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "rftwin/random.hpp"
#include "rftwin/scenario.hpp"

namespace rftwin {

using CovarianceMatrix = Eigen::MatrixXd;
/// One row per transmitter (regular transmitters first, jammer last), one
/// column per sensing unit; entries in dB.
using ShadowingDraw = Eigen::MatrixXd;
/// Received power per sensing unit in dBm, in su_positions order.
using RssVector = std::vector<double>;

double dbm_to_mw(double dbm) noexcept;
double mw_to_dbm(double mw) noexcept;

/// Log-distance path loss plus an additive shadowing term, in dB.
double path_loss_db(double d, double fc, double alpha, double l0, double shadow);

/// Propagation constants shared by the ground-truth channel and the twin.
struct PropagationModel {
  double carrier_freq = 3.7e9;
  double alpha = 2.0;
  double l0 = -147.55;
  double distance_floor = 0.1;

  static PropagationModel from(const ScenarioConfig& config);

  /// Path loss for a transmitter-receiver pair; the distance is clamped to
  /// the floor before evaluation.
  double loss_db(Point2D tx, Point2D rx, double shadow_db = 0.0) const;
};

/// Exponentially decaying covariance sigma^2 exp(-d / d_cor) over `points`.
CovarianceMatrix covariance(std::span<const Point2D> points, double sigma, double d_cor);

/// Lower-triangular L with L L^T = C + eps I, trying eps / diag scale in
/// {0, 1e-10, 1e-8, 1e-6} in order. An all-zero matrix yields a zero factor.
Eigen::MatrixXd cholesky_factor(const CovarianceMatrix& c);

/// Each row is factor * z with z i.i.d. standard normal.
ShadowingDraw sample_shadowing(const Eigen::MatrixXd& factor, std::size_t n_tx, RandomStream& rng);

/// Cached Cholesky factor for one sensing-unit layout. Immutable and safe to
/// share across threads; each sample() call needs its own stream.
class ShadowingField {
 public:
  ShadowingField(std::span<const Point2D> points, double sigma, double d_cor);

  ShadowingDraw sample(std::size_t n_tx, RandomStream& rng) const;
  const Eigen::MatrixXd& factor() const { return factor_; }
  double sigma() const { return sigma_; }
  std::size_t size() const { return static_cast<std::size_t>(factor_.rows()); }

 private:
  Eigen::MatrixXd factor_;
  double sigma_;
};

/// Measured RSS at every SU: linear-domain sum over all active transmitters
/// (the jammer included when present) with per-link shadowing.
RssVector received_rss(const ScenarioInstance& scenario, const ShadowingDraw& shadowing,
                       const PropagationModel& model);

/// Same superposition at arbitrary receiver points. `shadowing` may be empty
/// (no shadowing).
RssVector received_rss_at(const ScenarioInstance& scenario, std::span<const Point2D> receivers,
                          const ShadowingDraw& shadowing, const PropagationModel& model);

}  // namespace rftwin
