#include "rftwin/channel.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "rftwin/error.hpp"

namespace rftwin {

double dbm_to_mw(double dbm) noexcept { return std::pow(10.0, dbm / 10.0); }

double mw_to_dbm(double mw) noexcept { return 10.0 * std::log10(mw); }

double path_loss_db(double d, double fc, double alpha, double l0, double shadow) {
  if (!(d > 0) || !std::isfinite(d)) {
    throw Error(ErrorKind::Domain, "path loss needs a positive finite distance, got " + std::to_string(d));
  }
  if (!(fc > 0)) throw Error(ErrorKind::Domain, "carrier frequency must be positive");
  return 10.0 * alpha * std::log10(d) + 20.0 * std::log10(fc) + l0 + shadow;
}

PropagationModel PropagationModel::from(const ScenarioConfig& config) {
  return {config.carrier_freq, config.alpha, config.l0, config.distance_floor};
}

double PropagationModel::loss_db(Point2D tx, Point2D rx, double shadow_db) const {
  const double d = std::max(distance(tx, rx), distance_floor);
  if (!(d > 0)) {
    throw Error(ErrorKind::DegenerateGeometry, "transmitter coincides with a receiver at (" +
                                                   std::to_string(rx.x) + ", " + std::to_string(rx.y) + ")");
  }
  return path_loss_db(d, carrier_freq, alpha, l0, shadow_db);
}

CovarianceMatrix covariance(std::span<const Point2D> points, double sigma, double d_cor) {
  if (!(d_cor > 0)) throw Error(ErrorKind::InvalidConfig, "d_cor must be > 0");
  const auto n = static_cast<Eigen::Index>(points.size());
  const double var = sigma * sigma;
  CovarianceMatrix c(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    c(k, k) = var;
    for (Eigen::Index l = 0; l < k; ++l) {
      const double v = var * std::exp(-distance(points[k], points[l]) / d_cor);
      c(k, l) = v;
      c(l, k) = v;
    }
  }
  return c;
}

Eigen::MatrixXd cholesky_factor(const CovarianceMatrix& c) {
  if (c.rows() != c.cols()) throw Error(ErrorKind::DimensionMismatch, "covariance must be square");
  const auto n = c.rows();
  if (n == 0 || c.isZero(0.0)) return Eigen::MatrixXd::Zero(n, n);

  const double scale = c.diagonal().cwiseAbs().maxCoeff();
  constexpr std::array<double, 4> jitter = {0.0, 1e-10, 1e-8, 1e-6};
  for (const double eps : jitter) {
    Eigen::LLT<Eigen::MatrixXd> llt(c + eps * scale * Eigen::MatrixXd::Identity(n, n));
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  throw Error(ErrorKind::NotPositiveDefinite, "Cholesky failed at every jitter level");
}

ShadowingDraw sample_shadowing(const Eigen::MatrixXd& factor, std::size_t n_tx, RandomStream& rng) {
  const auto n = factor.rows();
  ShadowingDraw draw(static_cast<Eigen::Index>(n_tx), n);
  Eigen::VectorXd z(n);
  for (Eigen::Index t = 0; t < static_cast<Eigen::Index>(n_tx); ++t) {
    for (Eigen::Index j = 0; j < n; ++j) z(j) = standard_normal(rng);
    draw.row(t) = (factor.triangularView<Eigen::Lower>() * z).transpose();
  }
  return draw;
}

ShadowingField::ShadowingField(std::span<const Point2D> points, double sigma, double d_cor)
    : factor_(cholesky_factor(covariance(points, sigma, d_cor))), sigma_(sigma) {}

ShadowingDraw ShadowingField::sample(std::size_t n_tx, RandomStream& rng) const {
  return sample_shadowing(factor_, n_tx, rng);
}

RssVector received_rss_at(const ScenarioInstance& scenario, std::span<const Point2D> receivers,
                          const ShadowingDraw& shadowing, const PropagationModel& model) {
  const std::size_t n_tx = scenario.regular_tx.size() + (scenario.jammer ? 1 : 0);
  const bool shadowed = shadowing.size() != 0;
  if (shadowed && (static_cast<std::size_t>(shadowing.rows()) != n_tx ||
                   static_cast<std::size_t>(shadowing.cols()) != receivers.size())) {
    throw Error(ErrorKind::LengthMismatch,
                "shadowing draw is " + std::to_string(shadowing.rows()) + "x" + std::to_string(shadowing.cols()) +
                    ", expected " + std::to_string(n_tx) + "x" + std::to_string(receivers.size()));
  }
  RssVector rss(receivers.size());
  for (std::size_t j = 0; j < receivers.size(); ++j) {
    const auto col = static_cast<Eigen::Index>(j);
    double total_mw = 0.0;
    for (std::size_t i = 0; i < scenario.regular_tx.size(); ++i) {
      const auto& tx = scenario.regular_tx[i];
      const double x = shadowed ? shadowing(static_cast<Eigen::Index>(i), col) : 0.0;
      total_mw += dbm_to_mw(tx.power_dbm - model.loss_db(tx.true_position, receivers[j], x));
    }
    if (scenario.jammer) {
      const double x = shadowed ? shadowing(static_cast<Eigen::Index>(n_tx - 1), col) : 0.0;
      total_mw += dbm_to_mw(scenario.jammer->power_dbm - model.loss_db(scenario.jammer->position, receivers[j], x));
    }
    rss[j] = mw_to_dbm(total_mw);
  }
  return rss;
}

RssVector received_rss(const ScenarioInstance& scenario, const ShadowingDraw& shadowing,
                       const PropagationModel& model) {
  return received_rss_at(scenario, scenario.su_positions, shadowing, model);
}

}  // namespace rftwin
