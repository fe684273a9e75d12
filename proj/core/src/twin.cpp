#include "rftwin/twin.hpp"

#include <string>

#include "rftwin/error.hpp"

namespace rftwin {

RssVector expected_rss_at(const ScenarioInstance& scenario, std::span<const Point2D> receivers,
                          const PropagationModel& model) {
  RssVector rss(receivers.size());
  for (std::size_t j = 0; j < receivers.size(); ++j) {
    double total_mw = 0.0;
    for (const auto& tx : scenario.regular_tx) {
      total_mw += dbm_to_mw(tx.power_dbm - model.loss_db(tx.estimated_position, receivers[j]));
    }
    rss[j] = mw_to_dbm(total_mw);
  }
  return rss;
}

RssVector expected_rss(const ScenarioInstance& scenario, const PropagationModel& model) {
  return expected_rss_at(scenario, scenario.su_positions, model);
}

DeltaVector delta(std::span<const double> measured, std::span<const double> predicted) {
  if (measured.size() != predicted.size()) {
    throw Error(ErrorKind::LengthMismatch, "measured has " + std::to_string(measured.size()) +
                                               " entries, predicted has " + std::to_string(predicted.size()));
  }
  DeltaVector out(measured.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = measured[j] - predicted[j];
  return out;
}

}  // namespace rftwin
