#pragma once

#include <vector>

#include "rftwin/channel.hpp"
#include "rftwin/scenario.hpp"

namespace rftwin {

/// Per-SU difference between measured and predicted RSS, dB.
using DeltaVector = std::vector<double>;

/// Twin prediction at every SU: regular transmitters only, placed at their
/// estimated positions, without shadowing. The jammer is never part of it.
RssVector expected_rss(const ScenarioInstance& scenario, const PropagationModel& model);

RssVector expected_rss_at(const ScenarioInstance& scenario, std::span<const Point2D> receivers,
                          const PropagationModel& model);

/// measured - predicted, elementwise.
DeltaVector delta(std::span<const double> measured, std::span<const double> predicted);

}  // namespace rftwin
