#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rftwin/key_values.hpp"
#include "rftwin/random.hpp"

namespace rftwin {

struct Point2D {
  double x = 0.0;  // meters
  double y = 0.0;  // meters

  friend bool operator==(const Point2D&, const Point2D&) = default;
};

double distance(Point2D a, Point2D b) noexcept;

/// Simulation parameters. Distances in meters, powers in dBm, losses in dB.
struct ScenarioConfig {
  double area_side = 40.0;
  int n_reg = 10;
  // When greater than n_reg, the number of regular transmitters is drawn
  // uniformly from [n_reg, n_reg_max] per sample. 0 disables.
  int n_reg_max = 0;
  double p_tx_reg = 20.0;
  double p_tx_jam = 20.0;
  double carrier_freq = 3.7e9;  // Hz
  double grid_size = 10.0;
  double alpha = 2.0;
  double l0 = -147.55;
  double sigma_shadow = 0.0;
  double d_cor = 1.0;
  double pos_err_std = 1.02;
  double distance_floor = 0.1;
  std::uint64_t master_seed = 1;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Throws Error(InvalidConfig) on the first violated invariant.
void validate(const ScenarioConfig& config);

/// Assigns one ScenarioConfig field by its key name. Returns false when the
/// key is not a ScenarioConfig field.
bool set_config_field(ScenarioConfig& config, std::string_view key, std::string_view value);
KeyValues to_key_values(const ScenarioConfig& config);
/// Unknown keys are rejected.
ScenarioConfig scenario_config_from(const KeyValues& kv);

struct RegularTransmitter {
  Point2D true_position;
  Point2D estimated_position;
  double power_dbm = 0.0;
};

struct Jammer {
  Point2D position;
  double power_dbm = 0.0;
};

struct ScenarioInstance {
  std::vector<RegularTransmitter> regular_tx;
  std::optional<Jammer> jammer;  // present iff the sample is an anomaly
  std::vector<Point2D> su_positions;  // row-major, fixed order
};

/// Row-major sensing-unit grid at {0, g, 2g, ...} per axis, inclusive of
/// the far edge when it lies on the grid.
std::vector<Point2D> build_su_grid(double area_side, double grid_size);

std::size_t su_grid_count(double area_side, double grid_size);

ScenarioInstance sample_scenario(const ScenarioConfig& config, bool anomalous, RandomStream& rng);

}  // namespace rftwin
