#include "rftwin/scenario.hpp"

#include <cmath>
#include <string>

#include "rftwin/error.hpp"

namespace rftwin {

double distance(Point2D a, Point2D b) noexcept { return std::hypot(a.x - b.x, a.y - b.y); }

namespace {

void require(bool ok, const char* message) {
  if (!ok) throw Error(ErrorKind::InvalidConfig, message);
}

std::size_t lines_per_axis(double area_side, double grid_size) {
  // Relative slack so that e.g. 0.3 / 0.1 still counts the far edge.
  return static_cast<std::size_t>(std::floor(area_side / grid_size * (1.0 + 1e-12))) + 1;
}

}  // namespace

void validate(const ScenarioConfig& c) {
  require(std::isfinite(c.area_side) && c.area_side > 0, "area_side must be > 0");
  require(c.n_reg >= 1, "n_reg must be >= 1");
  require(c.n_reg_max == 0 || c.n_reg_max >= c.n_reg, "n_reg_max must be 0 or >= n_reg");
  require(std::isfinite(c.grid_size) && c.grid_size > 0, "grid_size must be > 0");
  require(c.grid_size <= c.area_side, "grid_size must not exceed area_side");
  require(std::isfinite(c.carrier_freq) && c.carrier_freq > 0, "carrier_freq must be > 0");
  require(std::isfinite(c.sigma_shadow) && c.sigma_shadow >= 0, "sigma_shadow must be >= 0");
  require(std::isfinite(c.d_cor) && c.d_cor > 0, "d_cor must be > 0");
  require(std::isfinite(c.pos_err_std) && c.pos_err_std >= 0, "pos_err_std must be >= 0");
  require(std::isfinite(c.distance_floor) && c.distance_floor >= 0, "distance_floor must be >= 0");
  require(std::isfinite(c.alpha) && std::isfinite(c.l0), "alpha and l0 must be finite");
  require(!std::isnan(c.p_tx_reg) && !std::isnan(c.p_tx_jam), "transmit powers must not be NaN");
}

bool set_config_field(ScenarioConfig& c, std::string_view key, std::string_view value) {
  if (key == "area_side") c.area_side = parse_double(value, key);
  else if (key == "n_reg") c.n_reg = static_cast<int>(parse_int(value, key));
  else if (key == "n_reg_max") c.n_reg_max = static_cast<int>(parse_int(value, key));
  else if (key == "p_tx_reg") c.p_tx_reg = parse_double(value, key);
  else if (key == "p_tx_jam") c.p_tx_jam = parse_double(value, key);
  else if (key == "carrier_freq") c.carrier_freq = parse_double(value, key);
  else if (key == "grid_size") c.grid_size = parse_double(value, key);
  else if (key == "alpha") c.alpha = parse_double(value, key);
  else if (key == "l0") c.l0 = parse_double(value, key);
  else if (key == "sigma_shadow") c.sigma_shadow = parse_double(value, key);
  else if (key == "d_cor") c.d_cor = parse_double(value, key);
  else if (key == "pos_err_std") c.pos_err_std = parse_double(value, key);
  else if (key == "distance_floor") c.distance_floor = parse_double(value, key);
  else if (key == "master_seed") c.master_seed = parse_u64(value, key);
  else return false;
  return true;
}

KeyValues to_key_values(const ScenarioConfig& c) {
  KeyValues kv;
  kv.set("area_side", format_double(c.area_side));
  kv.set("n_reg", std::to_string(c.n_reg));
  kv.set("n_reg_max", std::to_string(c.n_reg_max));
  kv.set("p_tx_reg", format_double(c.p_tx_reg));
  kv.set("p_tx_jam", format_double(c.p_tx_jam));
  kv.set("carrier_freq", format_double(c.carrier_freq));
  kv.set("grid_size", format_double(c.grid_size));
  kv.set("alpha", format_double(c.alpha));
  kv.set("l0", format_double(c.l0));
  kv.set("sigma_shadow", format_double(c.sigma_shadow));
  kv.set("d_cor", format_double(c.d_cor));
  kv.set("pos_err_std", format_double(c.pos_err_std));
  kv.set("distance_floor", format_double(c.distance_floor));
  kv.set("master_seed", std::to_string(c.master_seed));
  return kv;
}

ScenarioConfig scenario_config_from(const KeyValues& kv) {
  ScenarioConfig c;
  for (const auto& [key, value] : kv.entries()) {
    if (!set_config_field(c, key, value)) {
      throw Error(ErrorKind::InvalidConfig, "unknown scenario key '" + key + "'");
    }
  }
  validate(c);
  return c;
}

std::size_t su_grid_count(double area_side, double grid_size) {
  const auto n = lines_per_axis(area_side, grid_size);
  return n * n;
}

std::vector<Point2D> build_su_grid(double area_side, double grid_size) {
  if (!(grid_size > 0) || !(area_side >= grid_size) || !std::isfinite(area_side)) {
    throw Error(ErrorKind::InvalidConfig, "SU grid requires 0 < grid_size <= area_side");
  }
  const auto n = lines_per_axis(area_side, grid_size);
  std::vector<Point2D> points;
  points.reserve(n * n);
  for (std::size_t row = 0; row < n; ++row) {
    for (std::size_t col = 0; col < n; ++col) {
      points.push_back({static_cast<double>(col) * grid_size, static_cast<double>(row) * grid_size});
    }
  }
  return points;
}

ScenarioInstance sample_scenario(const ScenarioConfig& config, bool anomalous, RandomStream& rng) {
  validate(config);
  ScenarioInstance s;
  s.su_positions = build_su_grid(config.area_side, config.grid_size);

  int n_reg = config.n_reg;
  if (config.n_reg_max > config.n_reg) {
    std::uniform_int_distribution<int> count(config.n_reg, config.n_reg_max);
    n_reg = count(rng);
  }

  // Draw order is fixed (positions, jammer, localization errors) so that
  // configurations differing only in noise levels share the same geometry.
  s.regular_tx.resize(static_cast<std::size_t>(n_reg));
  for (auto& tx : s.regular_tx) {
    tx.true_position.x = uniform(rng, 0.0, config.area_side);
    tx.true_position.y = uniform(rng, 0.0, config.area_side);
    tx.power_dbm = config.p_tx_reg;
  }
  if (anomalous) {
    Jammer jam;
    jam.position.x = uniform(rng, 0.0, config.area_side);
    jam.position.y = uniform(rng, 0.0, config.area_side);
    jam.power_dbm = config.p_tx_jam;
    s.jammer = jam;
  }
  for (auto& tx : s.regular_tx) {
    tx.estimated_position.x = tx.true_position.x + config.pos_err_std * standard_normal(rng);
    tx.estimated_position.y = tx.true_position.y + config.pos_err_std * standard_normal(rng);
  }
  return s;
}

}  // namespace rftwin
