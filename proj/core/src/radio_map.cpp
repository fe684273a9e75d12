#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "rftwin/channel.hpp"
#include "rftwin/error.hpp"
#include "rftwin/experiments.hpp"
#include "rftwin/key_values.hpp"
#include "rftwin/twin.hpp"
#include "svg.hpp"

namespace rftwin {

std::size_t raster_side(double area_side, double resolution) {
  if (!(resolution > 0) || !std::isfinite(resolution)) {
    throw Error(ErrorKind::InvalidConfig, "resolution must be > 0");
  }
  return static_cast<std::size_t>(std::floor(area_side / resolution * (1.0 + 1e-12))) + 1;
}

RadioMap compute_radio_map(const ScenarioConfig& config, const ScenarioInstance& scenario, double resolution,
                           RandomStream& rng) {
  validate(config);
  RadioMap map;
  map.area_side = config.area_side;
  map.resolution = resolution;
  map.nx = raster_side(config.area_side, resolution);
  map.scenario = scenario;

  std::vector<Point2D> raster;
  raster.reserve(map.nx * map.nx);
  for (std::size_t row = 0; row < map.nx; ++row) {
    for (std::size_t col = 0; col < map.nx; ++col) {
      raster.push_back({static_cast<double>(col) * resolution, static_cast<double>(row) * resolution});
    }
  }

  const std::size_t n_tx = scenario.regular_tx.size() + (scenario.jammer ? 1 : 0);
  ShadowingDraw shadowing;
  if (config.sigma_shadow > 0) {
    if (raster.size() > kMaxShadowedRasterPoints) {
      throw Error(ErrorKind::InvalidConfig, "shadowed radio map limited to " +
                                                std::to_string(kMaxShadowedRasterPoints) +
                                                " raster points; increase the resolution");
    }
    const ShadowingField field(raster, config.sigma_shadow, config.d_cor);
    shadowing = field.sample(n_tx, rng);
  }
  const auto model = PropagationModel::from(config);
  map.original = received_rss_at(scenario, raster, shadowing, model);
  map.twin = expected_rss_at(scenario, raster, model);
  map.difference = delta(map.original, map.twin);
  return map;
}

namespace {

// Blue-white-red style ramp over [0, 1].
std::string heat_color(double t) {
  t = std::clamp(t, 0.0, 1.0);
  const int r = static_cast<int>(std::lround(255 * std::min(1.0, 2 * t)));
  const int b = static_cast<int>(std::lround(255 * std::min(1.0, 2 * (1 - t))));
  const int g = static_cast<int>(std::lround(255 * (1 - std::abs(2 * t - 1))));
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

void write_layer(std::ostream& out, const char* name, const std::vector<double>& values, std::size_t nx) {
  out << "layer " << name << '\n';
  for (std::size_t row = 0; row < nx; ++row) {
    for (std::size_t col = 0; col < nx; ++col) {
      if (col) out << ' ';
      out << format_double(values[row * nx + col]);
    }
    out << '\n';
  }
}

void heatmap_panel(svg::Document& doc, const RadioMap& map, const std::vector<double>& values, double x0,
                   const std::string& title) {
  constexpr double size = 300.0;
  constexpr double y0 = 50.0;
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it > lo ? *hi_it : lo + 1.0;
  const double cell = size / static_cast<double>(map.nx);
  for (std::size_t row = 0; row < map.nx; ++row) {
    for (std::size_t col = 0; col < map.nx; ++col) {
      const double v = values[row * map.nx + col];
      // Row 0 is y = 0 and is drawn at the bottom.
      doc.rect(x0 + cell * static_cast<double>(col), y0 + size - cell * static_cast<double>(row + 1), cell + 0.3,
               cell + 0.3, heat_color((v - lo) / (hi - lo)));
    }
  }
  const double scale = size / map.area_side;
  for (const auto& su : map.scenario.su_positions) doc.circle(x0 + su.x * scale, y0 + size - su.y * scale, 3, "black");
  doc.text(x0 + size / 2, y0 - 10, title, 13, "middle");
  doc.text(x0, y0 + size + 18, "min " + svg::num(lo) + ", max " + svg::num(*hi_it), 10);
}

}  // namespace

std::vector<std::filesystem::path> write_radio_map(const RadioMap& map, const std::filesystem::path& out_path) {
  {
    std::ofstream out(out_path);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + out_path.string() + "'");
    out << "# rftwin radio map v1\n";
    out << "area_side " << format_double(map.area_side) << '\n';
    out << "resolution " << format_double(map.resolution) << '\n';
    out << "nx " << map.nx << '\n' << "ny " << map.nx << '\n';
    for (const auto& su : map.scenario.su_positions) {
      out << "su " << format_double(su.x) << ' ' << format_double(su.y) << '\n';
    }
    for (const auto& tx : map.scenario.regular_tx) {
      out << "tx " << format_double(tx.true_position.x) << ' ' << format_double(tx.true_position.y) << ' '
          << format_double(tx.estimated_position.x) << ' ' << format_double(tx.estimated_position.y) << ' '
          << format_double(tx.power_dbm) << '\n';
    }
    if (map.scenario.jammer) {
      out << "jammer " << format_double(map.scenario.jammer->position.x) << ' '
          << format_double(map.scenario.jammer->position.y) << ' ' << format_double(map.scenario.jammer->power_dbm)
          << '\n';
    }
    write_layer(out, "original", map.original, map.nx);
    write_layer(out, "twin", map.twin, map.nx);
    write_layer(out, "difference", map.difference, map.nx);
    if (!out) throw Error(ErrorKind::Io, "write to '" + out_path.string() + "' failed");
  }

  svg::Document doc(1020, 400);
  heatmap_panel(doc, map, map.original, 20, "original RSS [dBm]");
  heatmap_panel(doc, map, map.twin, 360, "twin RSS [dBm]");
  heatmap_panel(doc, map, map.difference, 700, "difference [dB]");
  auto svg_path = out_path;
  svg_path += ".svg";
  svg::write_file(svg_path, doc);
  return {out_path, svg_path};
}

std::vector<std::filesystem::path> render_radio_map(const ScenarioConfig& config, const ScenarioInstance& scenario,
                                                    double resolution, const std::filesystem::path& out_path,
                                                    RandomStream& rng) {
  return write_radio_map(compute_radio_map(config, scenario, resolution, rng), out_path);
}

}  // namespace rftwin
