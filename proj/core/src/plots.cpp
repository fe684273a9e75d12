#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <string>

#include "rftwin/error.hpp"
#include "rftwin/experiments.hpp"
#include "rftwin/key_values.hpp"
#include "svg.hpp"

namespace rftwin {

namespace svg {

void write_file(const std::filesystem::path& path, const Document& doc) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out << doc.str();
  if (!out) throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

}  // namespace svg

namespace {

const char* color_of(DetectorKind kind) {
  switch (kind) {
    case DetectorKind::Aed: return "#1f77b4";
    case DetectorKind::Ocsvm: return "#ff7f0e";
    case DetectorKind::Lof: return "#2ca02c";
    case DetectorKind::Dbscan: return "#d62728";
  }
  return "black";
}

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::string tag(double v) {
  auto s = format_double(v);
  std::replace(s.begin(), s.end(), '.', 'p');
  return s;
}

void legend(svg::Document& doc, double x, double y, const std::vector<DetectorKind>& kinds) {
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    const double yy = y + 16.0 * static_cast<double>(i);
    doc.line(x, yy, x + 18, yy, color_of(kinds[i]), 2.5);
    doc.text(x + 24, yy + 4, upper(to_string(kinds[i])), 11);
  }
}

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

std::filesystem::path roc_plot(const SweepResult& result, double sigma, double grid,
                               const std::filesystem::path& dir) {
  svg::Document doc(460, 420);
  const svg::Frame f{70, 40, 340, 320, 0, 1, 0, 1};
  doc.text(230, 22, "ROC, sigma = " + format_double(sigma) + " dB, grid = " + format_double(grid) + " m", 13,
           "middle");
  svg::axes(doc, f, "false positive rate", "true positive rate");
  doc.line(f.px(0), f.py(0), f.px(1), f.py(1), "black", 1.0, "2,3");

  // One curve per detector: the lowest successful seed.
  std::map<int, const SweepRow*> chosen;
  for (const auto& r : result.rows) {
    if (r.sigma_db != sigma || r.grid_m != grid || r.failed || r.roc.points.empty()) continue;
    auto& slot = chosen[static_cast<int>(r.detector)];
    if (slot == nullptr || r.seed < slot->seed) slot = &r;
  }
  std::vector<DetectorKind> kinds;
  for (const auto& [k, row] : chosen) {
    std::vector<std::pair<double, double>> pts;
    for (const auto& p : row->roc.points) pts.emplace_back(f.px(clamp01(p.fpr)), f.py(clamp01(p.tpr)));
    doc.polyline(pts, color_of(row->detector));
    kinds.push_back(row->detector);
  }
  legend(doc, f.left + f.width - 90, f.top + f.height - 16.0 * static_cast<double>(kinds.size()), kinds);
  const auto path = dir / ("roc_sigma" + tag(sigma) + "_grid" + tag(grid) + ".svg");
  svg::write_file(path, doc);
  return path;
}

std::filesystem::path auc_plot(const std::vector<AggregateRow>& table, double grid, const std::filesystem::path& dir) {
  double s_min = 0.0;
  double s_max = 0.0;
  bool first = true;
  std::map<int, std::vector<std::pair<double, double>>> series;
  for (const auto& r : table) {
    if (r.grid_m != grid || r.n_seeds == 0) continue;
    series[static_cast<int>(r.detector)].emplace_back(r.sigma_db, r.auc.mean);
    s_min = first ? r.sigma_db : std::min(s_min, r.sigma_db);
    s_max = first ? r.sigma_db : std::max(s_max, r.sigma_db);
    first = false;
  }
  if (s_max == s_min) s_max = s_min + 1.0;
  svg::Document doc(460, 400);
  const svg::Frame f{70, 40, 340, 300, s_min, s_max, 0, 1};
  doc.text(230, 22, "AUC versus shadowing, grid = " + format_double(grid) + " m", 13, "middle");
  svg::axes(doc, f, "shadowing sigma [dB]", "mean AUC");
  std::vector<DetectorKind> kinds;
  for (const auto& [k, pts] : series) {
    const auto kind = static_cast<DetectorKind>(k);
    std::vector<std::pair<double, double>> px;
    for (const auto& [s, a] : pts) {
      px.emplace_back(f.px(s), f.py(clamp01(a)));
      doc.circle(f.px(s), f.py(clamp01(a)), 3, color_of(kind));
    }
    doc.polyline(px, color_of(kind));
    kinds.push_back(kind);
  }
  legend(doc, f.left + 10, f.top + f.height - 16.0 * static_cast<double>(kinds.size()), kinds);
  const auto path = dir / ("auc_vs_sigma_grid" + tag(grid) + ".svg");
  svg::write_file(path, doc);
  return path;
}

std::filesystem::path bar_plot(const std::vector<AggregateRow>& table, double grid, const std::filesystem::path& dir) {
  std::vector<double> sigmas;
  std::set<int> kind_set;
  for (const auto& r : table) {
    if (r.grid_m != grid) continue;
    if (std::find(sigmas.begin(), sigmas.end(), r.sigma_db) == sigmas.end()) sigmas.push_back(r.sigma_db);
    kind_set.insert(static_cast<int>(r.detector));
  }
  std::vector<DetectorKind> kinds;
  for (const int k : kind_set) kinds.push_back(static_cast<DetectorKind>(k));

  const double group_w = 24.0 * static_cast<double>(kinds.size()) + 16.0;
  const double width = std::max(460.0, 110.0 + group_w * static_cast<double>(sigmas.size()));
  svg::Document doc(width, 640);
  doc.text(width / 2, 22, "F2 and recall, grid = " + format_double(grid) + " m", 13, "middle");
  const char* metric_names[] = {"F2 score", "recall"};
  for (int panel = 0; panel < 2; ++panel) {
    const svg::Frame f{70, 40.0 + 300.0 * panel, width - 100, 240, 0, static_cast<double>(sigmas.size()), 0, 1};
    svg::axes(doc, f, "shadowing sigma [dB]", metric_names[panel], 0, 5);
    for (std::size_t g = 0; g < sigmas.size(); ++g) {
      doc.text(f.px(static_cast<double>(g) + 0.5), f.top + f.height + 16, format_double(sigmas[g]), 10, "middle");
      for (std::size_t d = 0; d < kinds.size(); ++d) {
        const auto it = std::find_if(table.begin(), table.end(), [&](const AggregateRow& r) {
          return r.grid_m == grid && r.sigma_db == sigmas[g] && r.detector == kinds[d];
        });
        if (it == table.end() || it->n_seeds == 0) continue;
        const double v = clamp01(panel == 0 ? it->f2.mean : it->recall.mean);
        const double bar_w = (f.width / static_cast<double>(sigmas.size()) - 12.0) / static_cast<double>(kinds.size());
        const double x = f.px(static_cast<double>(g)) + 6.0 + bar_w * static_cast<double>(d);
        doc.rect(x, f.py(v), bar_w - 1.0, f.py(0) - f.py(v), color_of(kinds[d]));
      }
    }
  }
  legend(doc, width - 110, 50, kinds);
  const auto path = dir / ("f2_recall_grid" + tag(grid) + ".svg");
  svg::write_file(path, doc);
  return path;
}

}  // namespace

PlotOutput render_plots(const SweepResult& result, const std::vector<AggregateRow>& table,
                        const std::filesystem::path& out_dir) {
  PlotOutput out;
  if (table.empty() || result.rows.empty()) {
    out.notice = "no sweep rows; no plots written";
    return out;
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorKind::Io, "cannot create '" + out_dir.string() + "': " + ec.message());

  std::set<std::pair<double, double>> scenarios;
  std::set<double> grids;
  for (const auto& r : table) {
    scenarios.insert({r.sigma_db, r.grid_m});
    grids.insert(r.grid_m);
  }
  for (const auto& [sigma, grid] : scenarios) out.files.push_back(roc_plot(result, sigma, grid, out_dir));
  for (const double grid : grids) {
    out.files.push_back(auc_plot(table, grid, out_dir));
    out.files.push_back(bar_plot(table, grid, out_dir));
  }
  return out;
}

}  // namespace rftwin
