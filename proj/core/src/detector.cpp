#include <fstream>
#include <string>

#include "json.hpp"

#include "rftwin/detectors.hpp"
#include "rftwin/error.hpp"
#include "rftwin/parallel.hpp"

namespace rftwin {

using nlohmann::json;

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

json matrix_to_json(const FeatureMatrix& m) {
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

FeatureMatrix matrix_from_json(const json& j) {
  return FeatureMatrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                       j.at("data").get<std::vector<double>>());
}

void check_dim(std::size_t expected, std::size_t got) {
  if (expected != got) {
    throw Error(ErrorKind::DimensionMismatch,
                "model expects " + std::to_string(expected) + " features, got " + std::to_string(got));
  }
}

}  // namespace

std::string_view to_string(DetectorKind kind) noexcept {
  switch (kind) {
    case DetectorKind::Aed: return "aed";
    case DetectorKind::Ocsvm: return "ocsvm";
    case DetectorKind::Lof: return "lof";
    case DetectorKind::Dbscan: return "dbscan";
  }
  return "unknown";
}

DetectorKind parse_detector(std::string_view name) {
  for (const auto kind : kAllDetectors) {
    if (to_string(kind) == name) return kind;
  }
  throw Error(ErrorKind::InvalidConfig, "unknown detector '" + std::string(name) + "'");
}

DetectorModel fit_detector(DetectorKind kind, const FeatureMatrix& train, const DetectorParams& p) {
  switch (kind) {
    case DetectorKind::Aed: return aed_fit(train, p.aed_percentile);
    case DetectorKind::Ocsvm: return ocsvm_fit(train, p.ocsvm);
    case DetectorKind::Lof: return lof_fit(train, p.lof_k, p.lof_threshold, p.threads);
    case DetectorKind::Dbscan: return dbscan_fit(train, p.dbscan, p.threads);
  }
  throw Error(ErrorKind::InvalidConfig, "unknown detector kind");
}

DetectorKind kind_of(const DetectorModel& model) noexcept {
  return std::visit(overloaded{[](const AedModel&) { return DetectorKind::Aed; },
                               [](const OcsvmModel&) { return DetectorKind::Ocsvm; },
                               [](const LofModel&) { return DetectorKind::Lof; },
                               [](const DbscanModel&) { return DetectorKind::Dbscan; }},
                    model);
}

std::size_t feature_dim(const DetectorModel& model) noexcept {
  return std::visit(overloaded{[](const AedModel& m) { return m.n_features; },
                               [](const OcsvmModel& m) { return m.support_vectors.cols(); },
                               [](const LofModel& m) { return m.index->dim(); },
                               [](const DbscanModel& m) { return m.core->dim(); }},
                    model);
}

double score(const DetectorModel& model, std::span<const double> x) {
  check_dim(feature_dim(model), x.size());
  return std::visit(overloaded{[&](const AedModel& m) { return aed_score(m, x); },
                               [&](const OcsvmModel& m) { return ocsvm_score(m, x); },
                               [&](const LofModel& m) { return lof_score(m, x); },
                               [&](const DbscanModel& m) { return dbscan_score(m, x); }},
                    model);
}

bool is_anomalous_score(const DetectorModel& model, double s) noexcept {
  return std::visit(overloaded{[&](const AedModel& m) { return s >= m.threshold; },
                               [&](const OcsvmModel&) { return s > 0.0; },
                               [&](const LofModel& m) { return s > m.threshold; },
                               [&](const DbscanModel& m) { return s > m.eps; }},
                    model);
}

bool predict(const DetectorModel& model, std::span<const double> x) { return is_anomalous_score(model, score(model, x)); }

std::vector<double> score_batch(const DetectorModel& model, const FeatureMatrix& x, unsigned threads) {
  if (x.rows() > 0) check_dim(feature_dim(model), x.cols());
  std::vector<double> out(x.rows());
  parallel_for(x.rows(), threads, [&](std::size_t i) { out[i] = score(model, x.row(i)); });
  return out;
}

void save_model(const StoredModel& stored, const std::filesystem::path& path) {
  const auto& model = stored.model;
  json doc = {{"format", "rftwin-model"},
              {"version", kModelFormatVersion},
              {"detector", std::string(to_string(kind_of(model)))},
              {"n_features", feature_dim(model)},
              {"sorted_features", stored.sorted_features}};
  std::visit(overloaded{[&](const AedModel& m) {
                          doc["threshold"] = m.threshold;
                          doc["percentile"] = m.percentile;
                        },
                        [&](const OcsvmModel& m) {
                          doc["support_vectors"] = matrix_to_json(m.support_vectors);
                          doc["alpha"] = m.alpha;
                          doc["rho"] = m.rho;
                          doc["gamma"] = m.gamma;
                          doc["nu"] = m.nu;
                          doc["n_train"] = m.n_train;
                          doc["kkt_residual"] = m.kkt_residual;
                          doc["iterations"] = m.iterations;
                        },
                        [&](const LofModel& m) {
                          doc["train"] = matrix_to_json(m.index->points());
                          doc["k"] = m.k;
                          doc["k_distance"] = m.k_distance;
                          doc["lrd"] = m.lrd;
                          doc["threshold"] = m.threshold;
                        },
                        [&](const DbscanModel& m) {
                          doc["core_points"] = matrix_to_json(m.core->points());
                          doc["eps"] = m.eps;
                          doc["min_pts"] = m.min_pts;
                          doc["eps_mode"] = m.eps_mode == EpsMode::Fixed ? "fixed" : "kdist-percentile";
                          doc["eps_percentile"] = m.eps_percentile;
                        }},
             model);
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out << doc.dump() << '\n';
  if (!out) throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
}

StoredModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  try {
    const json doc = json::parse(in);
    if (doc.at("format") != "rftwin-model") {
      throw Error(ErrorKind::MalformedFile, path.string() + ": not an rftwin model file");
    }
    if (doc.at("version").get<int>() != kModelFormatVersion) {
      throw Error(ErrorKind::MalformedFile, path.string() + ": unsupported model version");
    }
    StoredModel stored;
    stored.sorted_features = doc.at("sorted_features").get<bool>();
    const auto n_features = doc.at("n_features").get<std::size_t>();
    switch (parse_detector(doc.at("detector").get<std::string>())) {
      case DetectorKind::Aed: {
        AedModel m;
        m.threshold = doc.at("threshold").get<double>();
        m.percentile = doc.at("percentile").get<double>();
        m.n_features = n_features;
        stored.model = m;
        break;
      }
      case DetectorKind::Ocsvm: {
        OcsvmModel m;
        m.support_vectors = matrix_from_json(doc.at("support_vectors"));
        m.alpha = doc.at("alpha").get<std::vector<double>>();
        m.rho = doc.at("rho").get<double>();
        m.gamma = doc.at("gamma").get<double>();
        m.nu = doc.at("nu").get<double>();
        m.n_train = doc.at("n_train").get<std::size_t>();
        m.kkt_residual = doc.at("kkt_residual").get<double>();
        m.iterations = doc.at("iterations").get<std::size_t>();
        if (m.alpha.size() != m.support_vectors.rows()) {
          throw Error(ErrorKind::MalformedFile, path.string() + ": alpha/support vector count mismatch");
        }
        stored.model = std::move(m);
        break;
      }
      case DetectorKind::Lof: {
        LofModel m;
        m.index = std::make_shared<const KnnIndex>(matrix_from_json(doc.at("train")));
        m.k = doc.at("k").get<std::size_t>();
        m.k_distance = doc.at("k_distance").get<std::vector<double>>();
        m.lrd = doc.at("lrd").get<std::vector<double>>();
        m.threshold = doc.at("threshold").get<double>();
        if (m.k_distance.size() != m.index->size() || m.lrd.size() != m.index->size() || m.k >= m.index->size()) {
          throw Error(ErrorKind::MalformedFile, path.string() + ": inconsistent LOF state");
        }
        stored.model = std::move(m);
        break;
      }
      case DetectorKind::Dbscan: {
        DbscanModel m;
        m.core = std::make_shared<const KnnIndex>(matrix_from_json(doc.at("core_points")));
        m.eps = doc.at("eps").get<double>();
        m.min_pts = doc.at("min_pts").get<std::size_t>();
        m.eps_percentile = doc.at("eps_percentile").get<double>();
        const auto mode = doc.at("eps_mode").get<std::string>();
        if (mode == "fixed") m.eps_mode = EpsMode::Fixed;
        else if (mode == "kdist-percentile") m.eps_mode = EpsMode::KdistPercentile;
        else throw Error(ErrorKind::MalformedFile, path.string() + ": unknown eps_mode '" + mode + "'");
        stored.model = std::move(m);
        break;
      }
    }
    if (feature_dim(stored.model) != n_features) {
      throw Error(ErrorKind::MalformedFile, path.string() + ": n_features disagrees with the stored state");
    }
    return stored;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::MalformedFile, path.string() + ": " + e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidConfig || e.kind() == ErrorKind::LengthMismatch) {
      throw Error(ErrorKind::MalformedFile, path.string() + ": " + e.what());
    }
    throw;
  }
}

}  // namespace rftwin
