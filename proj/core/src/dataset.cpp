#include "rftwin/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "rftwin/error.hpp"
#include "rftwin/key_values.hpp"
#include "rftwin/parallel.hpp"

namespace rftwin {

FeatureMatrix::FeatureMatrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    throw Error(ErrorKind::LengthMismatch, "feature matrix data does not match its shape");
  }
}

FeatureMatrix to_matrix(const std::vector<DeltaSample>& samples) {
  if (samples.empty()) return {};
  const std::size_t cols = samples.front().features.size();
  FeatureMatrix m(samples.size(), cols);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].features.size() != cols) {
      throw Error(ErrorKind::DimensionMismatch, "sample " + std::to_string(i) + " has " +
                                                    std::to_string(samples[i].features.size()) +
                                                    " features, expected " + std::to_string(cols));
    }
    std::copy(samples[i].features.begin(), samples[i].features.end(), m.row(i).begin());
  }
  return m;
}

std::vector<Label> labels_of(const std::vector<DeltaSample>& samples) {
  std::vector<Label> labels(samples.size());
  std::transform(samples.begin(), samples.end(), labels.begin(), [](const DeltaSample& s) { return s.label; });
  return labels;
}

std::size_t Dataset::feature_dim() const {
  if (!train.empty()) return train.front().features.size();
  if (!test.empty()) return test.front().features.size();
  return 0;
}

std::size_t Dataset::test_anomaly_count() const {
  return static_cast<std::size_t>(
      std::count_if(test.begin(), test.end(), [](const DeltaSample& s) { return s.label == Label::Anomaly; }));
}

bool is_anomaly_slot(std::size_t index, std::size_t n_test, std::size_t n_anomalies) noexcept {
  if (n_test == 0) return false;
  // Bresenham-style spreading: exactly n_anomalies slots over [0, n_test).
  // Products stay below 2^64 for n_test < 2^32.
  const std::uint64_t before = static_cast<std::uint64_t>(index) * n_anomalies / n_test;
  const std::uint64_t after = static_cast<std::uint64_t>(index + 1) * n_anomalies / n_test;
  return after > before;
}

DeltaSample simulate_sample(const ScenarioConfig& config, const ShadowingField& field, bool anomalous,
                            RandomStream& rng) {
  const auto scenario = sample_scenario(config, anomalous, rng);
  const auto model = PropagationModel::from(config);
  const std::size_t n_tx = scenario.regular_tx.size() + (scenario.jammer ? 1 : 0);
  const auto shadowing = field.sample(n_tx, rng);
  const auto measured = received_rss(scenario, shadowing, model);
  const auto predicted = expected_rss(scenario, model);
  return {delta(measured, predicted), anomalous ? Label::Anomaly : Label::Normal};
}

Dataset generate(const ScenarioConfig& config, std::size_t n_train, std::size_t n_test, double anomaly_fraction,
                 unsigned threads) {
  validate(config);
  if (n_train < 1 || n_test < 1) throw Error(ErrorKind::InvalidConfig, "n_train and n_test must be >= 1");
  if (n_test >= (std::size_t{1} << 32)) throw Error(ErrorKind::InvalidConfig, "n_test must be < 2^32");
  if (!(anomaly_fraction >= 0.0 && anomaly_fraction <= 1.0)) {
    throw Error(ErrorKind::InvalidConfig, "anomaly_fraction must lie in [0, 1]");
  }

  const auto su = build_su_grid(config.area_side, config.grid_size);
  const ShadowingField field(su, config.sigma_shadow, config.d_cor);
  const auto n_anomalies = static_cast<std::size_t>(std::floor(anomaly_fraction * static_cast<double>(n_test)));

  Dataset ds;
  ds.config = config;
  ds.anomaly_fraction = anomaly_fraction;
  ds.train.resize(n_train);
  ds.test.resize(n_test);

  parallel_for(n_train + n_test, threads, [&](std::size_t k) {
    if (k < n_train) {
      auto rng = make_substream(config.master_seed, StreamPhase::Train, k);
      ds.train[k] = simulate_sample(config, field, false, rng);
    } else {
      const std::size_t i = k - n_train;
      auto rng = make_substream(config.master_seed, StreamPhase::Test, i);
      ds.test[i] = simulate_sample(config, field, is_anomaly_slot(i, n_test, n_anomalies), rng);
    }
  });
  return ds;
}

DeltaSample sort_descending(DeltaSample sample) {
  std::sort(sample.features.begin(), sample.features.end(), std::greater<>());
  return sample;
}

Dataset sort_descending(const Dataset& dataset) {
  Dataset out = dataset;
  for (auto& s : out.train) s = sort_descending(std::move(s));
  for (auto& s : out.test) s = sort_descending(std::move(s));
  out.sorted_features = true;
  return out;
}

std::filesystem::path meta_path_for(const std::filesystem::path& csv_path) {
  auto p = csv_path;
  p.replace_extension(".meta");
  return p;
}

namespace {

void write_row(std::ostream& out, const DeltaSample& s) {
  out << (s.label == Label::Anomaly ? '1' : '0');
  for (const double v : s.features) out << ',' << format_double(v);
  out << '\n';
}

[[noreturn]] void malformed(const std::filesystem::path& path, std::size_t line, const std::string& what) {
  throw Error(ErrorKind::MalformedFile, path.string() + ":" + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  while (true) {
    const auto comma = line.find(',');
    cells.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return cells;
}

}  // namespace

void save_csv(const Dataset& dataset, const std::filesystem::path& path) {
  const std::size_t dim = dataset.feature_dim();
  {
    std::ofstream out(path);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
    out << "label";
    for (std::size_t j = 0; j < dim; ++j) out << ",delta_" << j;
    out << '\n';
    for (const auto& s : dataset.train) write_row(out, s);
    for (const auto& s : dataset.test) write_row(out, s);
    if (!out) throw Error(ErrorKind::Io, "write to '" + path.string() + "' failed");
  }

  auto kv = to_key_values(dataset.config);
  kv.set("generator_version", kDatasetGeneratorVersion);
  kv.set("n_train", std::to_string(dataset.train.size()));
  kv.set("n_test", std::to_string(dataset.test.size()));
  kv.set("n_features", std::to_string(dim));
  kv.set("anomaly_fraction", format_double(dataset.anomaly_fraction));
  kv.set("sorted_features", dataset.sorted_features ? "true" : "false");
  const auto meta = meta_path_for(path);
  std::ofstream out(meta);
  if (!out) throw Error(ErrorKind::Io, "cannot write '" + meta.string() + "'");
  out << "# rftwin dataset metadata\n";
  write_key_values(out, kv);
  if (!out) throw Error(ErrorKind::Io, "write to '" + meta.string() + "' failed");
}

Dataset load_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");

  std::string line;
  if (!std::getline(in, line) || line.empty()) malformed(path, 1, "missing header");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split_commas(line);
  if (header.front() != "label") malformed(path, 1, "header must start with 'label'");
  const std::size_t dim = header.size() - 1;
  for (std::size_t j = 0; j < dim; ++j) {
    if (header[j + 1] != "delta_" + std::to_string(j)) {
      malformed(path, 1, "expected column 'delta_" + std::to_string(j) + "'");
    }
  }

  std::vector<DeltaSample> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split_commas(line);
    if (cells.size() != dim + 1) {
      malformed(path, line_no, "expected " + std::to_string(dim + 1) + " columns, found " +
                                   std::to_string(cells.size()));
    }
    DeltaSample s;
    if (cells[0] == "0") s.label = Label::Normal;
    else if (cells[0] == "1") s.label = Label::Anomaly;
    else malformed(path, line_no, "bad label token '" + std::string(cells[0]) + "'");
    s.features.resize(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      try {
        s.features[j] = parse_double(cells[j + 1], "delta");
      } catch (const Error&) {
        malformed(path, line_no, "bad number '" + std::string(cells[j + 1]) + "'");
      }
    }
    rows.push_back(std::move(s));
  }

  const auto meta_path = meta_path_for(path);
  if (!std::filesystem::exists(meta_path)) {
    throw Error(ErrorKind::Io, "missing metadata sidecar '" + meta_path.string() + "'");
  }
  const auto kv = read_key_values(meta_path);
  Dataset ds;
  std::size_t n_train = 0;
  std::size_t n_test = 0;
  for (const auto& [key, value] : kv.entries()) {
    if (set_config_field(ds.config, key, value)) continue;
    if (key == "n_train") n_train = parse_u64(value, key);
    else if (key == "n_test") n_test = parse_u64(value, key);
    else if (key == "anomaly_fraction") ds.anomaly_fraction = parse_double(value, key);
    else if (key == "sorted_features") ds.sorted_features = parse_bool(value, key);
    else if (key == "n_features") {
      if (parse_u64(value, key) != dim) malformed(meta_path, 0, "n_features disagrees with the CSV header");
    } else if (key != "generator_version") {
      malformed(meta_path, 0, "unknown key '" + key + "'");
    }
  }
  if (n_train + n_test != rows.size()) {
    malformed(meta_path, 0, "n_train + n_test = " + std::to_string(n_train + n_test) + " but the CSV has " +
                                std::to_string(rows.size()) + " rows");
  }
  ds.train.assign(std::make_move_iterator(rows.begin()), std::make_move_iterator(rows.begin() + n_train));
  ds.test.assign(std::make_move_iterator(rows.begin() + n_train), std::make_move_iterator(rows.end()));
  for (std::size_t i = 0; i < ds.train.size(); ++i) {
    if (ds.train[i].label != Label::Normal) malformed(path, i + 2, "training rows must be normal");
  }
  return ds;
}

}  // namespace rftwin
