#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rftwin/channel.hpp"
#include "rftwin/feature_matrix.hpp"
#include "rftwin/scenario.hpp"
#include "rftwin/twin.hpp"

namespace rftwin {

enum class Label : std::uint8_t { Normal = 0, Anomaly = 1 };

struct DeltaSample {
  DeltaVector features;
  Label label = Label::Normal;

  friend bool operator==(const DeltaSample&, const DeltaSample&) = default;
};

FeatureMatrix to_matrix(const std::vector<DeltaSample>& samples);
std::vector<Label> labels_of(const std::vector<DeltaSample>& samples);

struct Dataset {
  std::vector<DeltaSample> train;  // all normal
  std::vector<DeltaSample> test;
  ScenarioConfig config;
  double anomaly_fraction = 0.5;
  bool sorted_features = false;

  std::size_t feature_dim() const;
  std::size_t test_anomaly_count() const;

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

inline constexpr const char* kDatasetGeneratorVersion = "rftwin-dataset/1";

/// Whether test sample `index` of `n_test` is an anomaly when `n_anomalies`
/// of them must be; spreads anomalies evenly over the index range.
bool is_anomaly_slot(std::size_t index, std::size_t n_test, std::size_t n_anomalies) noexcept;

/// One Delta sample: scenario draw, shadowing draw, measured vs twin RSS.
DeltaSample simulate_sample(const ScenarioConfig& config, const ShadowingField& field, bool anomalous,
                            RandomStream& rng);

/// n_train normal samples plus n_test samples of which
/// floor(anomaly_fraction * n_test) are anomalies. Each sample uses its own
/// sub-stream so the result does not depend on `threads`.
Dataset generate(const ScenarioConfig& config, std::size_t n_train, std::size_t n_test, double anomaly_fraction,
                 unsigned threads = 1);

DeltaSample sort_descending(DeltaSample sample);
/// Copy with every train and test sample sorted; sets sorted_features.
Dataset sort_descending(const Dataset& dataset);

/// Sidecar path holding the scenario config and split sizes.
std::filesystem::path meta_path_for(const std::filesystem::path& csv_path);

/// CSV header `label,delta_0,...,delta_{N-1}`; train rows first, then test
/// rows. Split sizes and the config go to the `.meta` sidecar.
void save_csv(const Dataset& dataset, const std::filesystem::path& path);
Dataset load_csv(const std::filesystem::path& path);

}  // namespace rftwin
