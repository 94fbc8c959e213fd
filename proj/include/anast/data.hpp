#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "anast/classifier.hpp"
#include "anast/matrix.hpp"

namespace anast {

// Pre-expansion embeddings with one label per row, standing in for the
// outputs of a frozen feature extractor.
struct FeatureStore {
  Matrix features;  // n x d_in
  std::vector<std::string> labels;
  std::string source_name;

  std::size_t rows() const { return features.rows(); }
  std::size_t dim() const { return features.cols(); }
  LabeledFeatures labeled() const { return {features, labels}; }

  // Rows whose label is in `classes`, original order preserved.
  FeatureStore select_classes(const std::vector<std::string>& classes) const;

  // Distinct labels in first-seen order.
  std::vector<std::string> class_labels() const;
};

// Desk-scale stand-in for real embedding corpora: a Gaussian blob per class.
struct SyntheticSpec {
  std::size_t classes = 0;
  std::size_t samples_per_class = 0;
  std::size_t dim = 0;
  double separation = 0.0;  // pairwise distance between class means
  double stddev = 1.0;      // within-class std per dimension
  std::uint64_t seed = 0;

  void validate() const;
};

// Deterministic per seed. Class c's mean sits at distance `separation` from
// every other mean when classes <= dim (scaled basis vectors); otherwise
// means fall on random directions with approximately that spacing. Labels are
// "class_0".."class_{C-1}", rows grouped by class.
FeatureStore gen_synthetic(const SyntheticSpec& spec);

// Per-class stratified split: each class is partitioned at `ratio`
// independently (remainder to train), deterministically per seed. Classes are
// keyed by label hash, so the outcome does not depend on row order of other
// classes. Errors on any class with fewer than 2 samples.
std::pair<FeatureStore, FeatureStore> split_train_test(const FeatureStore& s,
                                                       double ratio,
                                                       std::uint64_t seed);

// "ANFT" v1 binary format: magic, version u32, n u64, d u64, n
// length-prefixed UTF-8 labels, row-major f64, all little-endian.
// Text format: comma-separated, one row per line, last field the label,
// optional header. save_features picks text for .csv/.txt paths.
void save_features(const FeatureStore& store, const std::string& path);
FeatureStore load_features(const std::string& path);

}  // namespace anast
