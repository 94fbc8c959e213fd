#include "anast/data.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "anast/rng.hpp"

namespace anast {

FeatureStore FeatureStore::select_classes(
    const std::vector<std::string>& classes) const {
  std::unordered_set<std::string> wanted(classes.begin(), classes.end());
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (wanted.count(labels[i])) keep.push_back(i);
  }
  FeatureStore out;
  out.source_name = source_name;
  out.features = Matrix(keep.size(), features.cols());
  out.labels.reserve(keep.size());
  for (std::size_t r = 0; r < keep.size(); ++r) {
    std::copy(features.row(keep[r]), features.row(keep[r]) + features.cols(),
              out.features.row(r));
    out.labels.push_back(labels[keep[r]]);
  }
  return out;
}

std::vector<std::string> FeatureStore::class_labels() const {
  std::vector<std::string> out;
  std::unordered_set<std::string> seen;
  for (const auto& l : labels) {
    if (seen.insert(l).second) out.push_back(l);
  }
  return out;
}

void SyntheticSpec::validate() const {
  std::ostringstream msg;
  if (classes < 1)
    msg << "classes must be >= 1";
  else if (samples_per_class < 1)
    msg << "samples_per_class must be >= 1";
  else if (dim < 1)
    msg << "dim must be >= 1";
  else if (!(separation >= 0.0) || !std::isfinite(separation))
    msg << "separation must be >= 0";
  else if (!(stddev > 0.0) || !std::isfinite(stddev))
    msg << "stddev must be > 0";
  else
    return;
  throw std::invalid_argument("synthetic spec: " + msg.str());
}

FeatureStore gen_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const std::size_t c = spec.classes, m = spec.samples_per_class, d = spec.dim;

  // Class means at pairwise distance `separation`: scaled basis vectors when
  // they fit, random directions otherwise (then the spacing is approximate).
  const double radius = spec.separation / std::sqrt(2.0);
  Matrix means(c, d);
  if (c <= d) {
    for (std::size_t k = 0; k < c; ++k) means(k, k) = radius;
  } else {
    GaussianStream dir(derive_seed(spec.seed, fnv1a64("means")));
    for (std::size_t k = 0; k < c; ++k) {
      double norm2 = 0.0;
      for (std::size_t j = 0; j < d; ++j) {
        means(k, j) = dir.next();
        norm2 += means(k, j) * means(k, j);
      }
      const double inv = norm2 > 0.0 ? radius / std::sqrt(norm2) : 0.0;
      for (std::size_t j = 0; j < d; ++j) means(k, j) *= inv;
    }
  }

  FeatureStore store;
  store.features = Matrix(c * m, d);
  store.labels.reserve(c * m);
  {
    std::ostringstream name;
    name << "synthetic(seed=" << spec.seed << ",classes=" << c << ")";
    store.source_name = name.str();
  }
  for (std::size_t k = 0; k < c; ++k) {
    // One stream per class keyed by (seed, class index): samples of class k
    // do not depend on how many other classes exist.
    GaussianStream noise(derive_seed(spec.seed, k + 1));
    std::ostringstream label;
    label << "class_" << k;
    for (std::size_t s = 0; s < m; ++s) {
      double* row = store.features.row(k * m + s);
      for (std::size_t j = 0; j < d; ++j) {
        row[j] = means(k, j) + spec.stddev * noise.next();
      }
      store.labels.push_back(label.str());
    }
  }
  return store;
}

std::pair<FeatureStore, FeatureStore> split_train_test(const FeatureStore& s,
                                                       double ratio,
                                                       std::uint64_t seed) {
  if (!(ratio > 0.0) || !(ratio < 1.0)) {
    std::ostringstream msg;
    msg << "split ratio must lie in (0,1), got " << ratio;
    throw std::invalid_argument(msg.str());
  }
  if (s.labels.size() != s.rows()) {
    throw std::invalid_argument("feature store: label count != rows");
  }

  // Group row indices per class, original order.
  std::vector<std::string> order = s.class_labels();
  std::unordered_map<std::string, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < s.labels.size(); ++i) {
    groups[s.labels[i]].push_back(i);
  }

  std::vector<bool> is_test(s.rows(), false);
  for (const auto& label : order) {
    auto& idx = groups[label];
    if (idx.size() < 2) {
      throw std::invalid_argument("split: class \"" + label +
                                  "\" has fewer than 2 samples");
    }
    // Fisher-Yates keyed by (seed, label), then the tail becomes the test
    // set: floor(n*(1-ratio)) rows, remainder to train. The epsilon keeps
    // exact products exact (0.2*10 must give 2 test rows even though the
    // double product lands at 1.9999...); at least one row stays in train.
    SplitMix64 rng(derive_seed(seed, fnv1a64(label)));
    for (std::size_t i = idx.size() - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(rng.next() % (i + 1));
      std::swap(idx[i], idx[j]);
    }
    const std::size_t n_test = std::min(
        idx.size() - 1,
        static_cast<std::size_t>(std::floor(
            static_cast<double>(idx.size()) * (1.0 - ratio) + 1e-9)));
    for (std::size_t k = idx.size() - n_test; k < idx.size(); ++k) {
      is_test[idx[k]] = true;
    }
  }

  auto collect = [&](bool want_test) {
    FeatureStore out;
    out.source_name = s.source_name;
    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < s.rows(); ++i) {
      if (is_test[i] == want_test) keep.push_back(i);
    }
    out.features = Matrix(keep.size(), s.features.cols());
    for (std::size_t r = 0; r < keep.size(); ++r) {
      std::copy(s.features.row(keep[r]), s.features.row(keep[r]) + s.dim(),
                out.features.row(r));
      out.labels.push_back(s.labels[keep[r]]);
    }
    return out;
  };
  return {collect(false), collect(true)};
}

}  // namespace anast
