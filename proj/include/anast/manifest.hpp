#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "anast/data.hpp"
#include "anast/expansion.hpp"

namespace anast {

// One entry of the incremental schedule: which classes arrive, drawn from
// which feature source.
struct TaskSpec {
  std::string name;
  std::vector<std::string> classes;
  std::string source;
};

// A fully loaded class-incremental scenario. load_manifest() resolves source
// references eagerly so every validation error surfaces at load time.
struct TaskManifest {
  std::string scenario;
  double gamma = 0.0;
  ExpansionSpec expansion;  // resolved: input_dim filled from the sources
  double split_ratio = 0.0;
  std::uint64_t split_seed = 0;
  std::vector<TaskSpec> tasks;
  std::map<std::string, FeatureStore> sources;
  std::map<std::string, std::string> source_paths;
  std::string manifest_path;

  // Rows of the task's source restricted to the task's class set.
  FeatureStore task_data(const TaskSpec& task) const;

  // Re-checks every invariant (used after CLI overrides).
  void validate() const;
};

// Parses and validates a manifest file. Relative source paths resolve
// against the manifest's directory.
TaskManifest load_manifest(const std::string& path);

}  // namespace anast
