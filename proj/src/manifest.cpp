#include "anast/manifest.hpp"

#include <cmath>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "anast/toml_lite.hpp"

namespace anast {

FeatureStore TaskManifest::task_data(const TaskSpec& task) const {
  auto it = sources.find(task.source);
  if (it == sources.end()) {
    throw std::invalid_argument("task \"" + task.name +
                                "\" references unknown source \"" +
                                task.source + "\"");
  }
  return it->second.select_classes(task.classes);
}

void TaskManifest::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    std::ostringstream msg;
    msg << "manifest: gamma must be positive, got " << gamma;
    throw std::invalid_argument(msg.str());
  }
  if (!(split_ratio > 0.0) || !(split_ratio < 1.0)) {
    std::ostringstream msg;
    msg << "manifest: split_ratio must lie in (0,1), got " << split_ratio;
    throw std::invalid_argument(msg.str());
  }
  expansion.validate();
  if (tasks.empty()) {
    throw std::invalid_argument("manifest: task list is empty");
  }

  std::unordered_set<std::string> task_names;
  for (const auto& task : tasks) {
    if (!task_names.insert(task.name).second) {
      throw std::invalid_argument("manifest: duplicate task name \"" +
                                  task.name + "\"");
    }
    if (task.classes.empty()) {
      throw std::invalid_argument("manifest: task \"" + task.name +
                                  "\" has an empty class set");
    }
    auto src = sources.find(task.source);
    if (src == sources.end()) {
      throw std::invalid_argument("manifest: task \"" + task.name +
                                  "\" references unknown source \"" +
                                  task.source + "\"");
    }
    // Class-set resolvability: every class must actually occur in the store.
    std::unordered_set<std::string> present(src->second.labels.begin(),
                                            src->second.labels.end());
    for (const auto& cls : task.classes) {
      if (!present.count(cls)) {
        throw std::invalid_argument("manifest: task \"" + task.name +
                                    "\" lists class \"" + cls +
                                    "\" absent from source \"" + task.source +
                                    "\"");
      }
    }
  }

  std::size_t d_in = 0;
  for (const auto& [name, store] : sources) {
    if (d_in == 0) {
      d_in = store.dim();
    } else if (store.dim() != d_in) {
      std::ostringstream msg;
      msg << "manifest: source \"" << name << "\" has dimension "
          << store.dim() << " but another source has " << d_in;
      throw std::invalid_argument(msg.str());
    }
  }
  if (expansion.input_dim != d_in) {
    std::ostringstream msg;
    msg << "manifest: expansion input_dim " << expansion.input_dim
        << " does not match source dimension " << d_in;
    throw std::invalid_argument(msg.str());
  }
}

TaskManifest load_manifest(const std::string& path) {
  const toml::Document doc = toml::parse_file(path);
  const std::string ctx = path;

  doc.root.reject_unknown_keys(
      {"scenario", "gamma", "split_ratio", "split_seed"}, ctx);

  TaskManifest m;
  m.manifest_path = path;
  m.scenario = doc.root.require("scenario", ctx).as_string(ctx + ": scenario");
  m.gamma = doc.root.require("gamma", ctx).as_double(ctx + ": gamma");
  m.split_ratio =
      doc.root.require("split_ratio", ctx).as_double(ctx + ": split_ratio");
  m.split_seed =
      doc.root.require("split_seed", ctx).as_u64(ctx + ": split_seed");

  auto exp_it = doc.tables.find("expansion");
  if (exp_it == doc.tables.end()) {
    throw std::invalid_argument(ctx + ": missing [expansion] section");
  }
  const toml::Table& exp = exp_it->second;
  exp.reject_unknown_keys(
      {"kind", "output_dim", "seed", "activation", "scale", "input_dim"},
      ctx + ": [expansion]");
  ExpansionSpec spec;
  if (const auto* v = exp.find("kind")) {
    spec.kind = projector_kind_from_string(v->as_string(ctx + ": kind"));
  }
  if (const auto* v = exp.find("output_dim")) {
    spec.output_dim = v->as_u64(ctx + ": output_dim");
  }
  if (const auto* v = exp.find("seed")) {
    spec.seed = v->as_u64(ctx + ": seed");
  }
  if (const auto* v = exp.find("activation")) {
    spec.activation = activation_from_string(v->as_string(ctx + ": activation"));
  }
  if (const auto* v = exp.find("scale")) {
    spec.scale = v->as_double(ctx + ": scale");
  }
  if (const auto* v = exp.find("input_dim")) {
    spec.input_dim = v->as_u64(ctx + ": input_dim");
  }

  const std::filesystem::path base = std::filesystem::path(path).parent_path();
  auto src_it = doc.arrays.find("sources");
  if (src_it == doc.arrays.end() || src_it->second.empty()) {
    throw std::invalid_argument(ctx + ": no [[sources]] sections");
  }
  for (const auto& table : src_it->second) {
    table.reject_unknown_keys({"name", "path"}, ctx + ": [[sources]]");
    const std::string name =
        table.require("name", ctx + ": [[sources]]").as_string(ctx);
    std::filesystem::path file(
        table.require("path", ctx + ": [[sources]]").as_string(ctx));
    if (file.is_relative()) file = base / file;
    if (m.sources.count(name)) {
      throw std::invalid_argument(ctx + ": duplicate source name \"" + name +
                                  "\"");
    }
    try {
      m.sources.emplace(name, load_features(file.string()));
    } catch (const std::exception& e) {
      throw std::runtime_error(ctx + ": source \"" + name +
                               "\" failed to load: " + e.what());
    }
    m.source_paths.emplace(name, file.string());
  }

  auto task_it = doc.arrays.find("tasks");
  if (task_it == doc.arrays.end() || task_it->second.empty()) {
    throw std::invalid_argument(ctx + ": no [[tasks]] sections");
  }
  for (const auto& table : task_it->second) {
    table.reject_unknown_keys({"name", "source", "classes"},
                              ctx + ": [[tasks]]");
    TaskSpec task;
    task.name = table.require("name", ctx + ": [[tasks]]").as_string(ctx);
    task.source = table.require("source", ctx + ": [[tasks]]").as_string(ctx);
    task.classes = table.require("classes", ctx + ": [[tasks]]")
                       .as_string_array(ctx + ": task classes");
    m.tasks.push_back(std::move(task));
  }

  // Resolve the expansion against the (already loaded) sources, then run the
  // full invariant check.
  const std::size_t d_in =
      m.sources.empty() ? 0 : m.sources.begin()->second.dim();
  m.expansion = spec.resolved(d_in);
  try {
    m.validate();
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(ctx + ": " + e.what());
  }
  return m;
}

}  // namespace anast
