#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "anast/classifier.hpp"
#include "anast/manifest.hpp"

namespace anast {

// Task-wise evaluation grid. rows[t] holds accuracies on the test sets of
// tasks 0..t measured after learning through task t. An empty row means that
// step was not evaluated (joint runs fill only the final row).
struct AccuracyMatrix {
  std::vector<std::vector<double>> rows;

  std::size_t tasks() const { return rows.size(); }
  double at(std::size_t t, std::size_t i) const { return rows[t][i]; }
  void validate() const;
};

// Mean of the final row: average accuracy across all completed tasks.
double acc_metric(const AccuracyMatrix& m);

// Backward transfer: (1/(T-1)) * sum_i (A[T-1][i] - A[i][i]) over i < T-1.
// Forgetting makes it negative. Returns 0 for T < 2 (callers flag it).
double bwt_metric(const AccuracyMatrix& m);

// Per-task bookkeeping echoed into reports.
struct TaskSummary {
  std::string name;
  std::string source;
  std::vector<std::string> classes;
  std::size_t train_rows = 0;
  std::size_t test_rows = 0;
};

// Everything needed to reproduce a run bit-for-bit (given the feature files).
struct ConfigEcho {
  std::string manifest_path;
  double gamma = 0.0;
  ExpansionSpec expansion;
  double split_ratio = 0.0;
  std::uint64_t split_seed = 0;
  std::map<std::string, std::string> source_paths;
  std::vector<std::string> overrides;  // "key=value" strings, CLI-applied
};

struct RunReport {
  std::string scenario;
  std::string method;  // anast | naive | joint
  AccuracyMatrix matrix;
  double acc = 0.0;           // unweighted mean over final-row tasks
  double acc_weighted = 0.0;  // sample-weighted over final-row test sets
  double bwt = 0.0;
  bool bwt_defined = false;
  std::vector<TaskSummary> tasks;
  std::vector<double> task_seconds;
  ConfigEcho config;
  std::vector<std::string> warnings;
};

// Fraction of rows whose predicted label equals the true one. Labels the
// model never saw count as wrong; they are appended to `unknown` when given.
double evaluate_accuracy(const AnalyticState& state, const FeatureStore& data,
                         std::vector<std::string>* unknown = nullptr);

// The incremental method: fit task 0 in closed form, adapt once per
// subsequent task, evaluate on all past test splits after each task.
RunReport run_anast(const TaskManifest& manifest,
                    AnalyticState* final_state = nullptr);

// Closed-form fine-tuning analogue (lower bound): the ridge fit of each task
// alone, with the previous weights surviving only through the gamma prior.
// Old class columns stay allocated but their contribution decays, which is
// what loses past tasks.
RunReport run_naive(const TaskManifest& manifest,
                    AnalyticState* final_state = nullptr);

// All train splits at once (upper bound). Only the final row is evaluated;
// BWT is reported as 0 with a flag.
RunReport run_joint(const TaskManifest& manifest,
                    AnalyticState* final_state = nullptr);

}  // namespace anast
