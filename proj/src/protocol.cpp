#include "anast/protocol.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "anast/cholesky.hpp"

namespace anast {

void AccuracyMatrix::validate() const {
  if (rows.empty()) throw std::invalid_argument("accuracy matrix has no rows");
  for (std::size_t t = 0; t < rows.size(); ++t) {
    if (!rows[t].empty() && rows[t].size() != t + 1) {
      throw std::invalid_argument("accuracy matrix row " + std::to_string(t) +
                                  " has " + std::to_string(rows[t].size()) +
                                  " entries, expected " +
                                  std::to_string(t + 1) + " or none");
    }
    for (double a : rows[t]) {
      if (!std::isfinite(a) || a < 0.0 || a > 1.0) {
        throw std::invalid_argument("accuracy outside [0,1] in row " +
                                    std::to_string(t));
      }
    }
  }
  if (rows.back().size() != rows.size()) {
    throw std::invalid_argument(
        "final accuracy row must cover every learned task");
  }
}

double acc_metric(const AccuracyMatrix& m) {
  m.validate();
  const std::vector<double>& last = m.rows.back();
  double sum = 0.0;
  for (double a : last) sum += a;
  return sum / static_cast<double>(last.size());
}

double bwt_metric(const AccuracyMatrix& m) {
  m.validate();
  const std::size_t t_count = m.rows.size();
  if (t_count < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < t_count; ++i) {
    if (m.rows[i].empty()) {
      throw std::invalid_argument(
          "backward transfer needs the diagonal, but task " +
          std::to_string(i) + " was not evaluated when learned");
    }
    sum += m.rows.back()[i] - m.rows[i][i];
  }
  return sum / static_cast<double>(t_count - 1);
}

namespace {

struct EvalCounts {
  std::size_t correct = 0;
  std::size_t total = 0;
};

EvalCounts evaluate_counts(const AnalyticState& state, const FeatureStore& data,
                           std::vector<std::string>* unknown) {
  EvalCounts c;
  c.total = data.rows();
  if (c.total == 0) return c;
  const std::vector<std::string> predicted = predict(state, data.features);
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const std::string& truth = data.labels[i];
    if (!state.registry.index_of(truth)) {
      if (unknown != nullptr &&
          std::find(unknown->begin(), unknown->end(), truth) ==
              unknown->end()) {
        unknown->push_back(truth);
      }
      continue;  // a label the model never saw is always a miss
    }
    if (predicted[i] == truth) ++c.correct;
  }
  return c;
}

struct TaskSplit {
  FeatureStore train;
  FeatureStore test;
};

std::vector<TaskSplit> make_splits(const TaskManifest& m, RunReport& rep) {
  std::vector<TaskSplit> splits;
  splits.reserve(m.tasks.size());
  for (const TaskSpec& task : m.tasks) {
    FeatureStore data = m.task_data(task);
    auto [train, test] = split_train_test(data, m.split_ratio, m.split_seed);
    TaskSummary summary;
    summary.name = task.name;
    summary.source = task.source;
    summary.classes = task.classes;
    summary.train_rows = train.rows();
    summary.test_rows = test.rows();
    if (summary.test_rows == 0) {
      rep.warnings.push_back("task '" + task.name +
                             "': test split is empty; accuracy reports as 0");
    }
    rep.tasks.push_back(std::move(summary));
    splits.push_back({std::move(train), std::move(test)});
  }
  return splits;
}

RunReport init_report(const TaskManifest& m, const std::string& method) {
  RunReport rep;
  rep.scenario = m.scenario;
  rep.method = method;
  rep.config.manifest_path = m.manifest_path;
  rep.config.gamma = m.gamma;
  rep.config.expansion = m.expansion;
  rep.config.split_ratio = m.split_ratio;
  rep.config.split_seed = m.split_seed;
  rep.config.source_paths = m.source_paths;
  return rep;
}

std::vector<double> evaluate_row(const AnalyticState& state,
                                 const std::vector<TaskSplit>& splits,
                                 std::size_t upto,
                                 std::vector<EvalCounts>* counts) {
  std::vector<double> row;
  row.reserve(upto + 1);
  for (std::size_t i = 0; i <= upto; ++i) {
    const EvalCounts c = evaluate_counts(state, splits[i].test, nullptr);
    row.push_back(c.total == 0 ? 0.0
                               : static_cast<double>(c.correct) /
                                     static_cast<double>(c.total));
    if (counts != nullptr) counts->push_back(c);
  }
  return row;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

void finish_metrics(RunReport& rep, const std::vector<EvalCounts>& final_row) {
  rep.acc = acc_metric(rep.matrix);
  std::size_t correct = 0;
  std::size_t total = 0;
  for (const EvalCounts& c : final_row) {
    correct += c.correct;
    total += c.total;
  }
  rep.acc_weighted =
      total == 0 ? 0.0
                 : static_cast<double>(correct) / static_cast<double>(total);
  if (rep.method != "joint" && rep.matrix.tasks() >= 2) {
    rep.bwt = bwt_metric(rep.matrix);
    rep.bwt_defined = true;
  } else {
    rep.bwt = 0.0;
    rep.bwt_defined = false;
    rep.warnings.push_back(
        rep.method == "joint"
            ? "backward transfer is not defined for joint training; "
              "reported as 0"
            : "backward transfer is not defined for a single task; "
              "reported as 0");
  }
}

Matrix pad_columns(const Matrix& w, std::size_t cols) {
  if (cols == w.cols()) return w;
  Matrix out(w.rows(), cols);
  for (std::size_t i = 0; i < w.rows(); ++i) {
    for (std::size_t j = 0; j < w.cols(); ++j) out(i, j) = w(i, j);
  }
  return out;
}

}  // namespace

double evaluate_accuracy(const AnalyticState& state, const FeatureStore& data,
                         std::vector<std::string>* unknown) {
  const EvalCounts c = evaluate_counts(state, data, unknown);
  return c.total == 0 ? 0.0
                      : static_cast<double>(c.correct) /
                            static_cast<double>(c.total);
}

RunReport run_anast(const TaskManifest& manifest, AnalyticState* final_state) {
  manifest.validate();
  RunReport rep = init_report(manifest, "anast");
  const std::vector<TaskSplit> splits = make_splits(manifest, rep);
  const Projector projector = make_projector(manifest.expansion);
  AnalyticState state =
      init_empty(manifest.gamma, manifest.expansion.output_dim, projector);
  std::vector<EvalCounts> final_row;
  for (std::size_t t = 0; t < splits.size(); ++t) {
    const auto start = std::chrono::steady_clock::now();
    try {
      if (t == 0) {
        state =
            fit_task0(splits[t].train.labeled(), manifest.gamma, projector);
      } else {
        AdaptStats stats;
        state = adapt(state, splits[t].train.labeled(), &stats);
        if (stats.empty_batch) {
          rep.warnings.push_back("task '" + manifest.tasks[t].name +
                                 "': empty training batch");
        }
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("task '" + manifest.tasks[t].name +
                               "': " + e.what());
    }
    std::vector<EvalCounts> counts;
    rep.matrix.rows.push_back(evaluate_row(state, splits, t, &counts));
    if (t + 1 == splits.size()) final_row = std::move(counts);
    rep.task_seconds.push_back(seconds_since(start));
  }
  finish_metrics(rep, final_row);
  if (final_state != nullptr) *final_state = std::move(state);
  return rep;
}

RunReport run_naive(const TaskManifest& manifest, AnalyticState* final_state) {
  manifest.validate();
  RunReport rep = init_report(manifest, "naive");
  const std::vector<TaskSplit> splits = make_splits(manifest, rep);
  const Projector projector = make_projector(manifest.expansion);
  AnalyticState state =
      init_empty(manifest.gamma, manifest.expansion.output_dim, projector);
  std::vector<EvalCounts> final_row;
  for (std::size_t t = 0; t < splits.size(); ++t) {
    const auto start = std::chrono::steady_clock::now();
    try {
      if (t == 0) {
        state =
            fit_task0(splits[t].train.labeled(), manifest.gamma, projector);
      } else {
        // Fine-tune analogue: same padded update, but against a fresh
        // single-task inverse. The prior gamma*I is all that ties the new
        // weights to the old ones, so earlier classes fade.
        const FeatureStore& train = splits[t].train;
        ClassRegistry registry = state.registry;
        for (const std::string& label : train.labels) registry.add(label);
        const Matrix w_pad = pad_columns(state.w, registry.size());
        const Matrix f_exp = expand(projector, train.features);
        const Matrix y = one_hot(train.labels, registry);
        Matrix normal = gram(f_exp);
        add_diagonal(normal, manifest.gamma);
        Matrix r_task = spd_inverse(normal);
        const Matrix residual = y - matmul(f_exp, w_pad);
        state.w =
            w_pad + matmul(r_task, matmul(f_exp.transposed(), residual));
        state.r = std::move(r_task);
        state.registry = std::move(registry);
        state.samples_seen += train.rows();
        state.tasks_seen += 1;
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("task '" + manifest.tasks[t].name +
                               "': " + e.what());
    }
    std::vector<EvalCounts> counts;
    rep.matrix.rows.push_back(evaluate_row(state, splits, t, &counts));
    if (t + 1 == splits.size()) final_row = std::move(counts);
    rep.task_seconds.push_back(seconds_since(start));
  }
  finish_metrics(rep, final_row);
  if (final_state != nullptr) *final_state = std::move(state);
  return rep;
}

RunReport run_joint(const TaskManifest& manifest, AnalyticState* final_state) {
  manifest.validate();
  RunReport rep = init_report(manifest, "joint");
  const std::vector<TaskSplit> splits = make_splits(manifest, rep);
  const Projector projector = make_projector(manifest.expansion);
  const auto start = std::chrono::steady_clock::now();
  std::vector<LabeledFeatures> batches;
  batches.reserve(splits.size());
  std::size_t total_rows = 0;
  for (const TaskSplit& s : splits) {
    total_rows += s.train.rows();
    batches.push_back(s.train.labeled());
  }
  JointSolution sol = joint_fit(batches, manifest.gamma, projector);
  AnalyticState state;
  state.w = std::move(sol.w);
  state.r = std::move(sol.r);
  state.registry = std::move(sol.registry);
  state.gamma = manifest.gamma;
  state.d_exp = manifest.expansion.output_dim;
  state.samples_seen = total_rows;
  state.tasks_seen = splits.size();
  state.projector = projector;
  rep.matrix.rows.assign(splits.size(), {});
  std::vector<EvalCounts> final_row;
  rep.matrix.rows.back() =
      evaluate_row(state, splits, splits.size() - 1, &final_row);
  rep.task_seconds.push_back(seconds_since(start));
  finish_metrics(rep, final_row);
  if (final_state != nullptr) *final_state = std::move(state);
  return rep;
}

}  // namespace anast
