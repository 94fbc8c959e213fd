#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "anast/data.hpp"
#include "anast/manifest.hpp"
#include "anast/protocol.hpp"
#include "anast/report_io.hpp"
#include "oracles.hpp"

using anast::AccuracyMatrix;
using anast::AnalyticState;
using anast::FeatureStore;
using anast::RunReport;
using anast::TaskManifest;

namespace {

AccuracyMatrix mat(std::vector<std::vector<double>> rows) {
  AccuracyMatrix m;
  m.rows = std::move(rows);
  return m;
}

// In-memory scenario: `schedule[t]` classes arrive at task t, drawn from one
// synthetic source whose class blobs sit `separation` apart.
TaskManifest make_manifest(const std::vector<std::size_t>& schedule,
                           std::size_t per_class, std::size_t dim,
                           double separation, std::uint64_t seed,
                           double gamma = 0.01,
                           std::size_t expansion_dim = 64) {
  std::size_t total_classes = 0;
  for (std::size_t n : schedule) total_classes += n;

  anast::SyntheticSpec spec;
  spec.classes = total_classes;
  spec.samples_per_class = per_class;
  spec.dim = dim;
  spec.separation = separation;
  spec.stddev = 0.5;
  spec.seed = seed;

  TaskManifest m;
  m.scenario = "inline-synthetic";
  m.gamma = gamma;
  m.split_ratio = 0.8;
  m.split_seed = seed + 1;
  m.sources.emplace("synthetic", anast::gen_synthetic(spec));
  m.source_paths.emplace("synthetic", "<in-memory>");

  anast::ExpansionSpec es;
  es.input_dim = dim;
  es.output_dim = expansion_dim;
  es.seed = seed + 2;
  m.expansion = es.resolved(dim);

  std::size_t next_class = 0;
  for (std::size_t t = 0; t < schedule.size(); ++t) {
    anast::TaskSpec task;
    task.name = "task" + std::to_string(t);
    task.source = "synthetic";
    for (std::size_t c = 0; c < schedule[t]; ++c) {
      task.classes.push_back("class_" + std::to_string(next_class++));
    }
    m.tasks.push_back(std::move(task));
  }
  m.validate();
  return m;
}

}  // namespace

TEST_CASE("final-row accuracy mean") {
  CHECK(anast::acc_metric(mat({{0.9}})) == 0.9);
  CHECK(anast::acc_metric(mat({{0.7}, {0.9, 0.8}})) == (0.9 + 0.8) / 2.0);
  CHECK(anast::acc_metric(mat({{0.7}, {0.9, 0.8}})) ==
        doctest::Approx(0.85).epsilon(1e-14));
  CHECK(anast::acc_metric(mat({{0.5}, {0.5, 0.5}, {0.5, 0.5, 0.5}})) == 0.5);
  CHECK(anast::acc_metric(mat({{0.37}, {0.37, 0.37}})) ==
        doctest::Approx(0.37).epsilon(1e-14));
}

TEST_CASE("backward transfer sign and arithmetic") {
  CHECK(anast::bwt_metric(mat({{0.9}})) == 0.0);
  CHECK(anast::bwt_metric(mat({{0.6}, {0.6, 0.9}, {0.6, 0.9, 0.4}})) == 0.0);
  CHECK(anast::bwt_metric(mat({{0.9}, {0.7, 0.8}})) == 0.7 - 0.9);
  CHECK(anast::bwt_metric(mat({{0.9}, {0.7, 0.8}})) ==
        doctest::Approx(-0.2).epsilon(1e-14));
  CHECK(anast::bwt_metric(mat({{0.5}, {0.8, 0.9}})) > 0.0);
  CHECK_THROWS_AS(anast::bwt_metric(mat({{}, {0.5, 0.6}})),
                  std::invalid_argument);
}

TEST_CASE("accuracy matrix validation") {
  CHECK_NOTHROW(mat({{0.5}, {0.4, 0.6}}).validate());
  CHECK_NOTHROW(mat({{}, {0.4, 0.6}}).validate());  // skipped early row
  CHECK_THROWS_AS(mat({}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(mat({{0.5, 0.6}}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(mat({{1.5}}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(mat({{-0.1}}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(mat({{0.5}, {}}).validate(), std::invalid_argument);
  AccuracyMatrix nan_m = mat({{0.5}});
  nan_m.rows[0][0] = std::nan("");
  CHECK_THROWS_AS(nan_m.validate(), std::invalid_argument);
}

TEST_CASE("single-task run degenerates cleanly") {
  const TaskManifest m = make_manifest({4}, 30, 6, 8.0, 100);
  const RunReport rep = anast::run_anast(m);
  REQUIRE(rep.matrix.tasks() == 1);
  REQUIRE(rep.matrix.rows[0].size() == 1);
  CHECK(rep.acc == rep.matrix.at(0, 0));
  CHECK(rep.bwt == 0.0);
  CHECK(!rep.bwt_defined);
  CHECK(rep.method == "anast");
  REQUIRE(rep.tasks.size() == 1);
  CHECK(rep.tasks[0].train_rows == 4 * 24);
  CHECK(rep.tasks[0].test_rows == 4 * 6);
}

TEST_CASE("incremental run on separable tasks keeps every task sharp") {
  const TaskManifest m = make_manifest({3, 3, 3}, 40, 10, 10.0, 200);
  AnalyticState state;
  const RunReport rep = anast::run_anast(m, &state);

  REQUIRE(rep.matrix.tasks() == 3);
  for (std::size_t t = 0; t < 3; ++t) {
    REQUIRE(rep.matrix.rows[t].size() == t + 1);  // evaluated 0..t
    for (double a : rep.matrix.rows[t]) CHECK(a >= 0.99);
  }
  CHECK(rep.acc >= 0.99);
  CHECK(rep.acc_weighted >= 0.99);
  CHECK(rep.bwt_defined);
  CHECK(std::abs(rep.bwt) <= 0.01);

  // The learner ends with every class, in arrival order.
  REQUIRE(state.registry.size() == 9);
  for (std::size_t c = 0; c < 9; ++c) {
    CHECK(state.registry.label(c) == "class_" + std::to_string(c));
  }
  CHECK(state.tasks_seen == 3);
}

TEST_CASE("metrics stored in a report are recomputable from its matrix") {
  const TaskManifest m = make_manifest({2, 2}, 25, 5, 4.0, 300);
  for (const auto* method : {"anast", "naive"}) {
    const RunReport rep = std::string(method) == "anast" ? anast::run_anast(m)
                                                         : anast::run_naive(m);
    CHECK(rep.acc == anast::acc_metric(rep.matrix));
    CHECK(rep.bwt == anast::bwt_metric(rep.matrix));
  }
}

TEST_CASE("incremental weights equal the all-at-once weights") {
  const TaskManifest m = make_manifest({2, 3, 2}, 30, 8, 6.0, 400);
  AnalyticState inc, all;
  anast::run_anast(m, &inc);
  anast::run_joint(m, &all);
  CHECK(anast::rel_frobenius_distance(inc.w, all.w) <= 1e-8);
  CHECK(anast::rel_frobenius_distance(inc.r, all.r) <= 1e-8);
  CHECK(inc.registry == all.registry);
}

TEST_CASE("joint runs fill only the final row and bracket the method") {
  const TaskManifest m = make_manifest({3, 3}, 35, 8, 9.0, 500);
  const RunReport inc = anast::run_anast(m);
  const RunReport all = anast::run_joint(m);

  REQUIRE(all.matrix.tasks() == 2);
  CHECK(all.matrix.rows[0].empty());
  REQUIRE(all.matrix.rows[1].size() == 2);
  CHECK(all.bwt == 0.0);
  CHECK(!all.bwt_defined);

  for (std::size_t i = 0; i < 2; ++i) {
    CHECK(std::abs(all.matrix.at(1, i) - inc.matrix.at(1, i)) <= 1e-9);
  }
}

TEST_CASE("one-task runs are method-independent") {
  const TaskManifest m = make_manifest({5}, 20, 6, 7.0, 600);
  const RunReport a = anast::run_anast(m);
  const RunReport n = anast::run_naive(m);
  const RunReport j = anast::run_joint(m);
  CHECK(a.matrix.rows == n.matrix.rows);
  CHECK(a.acc == n.acc);
  CHECK(a.matrix.rows.back() == j.matrix.rows.back());
  CHECK(a.acc == j.acc);
}

TEST_CASE("the per-task-only refit forgets what it no longer sees") {
  const TaskManifest m = make_manifest({4, 4}, 40, 10, 10.0, 700);
  const RunReport inc = anast::run_anast(m);
  const RunReport naive = anast::run_naive(m);

  CHECK(inc.matrix.at(1, 0) >= 0.99);
  CHECK(naive.matrix.at(1, 0) <= 0.5);  // task 0 collapses toward chance
  CHECK(naive.matrix.at(1, 1) >= 0.99);  // current task still learned
  CHECK(naive.bwt < inc.bwt);
  CHECK(inc.bwt >= -1e-6);
}

TEST_CASE("chance-level scenario scores near one over class count") {
  const TaskManifest flat = make_manifest({4}, 250, 6, 0.0, 800);
  const RunReport rep = anast::run_joint(flat);
  CHECK(rep.acc >= 0.25 - 0.05);
  CHECK(rep.acc <= 0.25 + 0.05);
}

TEST_CASE("unknown labels always count as wrong and are reported") {
  const TaskManifest m = make_manifest({3}, 20, 5, 8.0, 900);
  AnalyticState state;
  anast::run_anast(m, &state);

  FeatureStore strangers = anast::gen_synthetic([] {
    anast::SyntheticSpec s;
    s.classes = 2;
    s.samples_per_class = 5;
    s.dim = 5;
    s.separation = 1.0;
    s.stddev = 0.5;
    s.seed = 901;
    return s;
  }());
  for (auto& l : strangers.labels) l = "stranger_" + l;

  std::vector<std::string> unknown;
  const double acc = anast::evaluate_accuracy(state, strangers, &unknown);
  CHECK(acc == 0.0);
  REQUIRE(unknown.size() == 2);  // de-duplicated
  CHECK(unknown[0] == "stranger_class_0");
  CHECK(unknown[1] == "stranger_class_1");
}

TEST_CASE("reports serialize deterministically apart from timing") {
  const TaskManifest m = make_manifest({2, 2}, 25, 6, 6.0, 1000);
  const RunReport a = anast::run_anast(m);
  const RunReport b = anast::run_anast(m);

  nlohmann::json ja = anast::report_to_json(a);
  nlohmann::json jb = anast::report_to_json(b);
  REQUIRE(ja.contains("timing"));
  ja.erase("timing");
  jb.erase("timing");
  CHECK(ja.dump() == jb.dump());
  CHECK(ja.dump().find("seconds") == std::string::npos);

  CHECK(ja["schema"] == "anast-report/1");
  CHECK(ja["scenario"] == "inline-synthetic");
  CHECK(ja["method"] == "anast");
  CHECK(ja["metrics"]["acc"].get<double>() == a.acc);
  CHECK(ja["metrics"]["bwt_defined"].get<bool>() == a.bwt_defined);
  CHECK(anast::report_flat_table(a) == anast::report_flat_table(b));
}

TEST_CASE("the flat table lists one line per evaluated cell") {
  const TaskManifest m = make_manifest({2, 2, 2}, 20, 5, 7.0, 1100);
  const RunReport rep = anast::run_anast(m);
  const std::string table = anast::report_flat_table(rep);

  std::istringstream in(table);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "task_learned\ttask_evaluated\taccuracy");
  std::size_t cells = 0;
  while (std::getline(in, line)) {
    if (!line.empty()) ++cells;
  }
  CHECK(cells == 6);  // 1 + 2 + 3 evaluated pairs

  // Spot-check: the first data line is cell (0, 0) at full precision.
  std::istringstream again(table);
  std::getline(again, line);
  std::getline(again, line);
  CHECK(line == "0\t0\t" + anast::format_double(rep.matrix.at(0, 0)));
}

TEST_CASE("report doubles survive a serialize-parse round trip") {
  const TaskManifest m = make_manifest({2, 2}, 20, 5, 6.0, 1200);
  const RunReport rep = anast::run_anast(m);
  const nlohmann::json parsed =
      nlohmann::json::parse(anast::report_json_text(rep));
  CHECK(parsed["metrics"]["acc"].get<double>() == rep.acc);
  CHECK(parsed["metrics"]["bwt"].get<double>() == rep.bwt);
  CHECK(parsed["config"]["gamma"].get<double>() == rep.config.gamma);
}
