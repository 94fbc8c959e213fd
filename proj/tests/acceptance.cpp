// Acceptance gate for the incremental analytic classifier. Each check prints
// exactly one [PASS]/[FAIL] line; the exit code is the number of failures.
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "anast/classifier.hpp"
#include "anast/cholesky.hpp"
#include "anast/data.hpp"
#include "anast/manifest.hpp"
#include "anast/matrix.hpp"
#include "anast/protocol.hpp"
#include "anast/report_io.hpp"
#include "anast/rng.hpp"
#include "anast/snapshot.hpp"
#include "anast/verify.hpp"
#include "oracles.hpp"

namespace {

using anast::AnalyticState;
using anast::LabeledFeatures;
using anast::Matrix;
using anast::Projector;

// Pinned tolerances and budgets, one place to read them all.
constexpr double kEquivalenceTol = 1e-8;     // recursive vs joint weights
constexpr double kEquivalenceBudget = 10.0;  // seconds for >= 100 trials
constexpr std::size_t kEquivalenceTrials = 100;
constexpr double kBatchingTol = 1e-8;        // split-vs-whole adapt
constexpr std::size_t kBatchingTrials = 50;
constexpr double kInverseTol = 1e-8;         // stored vs direct inverse
constexpr double kSymmetryTol = 1e-10;       // relative asymmetry of R
constexpr double kScalarTol = 1e-12;         // hand-traced scalar recursion
constexpr double kBracketAccGap = 0.005;     // |ACC incremental - joint|
constexpr double kBracketNaiveGap = 0.20;    // naive at least this far below
constexpr double kBracketBwtSlack = 1e-6;    // incremental BWT <= this
constexpr double kBracketBudget = 30.0;      // seconds for the bracket runs
constexpr double kLatencyBudget = 5.0;       // seconds for one wide update

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                       start)
      .count();
}

Projector gaussian_projector(std::size_t d_in, std::size_t d_out,
                             std::uint64_t seed) {
  anast::ExpansionSpec s;
  s.input_dim = d_in;
  s.output_dim = d_out;
  s.seed = seed;
  return anast::make_projector(s);
}

LabeledFeatures random_task(std::size_t rows, std::size_t d_in,
                            std::size_t classes, std::size_t first_class,
                            std::uint64_t seed) {
  LabeledFeatures t;
  t.features = oracle::random_matrix(rows, d_in, seed);
  for (std::size_t i = 0; i < rows; ++i) {
    t.labels.push_back("c" + std::to_string(first_class + i % classes));
  }
  return t;
}

// schedule[t] classes arrive at task t, one synthetic source shared by all.
anast::TaskManifest make_manifest(const std::vector<std::size_t>& schedule,
                                  std::size_t per_class, std::size_t dim,
                                  double separation, double stddev,
                                  std::uint64_t seed, double gamma,
                                  std::size_t expansion_dim) {
  std::size_t total_classes = 0;
  for (std::size_t n : schedule) total_classes += n;

  anast::SyntheticSpec spec;
  spec.classes = total_classes;
  spec.samples_per_class = per_class;
  spec.dim = dim;
  spec.separation = separation;
  spec.stddev = stddev;
  spec.seed = seed;

  anast::TaskManifest m;
  m.scenario = "acceptance";
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

int g_failures = 0;

void report(int number, const std::string& name, bool passed,
            const std::string& detail) {
  std::cout << (passed ? "[PASS] " : "[FAIL] ") << number << ". " << name
            << ": " << detail << "\n";
  if (!passed) ++g_failures;
}

void run_criterion(int number, const std::string& name,
                   const std::function<std::pair<bool, std::string>()>& body) {
  try {
    const auto [passed, detail] = body();
    report(number, name, passed, detail);
  } catch (const std::exception& e) {
    report(number, name, false, std::string("exception: ") + e.what());
  }
}

// 1. Randomized scenarios: recursive updates must match the one-shot fit.
std::pair<bool, std::string> check_equivalence() {
  anast::VerifySpec spec;
  spec.trials = kEquivalenceTrials;
  spec.seed = 20260815;
  spec.max_dim = 64;
  spec.tolerance = kEquivalenceTol;

  const auto start = std::chrono::steady_clock::now();
  const anast::VerifyOutcome outcome = anast::verify_equivalence(spec);
  const double elapsed = seconds_since(start);

  std::ostringstream detail;
  detail << outcome.trials.size() << " trials, max weight error "
         << anast::format_double(outcome.worst_w) << ", max inverse error "
         << anast::format_double(outcome.worst_r) << ", tolerance "
         << anast::format_double(kEquivalenceTol) << ", " << elapsed
         << " s (budget " << kEquivalenceBudget << " s)";
  const bool ok = outcome.passed() &&
                  outcome.trials.size() >= kEquivalenceTrials &&
                  elapsed < kEquivalenceBudget;
  return {ok, detail.str()};
}

// 2. Splitting a batch across two update calls must not change the result.
std::pair<bool, std::string> check_batching() {
  anast::SplitMix64 rng(777);
  double worst = 0.0;
  for (std::size_t trial = 0; trial < kBatchingTrials; ++trial) {
    const std::size_t d_in = 2 + rng.next() % 8;
    const std::size_t d_exp = 1 + rng.next() % 48;
    const double gamma = 0.001 + 0.999 * (rng.next() % 1000) / 999.0;
    const Projector p = gaussian_projector(d_in, d_exp, rng.next());

    const AnalyticState base = anast::fit_task0(
        random_task(5 + rng.next() % 30, d_in, 2, 0, rng.next()), gamma, p);
    const LabeledFeatures task =
        random_task(2 + rng.next() % 38, d_in, 3, 2, rng.next());

    const AnalyticState whole = anast::adapt(base, task);

    const std::size_t cut = 1 + rng.next() % (task.rows() - 1);
    LabeledFeatures first, second;
    first.features = Matrix(cut, d_in);
    second.features = Matrix(task.rows() - cut, d_in);
    for (std::size_t i = 0; i < task.rows(); ++i) {
      auto& dst = i < cut ? first : second;
      const std::size_t r = i < cut ? i : i - cut;
      for (std::size_t j = 0; j < d_in; ++j) {
        dst.features(r, j) = task.features(i, j);
      }
      dst.labels.push_back(task.labels[i]);
    }
    const AnalyticState split =
        anast::adapt(anast::adapt(base, first), second);

    worst = std::max(worst,
                     anast::rel_frobenius_distance(split.w, whole.w));
    worst = std::max(worst,
                     anast::rel_frobenius_distance(split.r, whole.r));
  }
  std::ostringstream detail;
  detail << kBatchingTrials << " trials, max relative difference "
         << anast::format_double(worst) << ", tolerance "
         << anast::format_double(kBatchingTol);
  return {worst <= kBatchingTol, detail.str()};
}

// 3. The stored inverse must equal the direct inverse after every task and
//    stay symmetric and positive definite along the way.
std::pair<bool, std::string> check_stored_inverse() {
  anast::SplitMix64 rng(888);
  double worst_inverse = 0.0;
  double worst_asym = 0.0;
  std::size_t states_checked = 0;
  for (std::size_t trial = 0; trial < 10; ++trial) {
    const std::size_t d_in = 2 + rng.next() % 8;
    const std::size_t d_exp = 1 + rng.next() % 48;
    const double gamma = 0.001 + 0.999 * (rng.next() % 1000) / 999.0;
    const Projector p = gaussian_projector(d_in, d_exp, rng.next());

    Matrix accumulated = Matrix::scaled_identity(d_exp, gamma);
    AnalyticState state;
    const std::size_t task_count = 2 + rng.next() % 4;
    for (std::size_t t = 0; t < task_count; ++t) {
      const LabeledFeatures task = random_task(
          3 + rng.next() % 30, d_in, 2, 2 * t, rng.next());
      state = t == 0 ? anast::fit_task0(task, gamma, p)
                     : anast::adapt(state, task);
      accumulated =
          accumulated + oracle::gram(anast::expand(p, task.features));

      worst_inverse =
          std::max(worst_inverse, oracle::rel_frob_diff(
                                      state.r, oracle::inverse(accumulated)));
      worst_asym = std::max(worst_asym, anast::relative_asymmetry(state.r));
      anast::spd_solve(state.r, Matrix(d_exp, 1, std::vector<double>(
                                                     d_exp, 1.0)));  // SPD?
      ++states_checked;
    }
  }
  std::ostringstream detail;
  detail << states_checked << " states, max inverse error "
         << anast::format_double(worst_inverse) << " (tolerance "
         << anast::format_double(kInverseTol) << "), max asymmetry "
         << anast::format_double(worst_asym) << " (tolerance "
         << anast::format_double(kSymmetryTol)
         << "), positive definiteness held";
  const bool ok = worst_inverse <= kInverseTol && worst_asym <= kSymmetryTol;
  return {ok, detail.str()};
}

// 4. The d=1, gamma=1 walk-through: R goes 0.5 then 1/3, W ends [1/3, 1/3].
std::pair<bool, std::string> check_scalar_trace() {
  anast::ExpansionSpec es;
  es.input_dim = 1;
  es.output_dim = 1;
  es.kind = anast::ProjectorKind::identity;
  const Projector p = anast::make_projector(es);

  const AnalyticState s0 =
      anast::fit_task0({Matrix(1, 1, {1.0}), {"c0"}}, 1.0, p);
  const AnalyticState s1 = anast::adapt(s0, {Matrix(1, 1, {1.0}), {"c1"}});

  const double third = 1.0 / 3.0;
  double worst = std::abs(s0.r(0, 0) - 0.5);
  worst = std::max(worst, std::abs(s0.w(0, 0) - 0.5));
  worst = std::max(worst, std::abs(s1.r(0, 0) - third));
  worst = std::max(worst, std::abs(s1.w(0, 0) - third));
  worst = std::max(worst, std::abs(s1.w(0, 1) - third));

  std::ostringstream detail;
  detail << "R: 0.5 then " << anast::format_double(s1.r(0, 0))
         << ", W: [" << anast::format_double(s1.w(0, 0)) << ", "
         << anast::format_double(s1.w(0, 1)) << "], max deviation "
         << anast::format_double(worst) << " (tolerance "
         << anast::format_double(kScalarTol) << ")";
  return {worst <= kScalarTol, detail.str()};
}

// 5. On the standard synthetic scenario the per-task-only refit forgets,
//    while the incremental method matches the all-at-once upper bound.
std::pair<bool, std::string> check_forgetting_bracket() {
  const auto start = std::chrono::steady_clock::now();
  const anast::TaskManifest m = make_manifest(
      {2, 2, 2, 2}, 200, 20, 10.0, 0.5, 31000, 0.01, 1000);

  const anast::RunReport inc = anast::run_anast(m);
  const anast::RunReport naive = anast::run_naive(m);
  const anast::RunReport joint = anast::run_joint(m);
  const double elapsed = seconds_since(start);

  std::ostringstream detail;
  detail << "ACC incremental " << anast::format_double(inc.acc) << ", joint "
         << anast::format_double(joint.acc) << ", per-task-only "
         << anast::format_double(naive.acc) << "; BWT incremental "
         << anast::format_double(inc.bwt) << ", per-task-only "
         << anast::format_double(naive.bwt) << "; " << elapsed
         << " s (budget " << kBracketBudget << " s)";
  const bool ok = std::abs(inc.acc - joint.acc) <= kBracketAccGap &&
                  naive.acc <= inc.acc - kBracketNaiveGap &&
                  naive.bwt < inc.bwt && inc.bwt <= kBracketBwtSlack &&
                  elapsed < kBracketBudget;
  return {ok, detail.str()};
}

// 6. Every training row is consumed exactly once per update call.
std::pair<bool, std::string> check_one_pass() {
  const Projector p = gaussian_projector(6, 32, 999);
  AnalyticState state =
      anast::fit_task0(random_task(17, 6, 2, 0, 1000), 0.05, p);
  bool ok = true;
  std::size_t total = 0;
  for (std::size_t t = 1; t <= 4; ++t) {
    const LabeledFeatures task =
        random_task(10 + 3 * t, 6, 2, 2 * t, 1000 + t);
    anast::AdaptStats stats;
    state = anast::adapt(state, task, &stats);
    ok = ok && stats.rows_read == task.rows();
    total += stats.rows_read;
  }
  std::ostringstream detail;
  detail << "4 updates, " << total
         << " rows read, each equal to its task's row count";
  return {ok, detail.str()};
}

// 7. Metric arithmetic on hand-sized matrices, including the sign convention.
std::pair<bool, std::string> check_metrics() {
  anast::AccuracyMatrix single;
  single.rows = {{0.9}};
  anast::AccuracyMatrix two;
  two.rows = {{0.7}, {0.9, 0.8}};
  anast::AccuracyMatrix uniform;
  uniform.rows = {{0.5}, {0.5, 0.5}, {0.5, 0.5, 0.5}};
  anast::AccuracyMatrix steady;
  steady.rows = {{0.6}, {0.6, 0.9}, {0.6, 0.9, 0.4}};
  anast::AccuracyMatrix forgetting;
  forgetting.rows = {{0.9}, {0.7, 0.8}};
  anast::AccuracyMatrix improving;
  improving.rows = {{0.5}, {0.8, 0.9}};

  const bool ok = anast::acc_metric(single) == 0.9 &&
                  anast::acc_metric(two) == (0.9 + 0.8) / 2.0 &&
                  anast::acc_metric(uniform) == 0.5 &&
                  anast::bwt_metric(single) == 0.0 &&
                  anast::bwt_metric(steady) == 0.0 &&
                  anast::bwt_metric(forgetting) == 0.7 - 0.9 &&
                  anast::bwt_metric(forgetting) < 0.0 &&
                  anast::bwt_metric(improving) > 0.0;
  return {ok,
          "single/mean/uniform accuracy and zero/forgetting/improving "
          "transfer all exact, forgetting reported negative"};
}

// 8. Identical configuration twice: identical reports (minus timing) and
//    identical snapshots, byte for byte.
std::pair<bool, std::string> check_determinism() {
  const anast::TaskManifest m =
      make_manifest({2, 2, 2}, 40, 10, 8.0, 0.5, 41000, 0.01, 64);

  AnalyticState state_a, state_b;
  const anast::RunReport a = anast::run_anast(m, &state_a);
  const anast::RunReport b = anast::run_anast(m, &state_b);

  nlohmann::json ja = anast::report_to_json(a);
  nlohmann::json jb = anast::report_to_json(b);
  ja.erase("timing");
  jb.erase("timing");

  const std::string snap_a = anast::save_state(state_a);
  const std::string snap_b = anast::save_state(state_b);

  const bool reports_equal = ja.dump() == jb.dump();
  const bool tables_equal =
      anast::report_flat_table(a) == anast::report_flat_table(b);
  const bool snapshots_equal = snap_a == snap_b;

  std::ostringstream detail;
  detail << "report json " << (reports_equal ? "identical" : "differs")
         << " (timing dropped), flat table "
         << (tables_equal ? "identical" : "differs") << ", snapshot "
         << (snapshots_equal ? "identical" : "differs") << " ("
         << snap_a.size() << " bytes)";
  return {reports_equal && tables_equal && snapshots_equal, detail.str()};
}

// 9. One wide update (1000 expanded dims, 1000 rows) finishes quickly.
std::pair<bool, std::string> check_latency() {
  const Projector p = gaussian_projector(20, 1000, 555);
  const AnalyticState base =
      anast::fit_task0(random_task(100, 20, 4, 0, 556), 0.01, p);
  const LabeledFeatures task = random_task(1000, 20, 4, 4, 557);

  const auto start = std::chrono::steady_clock::now();
  const AnalyticState next = anast::adapt(base, task);
  const double elapsed = seconds_since(start);

  std::ostringstream detail;
  detail << "one update, 1000 expanded dims x 1000 rows, " << elapsed
         << " s (budget " << kLatencyBudget << " s), "
         << next.registry.size() << " classes after";
  return {elapsed < kLatencyBudget, detail.str()};
}

}  // namespace

int main() {
  run_criterion(1, "incremental updates match one-shot training",
                check_equivalence);
  run_criterion(2, "batch splitting leaves the weights unchanged",
                check_batching);
  run_criterion(3, "stored inverse stays exact, symmetric, positive definite",
                check_stored_inverse);
  run_criterion(4, "scalar two-step walk-through", check_scalar_trace);
  run_criterion(5, "forgetting bracket on the standard synthetic scenario",
                check_forgetting_bracket);
  run_criterion(6, "one pass over each task's rows", check_one_pass);
  run_criterion(7, "metric arithmetic and sign convention", check_metrics);
  run_criterion(8, "byte-identical reruns", check_determinism);
  run_criterion(9, "wide-update latency", check_latency);

  std::cout << (g_failures == 0 ? "ACCEPTANCE PASSED"
                                : "ACCEPTANCE FAILED")
            << " (" << (9 - g_failures) << "/9)\n";
  return g_failures;
}
