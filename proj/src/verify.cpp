#include "anast/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "anast/classifier.hpp"
#include "anast/expansion.hpp"
#include "anast/matrix.hpp"
#include "anast/rng.hpp"

namespace anast {
namespace {

// Same steps as adapt(), but the inverse refresh goes through the update
// variant whose trailing product is transposed. Exercises the failure path
// the checker must catch: a dimension error on non-square batches, or a
// wrong W/R the distance comparison flags.
AnalyticState adapt_corrupted(const AnalyticState& state,
                              const LabeledFeatures& data) {
  AnalyticState next = state;
  next.tasks_seen = state.tasks_seen + 1;
  if (data.rows() == 0) return next;

  for (const auto& label : data.labels) next.registry.add(label);
  if (next.registry.size() > state.registry.size()) {
    Matrix padded(state.d_exp, next.registry.size());
    for (std::size_t i = 0; i < state.w.rows(); ++i) {
      std::copy(state.w.row(i), state.w.row(i) + state.w.cols(),
                padded.row(i));
    }
    next.w = std::move(padded);
  }

  const Matrix f_exp = expand(state.projector, data.features);
  const Matrix y = one_hot(data.labels, next.registry);
  next.r = detail::faum_update_impl(state.r, f_exp, true);
  const Matrix residual = y - matmul(f_exp, next.w);
  next.w = next.w + matmul(next.r, matmul(f_exp.transposed(), residual));
  next.samples_seen = state.samples_seen + data.rows();
  return next;
}

struct Scenario {
  std::vector<LabeledFeatures> tasks;
  ExpansionSpec expansion;
  double gamma = 0.0;
  std::size_t classes = 0;
  std::size_t rows = 0;
};

// Class-incremental layout: the class pool is split into one contiguous
// group per task; each task draws mostly from its own group, with a fifth of
// the rows revisiting earlier classes so repeated labels get exercised too.
Scenario draw_scenario(std::uint64_t seed, std::size_t max_dim) {
  SplitMix64 rng(seed);
  Scenario sc;

  const std::size_t d_exp = 1 + rng.next() % max_dim;            // 1..max_dim
  const std::size_t task_count = 2 + rng.next() % 5;             // 2..6
  sc.classes = std::max(task_count, 2 + rng.next() % 11);        // 2..12
  sc.gamma = std::pow(10.0, -3.0 * (1.0 - rng.next_unit()));     // 1e-3..1

  sc.expansion.output_dim = d_exp;
  if (rng.next() % 5 == 0) {
    sc.expansion.kind = ProjectorKind::identity;
    sc.expansion.input_dim = d_exp;
  } else {
    sc.expansion.kind = ProjectorKind::random_gaussian;
    sc.expansion.input_dim = 2 + rng.next() % 15;                // 2..16
  }
  sc.expansion.activation =
      rng.next() % 2 == 0 ? Activation::identity : Activation::relu;
  sc.expansion.seed = rng.next();
  const std::size_t d_in = sc.expansion.input_dim;

  // Partition classes into contiguous per-task groups, each nonempty.
  std::vector<std::size_t> group_end(task_count);
  for (std::size_t t = 0; t < task_count; ++t) {
    const std::size_t remaining_tasks = task_count - t;
    const std::size_t lo = t == 0 ? 0 : group_end[t - 1];
    const std::size_t spare = sc.classes - lo - remaining_tasks;
    group_end[t] = lo + 1 + (spare == 0 ? 0 : rng.next() % (spare + 1));
  }
  group_end.back() = sc.classes;

  GaussianStream noise(derive_seed(seed, fnv1a64("features")));
  for (std::size_t t = 0; t < task_count; ++t) {
    const std::size_t lo = t == 0 ? 0 : group_end[t - 1];
    const std::size_t hi = group_end[t];
    const std::size_t n = 3 + rng.next() % 38;                   // 3..40
    LabeledFeatures task;
    task.features = Matrix(n, d_in);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t cls;
      if (t > 0 && rng.next() % 5 == 0) {
        cls = rng.next() % lo;  // revisit an earlier class
      } else {
        cls = lo + rng.next() % (hi - lo);
      }
      task.labels.push_back("c" + std::to_string(cls));
      for (std::size_t j = 0; j < d_in; ++j) {
        task.features(i, j) =
            (cls % d_in == j ? 2.0 : 0.0) + noise.next();
      }
    }
    sc.rows += n;
    sc.tasks.push_back(std::move(task));
  }
  return sc;
}

}  // namespace

VerifyOutcome verify_equivalence(const VerifySpec& spec) {
  if (spec.trials == 0) {
    throw std::invalid_argument("verify: trials must be at least 1");
  }
  if (spec.max_dim == 0) {
    throw std::invalid_argument("verify: max-dim must be at least 1");
  }
  if (!(spec.tolerance > 0.0)) {
    throw std::invalid_argument("verify: tolerance must be positive");
  }

  VerifyOutcome out;
  out.trials.reserve(spec.trials);
  for (std::size_t trial = 0; trial < spec.trials; ++trial) {
    const std::uint64_t trial_seed = derive_seed(spec.seed, trial);
    const Scenario sc = draw_scenario(trial_seed, spec.max_dim);
    TrialRecord rec;
    rec.index = trial;
    rec.seed = trial_seed;
    rec.tasks = sc.tasks.size();
    rec.classes = sc.classes;
    rec.rows = sc.rows;
    rec.d_exp = sc.expansion.output_dim;
    rec.gamma = sc.gamma;
    try {
      const Projector projector = make_projector(sc.expansion);
      AnalyticState state = fit_task0(sc.tasks[0], sc.gamma, projector);
      for (std::size_t t = 1; t < sc.tasks.size(); ++t) {
        state = spec.corrupt_update ? adapt_corrupted(state, sc.tasks[t])
                                    : adapt(state, sc.tasks[t]);
      }
      const JointSolution joint = joint_fit(sc.tasks, sc.gamma, projector);
      rec.w_distance = rel_frobenius_distance(state.w, joint.w);
      rec.r_distance = rel_frobenius_distance(state.r, joint.r);
      rec.passed = rec.w_distance <= spec.tolerance &&
                   rec.r_distance <= spec.tolerance;
      out.worst_w = std::max(out.worst_w, rec.w_distance);
      out.worst_r = std::max(out.worst_r, rec.r_distance);
    } catch (const std::exception& e) {
      rec.error = e.what();
      rec.passed = false;
    }
    if (!rec.passed) ++out.failures;
    out.trials.push_back(std::move(rec));
  }
  return out;
}

}  // namespace anast
