#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "anast/expansion.hpp"
#include "anast/matrix.hpp"

namespace anast {

// Ordered class labels; column index = first-seen order, dense from 0.
class ClassRegistry {
 public:
  // Index of `label`, registering it if unseen.
  std::size_t add(const std::string& label);
  std::optional<std::size_t> index_of(const std::string& label) const;

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t index) const { return labels_[index]; }

  bool operator==(const ClassRegistry& other) const {
    return labels_ == other.labels_;
  }

 private:
  std::vector<std::string> labels_;
  std::unordered_map<std::string, std::size_t> index_;
};

// One task's training data: pre-expansion features with one label per row.
struct LabeledFeatures {
  Matrix features;
  std::vector<std::string> labels;

  std::size_t rows() const { return features.rows(); }
  void validate() const;  // label count == rows, entries finite
};

// The analytic learner. W maps expanded features to per-class scores; R is
// the stored inverse (gamma*I + sum of expanded grams)^-1 that makes the
// closed-form recursion possible. Value semantics: adapt() returns a new
// state, leaving its input untouched.
struct AnalyticState {
  Matrix w;                 // d_exp x C
  Matrix r;                 // d_exp x d_exp, symmetric positive definite
  ClassRegistry registry;   // column order of w
  double gamma = 0.0;
  std::size_t d_exp = 0;
  std::size_t samples_seen = 0;
  std::size_t tasks_seen = 0;
  Projector projector;
};

// Per-call instrumentation for adapt().
struct AdaptStats {
  std::size_t rows_read = 0;  // feature rows consumed (one-pass contract)
  bool empty_batch = false;   // the call carried no samples
};

// n x C one-hot over `registry`; rejects labels the registry does not know.
Matrix one_hot(const std::vector<std::string>& labels,
               const ClassRegistry& registry);

// Learner with no data seen: R = I/gamma, no classes. adapt() on the result
// reproduces fit_task0 exactly.
AnalyticState init_empty(double gamma, std::size_t d_exp,
                         const Projector& projector);

// Closed-form ridge fit on the first task:
//   R = (F'ᵀF' + gamma I)^-1,  W = R F'ᵀ Y.
AnalyticState fit_task0(const LabeledFeatures& data, double gamma,
                        const Projector& projector);

// Woodbury update of the stored inverse:
//   R_t = R - R F'ᵀ (I + F' R F'ᵀ)^-1 F' R,
// equal to (R^-1 + F'ᵀF')^-1. Large batches are chunked internally, which is
// exact up to rounding. Result is symmetrized.
Matrix faum_update(const Matrix& r, const Matrix& f_exp);

// One-pass incremental update: registers new labels, pads W with zero
// columns, refreshes R via faum_update, then
//   W_t = W + R_t F'ᵀ (Y - F' W).
// Empty batches return the state unchanged except tasks_seen, with
// stats->empty_batch set.
AnalyticState adapt(const AnalyticState& state, const LabeledFeatures& data,
                    AdaptStats* stats = nullptr);

// Closed-form fit over all tasks at once (the correctness oracle and the
// joint upper bound).
struct JointSolution {
  Matrix w;
  Matrix r;
  ClassRegistry registry;
};
JointSolution joint_fit(const std::vector<LabeledFeatures>& tasks,
                        double gamma, const Projector& projector);

// Expanded features times W; n x C raw scores.
Matrix predict_scores(const AnalyticState& state, const Matrix& features);

// Per-row argmax label; exact ties go to the lowest column index.
std::vector<std::string> predict(const AnalyticState& state,
                                 const Matrix& features);

namespace detail {
// Test hook for the verification CLI: when transpose_final_factor is set,
// the update ends with F'ᵀ R instead of F' R. The shapes only compose when
// the batch size equals d_exp, so this deliberately corrupted variant trips
// a dimension error (or a wrong result the equivalence check catches).
Matrix faum_update_impl(const Matrix& r, const Matrix& f_exp,
                        bool transpose_final_factor);
}  // namespace detail

}  // namespace anast
