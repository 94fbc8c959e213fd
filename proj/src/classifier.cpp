#include "anast/classifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "anast/cholesky.hpp"

namespace anast {

namespace {

// Batches larger than this are applied as consecutive Woodbury updates so the
// inner solve never exceeds kFaumChunk x kFaumChunk.
constexpr std::size_t kFaumChunk = 256;

void check_gamma(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    std::ostringstream msg;
    msg << "gamma must be positive and finite, got " << gamma;
    throw std::invalid_argument(msg.str());
  }
}

Matrix rows_slice(const Matrix& m, std::size_t begin, std::size_t end) {
  Matrix out(end - begin, m.cols());
  std::copy(m.row(begin), m.row(begin) + (end - begin) * m.cols(),
            out.data().begin());
  return out;
}

}  // namespace

std::size_t ClassRegistry::add(const std::string& label) {
  auto it = index_.find(label);
  if (it != index_.end()) return it->second;
  const std::size_t idx = labels_.size();
  labels_.push_back(label);
  index_.emplace(label, idx);
  return idx;
}

std::optional<std::size_t> ClassRegistry::index_of(
    const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

void LabeledFeatures::validate() const {
  if (labels.size() != features.rows()) {
    std::ostringstream msg;
    msg << "labeled features: " << labels.size() << " labels for "
        << features.rows() << " rows";
    throw std::invalid_argument(msg.str());
  }
  features.require_finite("labeled features");
}

Matrix one_hot(const std::vector<std::string>& labels,
               const ClassRegistry& registry) {
  Matrix y(labels.size(), registry.size());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto idx = registry.index_of(labels[i]);
    if (!idx) {
      throw std::invalid_argument("one_hot: label \"" + labels[i] +
                                  "\" not in registry");
    }
    y(i, *idx) = 1.0;
  }
  return y;
}

AnalyticState init_empty(double gamma, std::size_t d_exp,
                         const Projector& projector) {
  check_gamma(gamma);
  if (d_exp == 0 || d_exp != projector.spec.output_dim) {
    std::ostringstream msg;
    msg << "init_empty: d_exp " << d_exp << " does not match projector output "
        << projector.spec.output_dim;
    throw std::invalid_argument(msg.str());
  }
  AnalyticState s;
  s.gamma = gamma;
  s.d_exp = d_exp;
  s.r = Matrix::scaled_identity(d_exp, 1.0 / gamma);
  s.w = Matrix(d_exp, 0);
  s.projector = projector;
  return s;
}

AnalyticState fit_task0(const LabeledFeatures& data, double gamma,
                        const Projector& projector) {
  check_gamma(gamma);
  data.validate();
  if (data.rows() == 0) {
    throw std::invalid_argument("fit_task0: task 0 has no samples");
  }

  AnalyticState s;
  s.gamma = gamma;
  s.d_exp = projector.spec.output_dim;
  s.projector = projector;
  for (const auto& label : data.labels) s.registry.add(label);

  std::size_t rows_read = 0;
  const Matrix f_exp = expand_counted(projector, data.features, &rows_read);
  const Matrix y = one_hot(data.labels, s.registry);

  Matrix normal = gram(f_exp);
  add_diagonal(normal, gamma);
  s.r = spd_inverse(normal);
  s.w = matmul(s.r, matmul(f_exp.transposed(), y));
  s.samples_seen = data.rows();
  s.tasks_seen = 1;
  return s;
}

namespace detail {

Matrix faum_update_impl(const Matrix& r, const Matrix& f_exp,
                        bool transpose_final_factor) {
  if (r.rows() != r.cols()) {
    throw std::invalid_argument("faum_update: R not square, " + shape_str(r));
  }
  if (f_exp.cols() != r.rows()) {
    std::ostringstream msg;
    msg << "faum_update: features have " << f_exp.cols()
        << " columns but R is " << shape_str(r);
    throw std::invalid_argument(msg.str());
  }

  Matrix result = r;
  const std::size_t n = f_exp.rows();
  const std::size_t d = r.rows();
  const std::size_t chunk = std::max<std::size_t>(1, std::min(kFaumChunk, d));
  for (std::size_t begin = 0; begin < n; begin += chunk) {
    const std::size_t end = std::min(n, begin + chunk);
    const Matrix fc = rows_slice(f_exp, begin, end);
    const Matrix g = matmul(result, fc.transposed());  // d x nc
    Matrix s = matmul(fc, g);                          // nc x nc
    add_diagonal(s, 1.0);
    Matrix x;  // nc x d
    try {
      x = spd_solve(s, transpose_final_factor ? matmul(fc.transposed(), result)
                                              : matmul(fc, result));
    } catch (const NotSpdError& e) {
      std::ostringstream msg;
      msg << "faum_update: inner system lost positive definiteness (" +
                 std::string(e.what()) + "); state is numerically corrupt";
      throw std::runtime_error(msg.str());
    }
    result = result - matmul(g, x);
    symmetrize(result);
  }
  return result;
}

}  // namespace detail

Matrix faum_update(const Matrix& r, const Matrix& f_exp) {
  return detail::faum_update_impl(r, f_exp, false);
}

AnalyticState adapt(const AnalyticState& state, const LabeledFeatures& data,
                    AdaptStats* stats) {
  data.validate();
  if (data.features.rows() > 0 &&
      data.features.cols() != state.projector.spec.input_dim) {
    std::ostringstream msg;
    msg << "adapt: features have " << data.features.cols()
        << " columns but the model expects " << state.projector.spec.input_dim;
    throw std::invalid_argument(msg.str());
  }

  AnalyticState next = state;
  next.tasks_seen = state.tasks_seen + 1;
  if (data.rows() == 0) {
    if (stats != nullptr) stats->empty_batch = true;
    return next;
  }

  // New labels get zero-padded columns; old columns are corrected in place by
  // the same update, so one expression covers both the fresh-class block and
  // the adjustment of everything learned before.
  for (const auto& label : data.labels) next.registry.add(label);
  if (next.registry.size() > state.registry.size()) {
    Matrix padded(state.d_exp, next.registry.size());
    for (std::size_t i = 0; i < state.w.rows(); ++i) {
      std::copy(state.w.row(i), state.w.row(i) + state.w.cols(),
                padded.row(i));
    }
    next.w = std::move(padded);
  }

  std::size_t rows_read = 0;
  const Matrix f_exp =
      expand_counted(state.projector, data.features, &rows_read);
  const Matrix y = one_hot(data.labels, next.registry);

  next.r = faum_update(state.r, f_exp);
  const Matrix residual = y - matmul(f_exp, next.w);
  next.w = next.w + matmul(next.r, matmul(f_exp.transposed(), residual));
  next.samples_seen = state.samples_seen + data.rows();
  if (stats != nullptr) stats->rows_read += rows_read;
  return next;
}

JointSolution joint_fit(const std::vector<LabeledFeatures>& tasks,
                        double gamma, const Projector& projector) {
  check_gamma(gamma);
  std::size_t total = 0;
  for (const auto& t : tasks) {
    t.validate();
    total += t.rows();
  }
  if (total == 0) {
    throw std::invalid_argument("joint_fit: no samples across tasks");
  }

  JointSolution sol;
  for (const auto& t : tasks)
    for (const auto& label : t.labels) sol.registry.add(label);

  const std::size_t d = projector.spec.output_dim;
  Matrix normal(d, d);
  Matrix rhs(d, sol.registry.size());
  // Stacking all expanded features and multiplying once is equivalent to
  // accumulating per task in order.
  for (const auto& t : tasks) {
    if (t.rows() == 0) continue;
    const Matrix f_exp = expand(projector, t.features);
    normal = normal + gram(f_exp);
    rhs = rhs + matmul(f_exp.transposed(), one_hot(t.labels, sol.registry));
  }
  add_diagonal(normal, gamma);
  sol.r = spd_inverse(normal);
  sol.w = matmul(sol.r, rhs);
  return sol;
}

Matrix predict_scores(const AnalyticState& state, const Matrix& features) {
  if (features.cols() != state.projector.spec.input_dim) {
    std::ostringstream msg;
    msg << "predict: features have " << features.cols()
        << " columns but the model expects " << state.projector.spec.input_dim;
    throw std::invalid_argument(msg.str());
  }
  return matmul(expand(state.projector, features), state.w);
}

std::vector<std::string> predict(const AnalyticState& state,
                                 const Matrix& features) {
  if (state.registry.size() == 0) {
    throw std::invalid_argument("predict: model has no registered classes");
  }
  const Matrix scores = predict_scores(state, features);
  std::vector<std::string> out;
  out.reserve(scores.rows());
  for (std::size_t i = 0; i < scores.rows(); ++i) {
    const double* srow = scores.row(i);
    std::size_t best = 0;
    for (std::size_t c = 1; c < scores.cols(); ++c) {
      if (srow[c] > srow[best]) best = c;  // ties keep the lower index
    }
    out.push_back(state.registry.label(best));
  }
  return out;
}

}  // namespace anast
