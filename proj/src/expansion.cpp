#include "anast/expansion.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "anast/parallel.hpp"
#include "anast/rng.hpp"

namespace anast {

std::string to_string(ProjectorKind kind) {
  return kind == ProjectorKind::identity ? "identity" : "random_gaussian";
}

std::string to_string(Activation act) {
  return act == Activation::relu ? "relu" : "identity";
}

ProjectorKind projector_kind_from_string(const std::string& s) {
  if (s == "random_gaussian") return ProjectorKind::random_gaussian;
  if (s == "identity") return ProjectorKind::identity;
  throw std::invalid_argument("unknown projector kind \"" + s +
                              "\" (expected random_gaussian or identity)");
}

Activation activation_from_string(const std::string& s) {
  if (s == "identity") return Activation::identity;
  if (s == "relu") return Activation::relu;
  throw std::invalid_argument("unknown activation \"" + s +
                              "\" (expected identity or relu)");
}

ExpansionSpec ExpansionSpec::resolved(std::size_t input_dim_hint) const {
  ExpansionSpec r = *this;
  if (r.input_dim == 0) r.input_dim = input_dim_hint;
  if (r.kind == ProjectorKind::identity && r.output_dim == 0) {
    r.output_dim = r.input_dim;
  }
  if (r.scale == 0.0 && r.input_dim > 0) {
    r.scale = 1.0 / std::sqrt(static_cast<double>(r.input_dim));
  }
  return r;
}

void ExpansionSpec::validate() const {
  if (input_dim == 0) {
    throw std::invalid_argument("expansion: input_dim must be >= 1");
  }
  if (output_dim == 0) {
    throw std::invalid_argument("expansion: output_dim must be >= 1");
  }
  if (kind == ProjectorKind::identity && input_dim != output_dim) {
    std::ostringstream msg;
    msg << "expansion: identity kind requires input_dim == output_dim, got "
        << input_dim << " vs " << output_dim;
    throw std::invalid_argument(msg.str());
  }
  if (!(scale > 0.0) || !std::isfinite(scale)) {
    throw std::invalid_argument("expansion: scale must be positive");
  }
}

Projector make_projector(const ExpansionSpec& spec) {
  // Fill the scale/output_dim defaults so direct callers get the same
  // behavior as specs that went through a manifest.
  const ExpansionSpec full = spec.resolved(spec.input_dim);
  full.validate();
  Projector p;
  p.spec = full;
  if (full.kind == ProjectorKind::identity) {
    p.matrix = Matrix::identity(full.input_dim);
    return p;
  }
  p.matrix = Matrix(full.input_dim, full.output_dim);
  GaussianStream gauss(full.seed);
  for (double& v : p.matrix.data()) v = full.scale * gauss.next();
  return p;
}

namespace {

void check_input_dim(const Projector& p, const Matrix& f) {
  if (f.cols() != p.spec.input_dim) {
    std::ostringstream msg;
    msg << "expand: features are " << shape_str(f) << " but projector expects "
        << p.spec.input_dim << " input columns";
    throw std::invalid_argument(msg.str());
  }
}

void apply_activation(Activation act, Matrix& m) {
  if (act == Activation::relu) {
    for (double& v : m.data())
      if (v < 0.0) v = 0.0;
  }
}

}  // namespace

Matrix expand(const Projector& p, const Matrix& f) {
  check_input_dim(p, f);
  Matrix out = matmul(f, p.matrix);
  apply_activation(p.spec.activation, out);
  return out;
}

Matrix expand_counted(const Projector& p, const Matrix& f,
                      std::size_t* rows_read) {
  check_input_dim(p, f);
  const std::size_t n = f.rows();
  const std::size_t d_in = f.cols();
  const std::size_t d_out = p.spec.output_dim;
  Matrix out(n, d_out);
  std::size_t counted = 0;
  // One pass: each input row is visited exactly once, and within the visit
  // each entry is consumed exactly once.
  for (std::size_t i = 0; i < n; ++i) {
    const double* frow = f.row(i);
    double* orow = out.row(i);
    for (std::size_t l = 0; l < d_in; ++l) {
      const double fv = frow[l];
      const double* prow = p.matrix.row(l);
      for (std::size_t j = 0; j < d_out; ++j) orow[j] += fv * prow[j];
    }
    ++counted;
  }
  apply_activation(p.spec.activation, out);
  if (rows_read != nullptr) *rows_read += counted;
  return out;
}

}  // namespace anast
