#include "anast/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>
#include <stdexcept>

#include "anast/parallel.hpp"

namespace anast {

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> data)
    : rows_(rows), cols_(cols), data_(std::move(data)) {
  if (data_.size() != rows_ * cols_) {
    std::ostringstream msg;
    msg << "matrix data length " << data_.size() << " does not match shape "
        << rows_ << "x" << cols_;
    throw std::invalid_argument(msg.str());
  }
}

Matrix Matrix::identity(std::size_t n) { return scaled_identity(n, 1.0); }

Matrix Matrix::scaled_identity(std::size_t n, double value) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = value;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* src = row(i);
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = src[j];
  }
  return t;
}

void Matrix::require_finite(const std::string& what) const {
  for (std::size_t i = 0; i < rows_; ++i) {
    const double* r = row(i);
    for (std::size_t j = 0; j < cols_; ++j) {
      if (!std::isfinite(r[j])) {
        std::ostringstream msg;
        msg << what << ": non-finite value at (" << i << "," << j << ")";
        throw std::invalid_argument(msg.str());
      }
    }
  }
}

std::string shape_str(const Matrix& m) {
  std::ostringstream s;
  s << m.rows() << "x" << m.cols();
  return s.str();
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    std::ostringstream msg;
    msg << "matmul: inner dimensions differ, " << shape_str(a) << " vs "
        << shape_str(b);
    throw std::invalid_argument(msg.str());
  }
  const std::size_t m = a.rows(), k = a.cols(), n = b.cols();
  Matrix c(m, n);
  // Row-partitioned ikj kernel: each output row is accumulated serially in
  // the same order regardless of thread count, so results are bitwise
  // reproducible.
  parallel_for(m, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      const double* arow = a.row(i);
      double* crow = c.row(i);
      for (std::size_t l = 0; l < k; ++l) {
        const double av = arow[l];
        const double* brow = b.row(l);
        for (std::size_t j = 0; j < n; ++j) crow[j] += av * brow[j];
      }
    }
  });
  return c;
}

Matrix gram(const Matrix& f) {
  if (f.cols() == 0) {
    throw std::invalid_argument("gram: matrix has no columns");
  }
  const std::size_t n = f.rows(), d = f.cols();
  Matrix g(d, d);
  parallel_for(d, [&](std::size_t i0, std::size_t i1) {
    for (std::size_t i = i0; i < i1; ++i) {
      double* grow = g.row(i);
      for (std::size_t r = 0; r < n; ++r) {
        const double* frow = f.row(r);
        const double fi = frow[i];
        for (std::size_t j = i; j < d; ++j) grow[j] += fi * frow[j];
      }
    }
  });
  // Mirror the upper triangle so symmetry is exact, not just approximate.
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = i + 1; j < d; ++j) g(j, i) = g(i, j);
  return g;
}

double frobenius_norm(const Matrix& a) {
  double sum = 0.0;
  for (double v : a.data()) sum += v * v;
  return std::sqrt(sum);
}

namespace {

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << op << ": shapes differ, " << shape_str(a) << " vs " << shape_str(b);
    throw std::invalid_argument(msg.str());
  }
}

}  // namespace

Matrix operator+(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "matrix add");
  Matrix c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] += b.data()[i];
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "matrix subtract");
  Matrix c = a;
  for (std::size_t i = 0; i < c.size(); ++i) c.data()[i] -= b.data()[i];
  return c;
}

void add_diagonal(Matrix& a, double value) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("add_diagonal: matrix not square, " +
                                shape_str(a));
  }
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, i) += value;
}

void symmetrize(Matrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("symmetrize: matrix not square, " +
                                shape_str(a));
  }
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = i + 1; j < a.cols(); ++j) {
      const double v = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = v;
      a(j, i) = v;
    }
  }
}

double relative_asymmetry(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("relative_asymmetry: matrix not square, " +
                                shape_str(a));
  }
  double max_abs = 0.0;
  for (double v : a.data()) max_abs = std::max(max_abs, std::fabs(v));
  if (max_abs == 0.0) return 0.0;
  double max_gap = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j)
      max_gap = std::max(max_gap, std::fabs(a(i, j) - a(j, i)));
  return max_gap / max_abs;
}

double rel_frobenius_distance(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "rel_frobenius_distance");
  double diff = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.data()[i] - b.data()[i];
    diff += d * d;
  }
  const double ref = frobenius_norm(b);
  if (ref == 0.0) return std::sqrt(diff);
  return std::sqrt(diff) / ref;
}

}  // namespace anast
