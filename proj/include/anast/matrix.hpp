#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace anast {

// Dense row-major matrix of 64-bit floats. All analytic computations in this
// library run in double precision; the recursive-vs-joint agreement tests
// do not hold in float.
class Matrix {
 public:
  Matrix() = default;
  // Zero-initialized.
  Matrix(std::size_t rows, std::size_t cols);
  // Takes ownership of `data`, which must have rows*cols entries.
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> data);

  static Matrix identity(std::size_t n);
  static Matrix scaled_identity(std::size_t n, double value);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }
  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }

  std::vector<double>& data() { return data_; }
  const std::vector<double>& data() const { return data_; }

  Matrix transposed() const;

  // Throws std::invalid_argument naming `what` and the offending entry if any
  // value is NaN or infinite. Call on matrices built from external input.
  void require_finite(const std::string& what) const;

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// "<rows>x<cols>" for error messages.
std::string shape_str(const Matrix& m);

// Standard product; rejects dimension mismatch reporting both shapes.
Matrix matmul(const Matrix& a, const Matrix& b);

// FᵀF. Exactly symmetric by construction (upper triangle computed, mirrored).
// Zero-row input yields the d×d zero matrix.
Matrix gram(const Matrix& f);

// sqrt of the sum of squared entries; 0 for an empty matrix.
double frobenius_norm(const Matrix& a);

Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);

// a += value on the diagonal (square only).
void add_diagonal(Matrix& a, double value);

// a = (a + aᵀ)/2 in place (square only).
void symmetrize(Matrix& a);

// Largest |a_ij - a_ji| over max |entry|; 0 for the zero matrix.
double relative_asymmetry(const Matrix& a);

// ‖a - b‖_F / ‖b‖_F, with an absolute fallback when b is zero.
double rel_frobenius_distance(const Matrix& a, const Matrix& b);

}  // namespace anast
