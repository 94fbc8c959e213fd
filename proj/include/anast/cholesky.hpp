#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

#include "anast/matrix.hpp"

namespace anast {

// Factorization breakdown: the matrix is not positive definite. `pivot` is
// the 0-based index of the first failing diagonal.
struct NotSpdError : std::runtime_error {
  NotSpdError(std::size_t pivot_index, const std::string& msg)
      : std::runtime_error(msg), pivot(pivot_index) {}
  std::size_t pivot;
};

// Lower-triangular Cholesky factorization A = LLᵀ of a symmetric positive
// definite matrix. Breakdown is deterministic: the first non-positive (or
// non-finite) pivot is reported by index.
class Cholesky {
 public:
  // Rejects non-square input and asymmetry beyond kSymmetryTol relative to
  // the largest entry; throws NotSpdError on factorization breakdown.
  explicit Cholesky(const Matrix& a);

  // X with A·X = b.
  Matrix solve(const Matrix& b) const;

  // A⁻¹, symmetrized ((X+Xᵀ)/2) before return.
  Matrix inverse() const;

  std::size_t dim() const { return l_.rows(); }
  const Matrix& lower() const { return l_; }

  static constexpr double kSymmetryTol = 1e-9;

 private:
  Matrix l_;
};

// One-shot helpers over Cholesky.
Matrix spd_solve(const Matrix& a, const Matrix& b);
Matrix spd_inverse(const Matrix& a);

}  // namespace anast
