#include "anast/cholesky.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "anast/parallel.hpp"

namespace anast {

Cholesky::Cholesky(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw std::invalid_argument("cholesky: matrix not square, " +
                                shape_str(a));
  }
  const double asym = relative_asymmetry(a);
  if (asym > kSymmetryTol) {
    std::ostringstream msg;
    msg << "cholesky: matrix asymmetric beyond tolerance (relative asymmetry "
        << asym << " > " << kSymmetryTol << ")";
    throw std::invalid_argument(msg.str());
  }

  const std::size_t n = a.rows();
  l_ = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    const double* lk = l_.row(k);
    double diag = a(k, k);
    for (std::size_t j = 0; j < k; ++j) diag -= lk[j] * lk[j];
    if (!(diag > 0.0) || !std::isfinite(diag)) {
      std::ostringstream msg;
      msg << "cholesky: matrix not positive definite, pivot " << k
          << " has value " << diag;
      throw NotSpdError(k, msg.str());
    }
    const double lkk = std::sqrt(diag);
    l_(k, k) = lkk;
    for (std::size_t i = k + 1; i < n; ++i) {
      const double* li = l_.row(i);
      double sum = a(i, k);
      for (std::size_t j = 0; j < k; ++j) sum -= li[j] * lk[j];
      l_(i, k) = sum / lkk;
    }
  }
}

Matrix Cholesky::solve(const Matrix& b) const {
  const std::size_t n = dim();
  if (b.rows() != n) {
    std::ostringstream msg;
    msg << "cholesky solve: rhs has " << b.rows() << " rows, expected " << n;
    throw std::invalid_argument(msg.str());
  }
  Matrix x(n, b.cols());
  // Columns are independent; each is substituted serially.
  parallel_for(b.cols(), [&](std::size_t c0, std::size_t c1) {
    std::vector<double> y(n);
    for (std::size_t c = c0; c < c1; ++c) {
      for (std::size_t i = 0; i < n; ++i) {
        const double* li = l_.row(i);
        double sum = b(i, c);
        for (std::size_t j = 0; j < i; ++j) sum -= li[j] * y[j];
        y[i] = sum / li[i];
      }
      for (std::size_t ri = n; ri-- > 0;) {
        double sum = y[ri];
        for (std::size_t j = ri + 1; j < n; ++j) sum -= l_(j, ri) * y[j];
        y[ri] = sum / l_(ri, ri);
      }
      for (std::size_t i = 0; i < n; ++i) x(i, c) = y[i];
    }
  });
  return x;
}

Matrix Cholesky::inverse() const {
  Matrix inv = solve(Matrix::identity(dim()));
  symmetrize(inv);
  return inv;
}

Matrix spd_solve(const Matrix& a, const Matrix& b) {
  return Cholesky(a).solve(b);
}

Matrix spd_inverse(const Matrix& a) { return Cholesky(a).inverse(); }

}  // namespace anast
