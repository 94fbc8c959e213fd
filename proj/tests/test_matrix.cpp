#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "anast/cholesky.hpp"
#include "anast/matrix.hpp"
#include "oracles.hpp"

using anast::Matrix;

namespace {
Matrix mk(std::size_t r, std::size_t c, std::vector<double> v) {
  return Matrix(r, c, std::move(v));
}
}  // namespace

TEST_CASE("matmul identity passthrough") {
  const Matrix m = mk(2, 3, {1, 2, 3, 4, 5, 6});
  CHECK(anast::matmul(Matrix::identity(2), m) == m);
}

TEST_CASE("matmul hand-computed 2x2 by 2x1") {
  const Matrix a = mk(2, 2, {1, 2, 3, 4});
  const Matrix b = mk(2, 1, {1, 1});
  const Matrix c = anast::matmul(a, b);
  CHECK(c(0, 0) == 3.0);
  CHECK(c(1, 0) == 7.0);
}

TEST_CASE("matmul matches triple-loop reference") {
  const Matrix a = oracle::random_matrix(7, 4, 101);
  const Matrix b = oracle::random_matrix(4, 3, 102);
  CHECK(oracle::max_abs_diff(anast::matmul(a, b), oracle::matmul(a, b)) <=
        1e-12);
}

TEST_CASE("matmul rejects mismatched shapes, reporting both") {
  const Matrix a = oracle::random_matrix(3, 4, 1);
  const Matrix b = oracle::random_matrix(5, 2, 2);
  CHECK_THROWS_WITH_AS(anast::matmul(a, b),
                       doctest::Contains("3x4"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(anast::matmul(a, b),
                       doctest::Contains("5x2"), std::invalid_argument);
}

TEST_CASE("matmul associativity on random triples") {
  const Matrix a = oracle::random_matrix(6, 5, 11);
  const Matrix b = oracle::random_matrix(5, 7, 12);
  const Matrix c = oracle::random_matrix(7, 4, 13);
  const Matrix left = anast::matmul(anast::matmul(a, b), c);
  const Matrix right = anast::matmul(a, anast::matmul(b, c));
  CHECK(oracle::rel_frob_diff(left, right) <= 1e-10);
}

TEST_CASE("gram of identity and of a single row") {
  CHECK(anast::gram(Matrix::identity(2)) == Matrix::identity(2));
  const Matrix g = anast::gram(mk(1, 2, {1, 1}));
  CHECK(g == mk(2, 2, {1, 1, 1, 1}));
}

TEST_CASE("gram matches transpose-then-multiply reference") {
  const Matrix f = oracle::random_matrix(50, 8, 103);
  const Matrix g = anast::gram(f);
  CHECK(oracle::max_abs_diff(g, oracle::gram(f)) <= 1e-12);
  for (std::size_t i = 0; i < g.rows(); ++i) {
    for (std::size_t j = 0; j < g.cols(); ++j) {
      CHECK(g(i, j) == g(j, i));  // exact symmetry by construction
    }
  }
}

TEST_CASE("gram of a zero-row matrix is the zero matrix") {
  const Matrix g = anast::gram(Matrix(0, 5));
  CHECK(g.rows() == 5);
  CHECK(g.cols() == 5);
  CHECK(oracle::frob(g) == 0.0);
}

TEST_CASE("gram rejects zero columns") {
  CHECK_THROWS_AS(anast::gram(Matrix(3, 0)), std::invalid_argument);
}

TEST_CASE("spd_solve scalar scaling case") {
  const Matrix x =
      anast::spd_solve(Matrix::scaled_identity(2, 2.0), Matrix::identity(2));
  CHECK(oracle::max_abs_diff(x, Matrix::scaled_identity(2, 0.5)) <= 1e-15);
}

TEST_CASE("spd_solve 2x2 hand inversion") {
  const Matrix a = mk(2, 2, {4, 1, 1, 3});
  const Matrix b = mk(2, 1, {1, 2});
  const Matrix x = anast::spd_solve(a, b);
  CHECK(x(0, 0) == doctest::Approx(1.0 / 11).epsilon(1e-12));
  CHECK(x(1, 0) == doctest::Approx(7.0 / 11).epsilon(1e-12));
}

TEST_CASE("spd_solve residual on a random SPD system") {
  const Matrix a = oracle::random_spd(12, 104);
  const Matrix b = oracle::random_matrix(12, 3, 105);
  const Matrix x = anast::spd_solve(a, b);
  const double residual = oracle::rel_frob_diff(oracle::matmul(a, x), b);
  CHECK(residual <= 1e-10);
}

TEST_CASE("spd_solve rejects indefinite matrices naming the pivot") {
  const Matrix a = mk(2, 2, {1, 0, 0, -1});
  CHECK_THROWS_WITH_AS(anast::spd_solve(a, Matrix::identity(2)),
                       doctest::Contains("pivot 1"), anast::NotSpdError);
}

TEST_CASE("spd_solve rejects clearly asymmetric input") {
  const Matrix a = mk(2, 2, {1, 0.5, 0, 1});
  CHECK_THROWS_AS(anast::spd_solve(a, Matrix::identity(2)),
                  std::invalid_argument);
}

TEST_CASE("spd_inverse scalar and 2x2 formula cases") {
  const Matrix half = anast::spd_inverse(Matrix::scaled_identity(3, 2.0));
  CHECK(oracle::max_abs_diff(half, Matrix::scaled_identity(3, 0.5)) <= 1e-15);

  const Matrix inv = anast::spd_inverse(mk(2, 2, {2, 1, 1, 2}));
  const Matrix expected =
      mk(2, 2, {2.0 / 3, -1.0 / 3, -1.0 / 3, 2.0 / 3});
  CHECK(oracle::max_abs_diff(inv, expected) <= 1e-12);
}

TEST_CASE("spd_inverse times original is the identity") {
  const std::size_t n = 16;
  const Matrix a = oracle::random_spd(n, 106);
  const Matrix prod = oracle::matmul(anast::spd_inverse(a), a);
  anast::Matrix diff = prod;
  for (std::size_t i = 0; i < n; ++i) diff(i, i) -= 1.0;
  CHECK(oracle::frob(diff) <= 1e-9 * static_cast<double>(n));
}

TEST_CASE("spd_inverse output is exactly symmetric") {
  const Matrix inv = anast::spd_inverse(oracle::random_spd(9, 107));
  for (std::size_t i = 0; i < inv.rows(); ++i)
    for (std::size_t j = 0; j < inv.cols(); ++j)
      CHECK(inv(i, j) == inv(j, i));
}

TEST_CASE("frobenius_norm basics and reference") {
  CHECK(anast::frobenius_norm(Matrix(3, 3)) == 0.0);
  CHECK(anast::frobenius_norm(mk(1, 2, {3, 4})) == doctest::Approx(5.0));
  const Matrix m = oracle::random_matrix(6, 6, 108);
  CHECK(anast::frobenius_norm(m) ==
        doctest::Approx(oracle::frob(m)).epsilon(1e-12));
}

TEST_CASE("require_finite names the offending entry") {
  Matrix m(2, 2);
  m(1, 0) = std::nan("");
  CHECK_THROWS_WITH_AS(m.require_finite("weights"),
                       doctest::Contains("weights"), std::invalid_argument);
}

TEST_CASE("add_diagonal and symmetrize helpers") {
  Matrix a = mk(2, 2, {1, 2, 3, 4});
  anast::add_diagonal(a, 0.5);
  CHECK(a == mk(2, 2, {1.5, 2, 3, 4.5}));
  anast::symmetrize(a);
  CHECK(a(0, 1) == a(1, 0));
  CHECK(a(0, 1) == 2.5);
}
