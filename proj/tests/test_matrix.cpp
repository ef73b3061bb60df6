#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "csvd/generate.hpp"
#include "csvd/matrix.hpp"

#include "oracles.hpp"

using namespace csvd;

namespace {

ComplexDense mat2(Complex a, Complex b, Complex c, Complex d) {
  ComplexDense m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("matmul: identity leaves the operand unchanged") {
  const ComplexDense x = random_general(3, 5, 11);
  const ComplexDense i3 = ComplexDense::Identity(3, 3);
  CHECK(oracle::max_abs_diff(matmul(i3, x), x) == 0.0);
}

TEST_CASE("matmul: diagonal times diagonal") {
  const ComplexDense a = mat2(2.0, 0.0, 0.0, 3.0);
  const ComplexDense b = mat2(5.0, 0.0, 0.0, 7.0);
  const ComplexDense prod = matmul(a, b);
  CHECK(prod(0, 0) == Complex(10.0, 0.0));
  CHECK(prod(1, 1) == Complex(21.0, 0.0));
  CHECK(prod(0, 1) == Complex(0.0, 0.0));
  CHECK(prod(1, 0) == Complex(0.0, 0.0));
}

TEST_CASE("matmul: permutation swaps rows") {
  const ComplexDense swap = mat2(0.0, 1.0, 1.0, 0.0);
  const ComplexDense x = mat2({1.0, 2.0}, {3.0, -1.0}, {5.0, 0.5}, {7.0, 0.0});
  const ComplexDense swapped = matmul(swap, x);
  CHECK(swapped(0, 0) == x(1, 0));
  CHECK(swapped(0, 1) == x(1, 1));
  CHECK(swapped(1, 0) == x(0, 0));
  CHECK(swapped(1, 1) == x(0, 1));
}

TEST_CASE("matmul: dimension mismatch names both shapes") {
  const ComplexDense a = random_general(3, 4, 1);
  const ComplexDense b = random_general(5, 2, 2);
  CHECK_THROWS_WITH_AS(matmul(a, b),
                       "matmul: dimension mismatch, 3x4 times 5x2",
                       InvalidInputError);
}

TEST_CASE("adjoint: conjugates a 1x1 matrix") {
  ComplexDense a(1, 1);
  a(0, 0) = Complex(1.0, 2.0);
  CHECK(adjoint(a)(0, 0) == Complex(1.0, -2.0));
}

TEST_CASE("adjoint: real symmetric matrix is a fixed point") {
  ComplexDense a(2, 2);
  a << 1.0, 2.0, 2.0, 5.0;
  CHECK(oracle::max_abs_diff(adjoint(a), a) == 0.0);
}

TEST_CASE("adjoint: swaps the shape") {
  const ComplexDense a = random_general(2, 3, 3);
  const ComplexDense at = adjoint(a);
  CHECK(at.rows() == 3);
  CHECK(at.cols() == 2);
}

TEST_CASE("adjoint is an involution, bit-exactly") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const ComplexDense a = random_general(7, 4, seed);
    const ComplexDense back = adjoint(adjoint(a));
    REQUIRE(a.rows() == back.rows());
    for (Index i = 0; i < a.rows(); ++i) {
      for (Index j = 0; j < a.cols(); ++j) {
        CHECK(a(i, j).real() == back(i, j).real());
        CHECK(a(i, j).imag() == back(i, j).imag());
      }
    }
  }
}

TEST_CASE("frobenius_norm: basics") {
  CHECK(frobenius_norm(ComplexDense::Zero(3, 2)) == 0.0);
  CHECK(frobenius_norm(ComplexDense::Identity(4, 4)) == doctest::Approx(2.0));
  ComplexDense a(1, 2);
  a << 3.0, 4.0;
  CHECK(frobenius_norm(a) == doctest::Approx(5.0));
}

TEST_CASE("frobenius_norm matches its adjoint to a few ulps") {
  const ComplexDense a = random_general(23, 17, 5);
  const double na = frobenius_norm(a);
  const double nat = frobenius_norm(adjoint(a));
  CHECK(std::abs(na - nat) <= 4e-16 * na);
}

TEST_CASE("is_unitary: identity, scaled diag, rotation") {
  CHECK(is_unitary(ComplexDense::Identity(5, 5), 1e-12));
  CHECK_FALSE(is_unitary(mat2(2.0, 0.0, 0.0, 1.0), 1e-12));
  const double t = 0.7342;
  const ComplexDense rot =
      mat2(std::cos(t), -std::sin(t), std::sin(t), std::cos(t));
  CHECK(is_unitary(rot, 1e-12));
  // non-square is false, not an error
  CHECK_FALSE(is_unitary(random_general(2, 3, 9), 1e-12));
}

TEST_CASE("is_hermitian: examples") {
  CHECK_FALSE(is_hermitian(mat2(0.0, 1.0, 0.0, 0.0), 1e-12));
  CHECK(is_hermitian(mat2(1.0, Complex(0.0, 1.0), Complex(0.0, -1.0), 1.0),
                     1e-12));
  CHECK_FALSE(is_hermitian(random_general(2, 3, 4), 1e-12));
}

TEST_CASE("gram products are hermitian for random matrices") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const ComplexDense a = random_general(6 + seed % 5, 4 + seed % 7, seed);
    const ComplexDense gram = matmul(a, adjoint(a));
    const double scale = frobenius_norm(a);
    CHECK(is_hermitian(gram, 1e-12 * scale * scale));
  }
}

TEST_CASE("matmul associativity on random triples") {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const ComplexDense a = random_general(5, 7, 3 * seed + 1);
    const ComplexDense b = random_general(7, 4, 3 * seed + 2);
    const ComplexDense c = random_general(4, 6, 3 * seed + 3);
    const ComplexDense left = matmul(matmul(a, b), c);
    const ComplexDense right = matmul(a, matmul(b, c));
    const double scale = frobenius_norm(left);
    CHECK(oracle::fro_ref(ComplexDense(left - right)) <= 1e-12 * scale);
  }
}

TEST_CASE("embed: rectangular diagonal layouts") {
  RealVector d2(2);
  d2 << 5.0, 1.0;
  const ComplexDense wide = embed(make_rect_diagonal(2, 3, d2));
  CHECK(wide.rows() == 2);
  CHECK(wide.cols() == 3);
  CHECK(wide(0, 0) == Complex(5.0, 0.0));
  CHECK(wide(1, 1) == Complex(1.0, 0.0));
  CHECK(wide(0, 1) == Complex(0.0, 0.0));
  CHECK(wide(1, 2) == Complex(0.0, 0.0));

  RealVector d1(1);
  d1 << 2.0;
  const ComplexDense tall = embed(make_rect_diagonal(3, 1, d1));
  CHECK(tall.rows() == 3);
  CHECK(tall.cols() == 1);
  CHECK(tall(0, 0) == Complex(2.0, 0.0));
  CHECK(tall(1, 0) == Complex(0.0, 0.0));
  CHECK(tall(2, 0) == Complex(0.0, 0.0));

  RealVector ones(2);
  ones << 1.0, 1.0;
  CHECK(oracle::max_abs_diff(embed(make_rect_diagonal(2, 2, ones)),
                             ComplexDense::Identity(2, 2)) == 0.0);
}

TEST_CASE("make_rect_diagonal validates its inputs") {
  RealVector d(2);
  d << 1.0, 2.0;
  CHECK_THROWS_AS(make_rect_diagonal(0, 2, d), InvalidInputError);
  CHECK_THROWS_AS(make_rect_diagonal(3, 3, d), InvalidInputError);
  RealVector neg(2);
  neg << 1.0, -0.5;
  CHECK_THROWS_AS(make_rect_diagonal(2, 2, neg), InvalidInputError);
}

TEST_CASE("degenerate dimensions are rejected") {
  ComplexDense empty;
  CHECK_THROWS_AS(matmul(empty, empty), InvalidInputError);
  CHECK_THROWS_AS(adjoint(empty), InvalidInputError);
  CHECK_THROWS_AS(frobenius_norm(empty), InvalidInputError);
}
