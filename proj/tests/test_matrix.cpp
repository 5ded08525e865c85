#include <doctest.h>

#include "punc/generate.hpp"
#include "punc/matrix.hpp"

using namespace punc;

namespace {
const cplx kI{0.0, 1.0};
}

TEST_SUITE_BEGIN("matrix");

TEST_CASE("kron identity case") {
  const auto i2 = ComplexMatrix::identity(2);
  CHECK(max_abs_diff(kron(i2, i2), ComplexMatrix::identity(4)) == 0.0);
}

TEST_CASE("kron of 1x1 scalars") {
  const auto a = ComplexMatrix::from_rows({{2.0}});
  const auto b = ComplexMatrix::from_rows({{3.0}});
  CHECK(kron(a, b)(0, 0) == cplx{6.0, 0.0});
}

TEST_CASE("kron of swap with identity is block anti-diagonal") {
  const auto x = ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  const auto expected = ComplexMatrix::from_rows({{0, 0, 1, 0},
                                                  {0, 0, 0, 1},
                                                  {1, 0, 0, 0},
                                                  {0, 1, 0, 0}});
  CHECK(max_abs_diff(kron(x, ComplexMatrix::identity(2)), expected) == 0.0);
}

TEST_CASE("kron is associative on integer inputs") {
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    ComplexMatrix a(2, 2), b(2, 3), c(3, 2);
    for (auto* m : {&a, &b, &c})
      for (std::size_t i = 0; i < m->rows(); ++i)
        for (std::size_t j = 0; j < m->cols(); ++j)
          (*m)(i, j) = cplx(double(rng.uniform_index(7)) - 3.0, double(rng.uniform_index(5)));
    CHECK(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))) == 0.0);
  }
}

TEST_CASE("trace of kron factorizes") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_gaussian_matrix(rng, 3, 3);
    const auto b = random_gaussian_matrix(rng, 4, 4);
    CHECK(std::abs(trace(kron(a, b)) - trace(a) * trace(b)) <= 1e-12 * 16.0);
  }
}

TEST_CASE("kron dimension overflow is rejected") {
  const ComplexMatrix big(1024, 1024);
  CHECK_THROWS_AS((void)kron(big, ComplexMatrix(2, 2)), DimensionError);
}

TEST_CASE("hadamard identity and hand-expanded cases") {
  const auto i2 = ComplexMatrix::identity(2);
  CHECK(max_abs_diff(hadamard(i2, i2), i2) == 0.0);

  const auto a = ComplexMatrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
  const auto b = ComplexMatrix::from_rows({{0.0, 1.0}, {1.0, 0.0}});
  const auto expected = ComplexMatrix::from_rows({{0.0, 2.0}, {3.0, 0.0}});
  CHECK(max_abs_diff(hadamard(a, b), expected) == 0.0);

  CHECK_THROWS_AS((void)hadamard(i2, ComplexMatrix(3, 3)), DimensionError);
}

TEST_CASE("conj_transpose basics and involution") {
  CHECK(max_abs_diff(conj_transpose(ComplexMatrix::identity(2)), ComplexMatrix::identity(2)) ==
        0.0);
  const auto m = ComplexMatrix::from_rows({{kI}});
  CHECK(conj_transpose(m)(0, 0) == -kI);

  Rng rng(3);
  const auto a = random_gaussian_matrix(rng, 3, 5);
  CHECK(max_abs_diff(conj_transpose(conj_transpose(a)), a) == 0.0);
}

TEST_CASE("trace examples and cyclic invariance") {
  CHECK(trace(ComplexMatrix::identity(3)) == cplx{3.0, 0.0});
  CHECK(trace(ComplexMatrix::from_rows({{1.0, 5.0}, {7.0, 2.0}})) == cplx{3.0, 0.0});
  CHECK_THROWS_AS((void)trace(ComplexMatrix(2, 3)), DimensionError);

  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto a = random_gaussian_matrix(rng, 3, 4);
    const auto b = random_gaussian_matrix(rng, 4, 3);
    CHECK(std::abs(trace(multiply(a, b)) - trace(multiply(b, a))) <= 1e-12 * 16.0);
    CHECK(std::abs(trace_of_product(a, b) - trace(multiply(a, b))) <= 1e-12 * 16.0);
  }
}

TEST_CASE("partial permutation matrices are exactly semi-unitary") {
  for (std::size_t n : {1u, 2u, 3u, 4u}) {
    const auto p = diagonal_selection(n).to_matrix();
    CHECK(max_abs_diff(multiply(p, conj_transpose(p)), ComplexMatrix::identity(n)) == 0.0);
  }
  CHECK_THROWS_AS(PartialPermutation(4, {0, 0}), DimensionError);
  CHECK_THROWS_AS(PartialPermutation(4, {5}), DimensionError);
}

TEST_CASE("hadamard rewrite n=1 and identity case") {
  const auto a = ComplexMatrix::from_rows({{cplx{2.0, 1.0}}});
  const auto b = ComplexMatrix::from_rows({{cplx{0.5, -1.0}}});
  CHECK(hadamard_rewrite(diagonal_selection(1), a, b)(0, 0) == a(0, 0) * b(0, 0));

  const auto i2 = ComplexMatrix::identity(2);
  CHECK(max_abs_diff(hadamard_rewrite(diagonal_selection(2), i2, i2), i2) == 0.0);
}

TEST_CASE("hadamard rewrite equals entrywise product on random matrices") {
  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + trial % 2;
    const auto a = random_gaussian_matrix(rng, n, n);
    const auto b = random_gaussian_matrix(rng, n, n);
    CHECK(max_abs_diff(hadamard_rewrite(diagonal_selection(n), a, b), hadamard(a, b)) <= 1e-12);
  }
}

TEST_CASE("hadamard rewrite rejects a wrong selection pattern") {
  const auto a = ComplexMatrix::identity(2);
  const PartialPermutation wrong(4, {0, 1});
  CHECK_THROWS_AS((void)hadamard_rewrite(wrong, a, a), DimensionError);
}

TEST_SUITE_END();
