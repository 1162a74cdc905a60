#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "entwine/linalg.hpp"

using namespace entwine;

namespace {

template <class S>
SpMat<S> from_rows(const std::vector<std::vector<S>>& rows) {
  int r = int(rows.size());
  int c = r ? int(rows[0].size()) : 0;
  std::vector<Trip<S>> t;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      if (!is_zero(rows[std::size_t(i)][std::size_t(j)]))
        t.emplace_back(i, j, rows[std::size_t(i)][std::size_t(j)]);
  return sparse_from_triplets<S>(r, c, t);
}

}  // namespace

TEST_CASE("rational scalars parse and normalize") {
  CHECK(rat_from_string("2/4") == Rat(1, 2));
  CHECK(rat_from_string("-6/3") == Rat(-2));
  CHECK_THROWS_AS(rat_from_string("x"), EntwineError);
  CHECK_THROWS_AS(rat_from_string("1/0"), EntwineError);
}

TEST_CASE("prime field arithmetic") {
  Fp a(3, 7), b(5, 7);
  CHECK((a + b).value() == 1);
  CHECK((a * b).value() == 1);
  CHECK((a - b).value() == 5);
  CHECK((a / b).value() == 2);  // 3 * 5^-1 = 3*3 = 2 mod 7
  CHECK((a + Fp(0)).value() == 3);    // modulus-free literal adopts 7
  CHECK_THROWS_AS(a + Fp(1, 5), EntwineError);
  CHECK_THROWS_AS(Field::prime(4), EntwineError);
  CHECK_THROWS_AS(Field::parse("fp:0"), EntwineError);
  CHECK(Field::parse("fp:10007").p == 10007);
}

TEST_CASE("field conversion enforces integrality") {
  CHECK(scalar_from_rat<Fp>(Rat(-1), Field::prime(5)).value() == 4);
  CHECK_THROWS_AS(scalar_from_rat<Fp>(Rat(1, 2), Field::prime(5)), EntwineError);
  CHECK(scalar_from_rat<Rat>(Rat(1, 2), Field::rationals()) == Rat(1, 2));
}

TEST_CASE("rank over Q and over F_p can differ") {
  auto m = from_rows<Rat>({{Rat(2)}});
  CHECK(rank(m) == 1);
  auto m2 = from_rows<Fp>({{Fp(2, 2)}});
  CHECK(rank(m2) == 0);
}

TEST_CASE("row echelon picks canonical pivots") {
  auto m = from_rows<Rat>({{Rat(2), Rat(4), Rat(2)},
                           {Rat(1), Rat(2), Rat(3)},
                           {Rat(3), Rat(6), Rat(5)}});
  auto e = row_echelon(m);
  CHECK(e.rank() == 2);
  CHECK(e.pivot_col == std::vector<int>{0, 2});
  CHECK(e.pivot_row_of_col[1] == -1);
}

TEST_CASE("kernel basis is exact and canonical") {
  auto m = from_rows<Rat>({{Rat(1), Rat(2), Rat(3)}, {Rat(2), Rat(4), Rat(6)}});
  auto k = kernel_basis(m);
  CHECK(k.cols() == 2);
  CHECK(is_zero_mat(matmul(m, k)));
  auto k2 = kernel_basis(m);
  CHECK(mat_equal(k, k2));
  // full-rank square matrix has trivial kernel
  auto id = sparse_identity<Rat>(3);
  CHECK(kernel_basis(id).cols() == 0);
}

TEST_CASE("solve_many flags unsolvable columns") {
  auto m = from_rows<Rat>({{Rat(1), Rat(0)}, {Rat(0), Rat(0)}});
  std::vector<Trip<Rat>> t{{0, 0, Rat(5)}, {1, 1, Rat(1)}};
  auto b = sparse_from_triplets<Rat>(2, 2, t);
  auto sol = solve_many(m, b);
  CHECK(sol.ok == std::vector<bool>{true, false});
  CHECK(!sol.all_ok());
  CHECK(sparse_col(sol.x, 0)(0) == Rat(5));
  auto mem = solve_membership(m, sparse_col(b, 1));
  CHECK(!mem.has_value());
}

TEST_CASE("image basis and span comparison") {
  auto m = from_rows<Rat>({{Rat(1), Rat(2), Rat(0)}, {Rat(0), Rat(0), Rat(1)}});
  auto im = image_basis(m);
  CHECK(im.cols() == 2);
  auto scaled_m = scaled(m, Rat(7));
  CHECK(same_span(image_basis(scaled_m), im));
  auto other = from_rows<Rat>({{Rat(1), Rat(0)}, {Rat(0), Rat(0)}});
  CHECK(!same_span(image_basis(other), im));
}

TEST_CASE("sparse helpers compose") {
  auto a = from_rows<Rat>({{Rat(1), Rat(2)}, {Rat(3), Rat(4)}});
  auto b = from_rows<Rat>({{Rat(0), Rat(1)}, {Rat(1), Rat(0)}});
  auto ab = matmul(a, b);
  CHECK(sparse_col(ab, 0)(0) == Rat(2));
  CHECK(sparse_col(ab, 1)(1) == Rat(3));
  CHECK(mat_equal(transpose_of(transpose_of(a)), a));
  auto lin = add_scaled(a, Rat(2), b, Rat(-1));
  CHECK(sparse_col(lin, 0)(1) == Rat(5));
  CHECK_THROWS_AS(matmul(a, sparse_identity<Rat>(3)), EntwineError);
  auto h = hcat(std::vector<SpMat<Rat>>{a, b});
  CHECK(h.cols() == 4);
  CHECK(sparse_col(h, 2)(1) == Rat(1));
}

TEST_CASE("everything again over F_101") {
  const long long p = 101;
  auto m = from_rows<Fp>({{Fp(1, p), Fp(2, p), Fp(3, p)},
                          {Fp(4, p), Fp(5, p), Fp(6, p)},
                          {Fp(7, p), Fp(8, p), Fp(9, p)}});
  CHECK(rank(m) == 2);
  auto k = kernel_basis(m);
  CHECK(k.cols() == 1);
  CHECK(is_zero_mat(matmul(m, k)));
  CHECK(same_span(image_basis(m), image_basis(scaled(m, Fp(3, p)))));
}
