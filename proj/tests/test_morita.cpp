#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "entwine/morita.hpp"
#include "support.hpp"

using namespace entwine;

namespace {

void expect_all_ok(const Report& rep) {
  for (const auto& item : rep.items) {
    INFO(item.name << " " << item.witness);
    CHECK(item.ok);
  }
}

}  // namespace

TEST_CASE("trace splits the corner inclusion") {
  auto s = flip_entwining(support::dual_numbers<Rat>(),
                          support::coalgebra_k<Rat>());
  for (int r = 2; r <= 3; ++r)
    for (int n = 0; n <= 1; ++n) {
      auto tr = trace_chain(s, r, n);
      auto inc = inclusion_chain(s, r, 0, n);
      CHECK(mat_equal(matmul(tr, inc), sparse_identity<Rat>(int(chain_dim(s, n)))));
    }
}

TEST_CASE("chain homotopy telescopes to the trace projection") {
  auto s = support::zn_translation<Rat>(2);
  const int r = 2, n = 1;
  auto ext = matrix_extend(s, r, 4096);
  auto h_n = homotopy_total(s, r, n);
  auto h_prev = homotopy_total(s, r, n - 1);
  auto b_up = chain_boundary(ext, n);      // C_{n+1} -> C_n of the extension
  auto b_here = chain_boundary(ext, n - 1);
  auto lhs = add_scaled(matmul(b_up, h_n), Rat(1), matmul(h_prev, b_here), Rat(1));
  auto proj = matmul(inclusion_chain(s, r, 0, n), trace_chain(s, r, n));
  auto rhs = add_scaled(sparse_identity<Rat>(int(chain_dim(ext, n))), Rat(1),
                        proj, Rat(-1));
  CHECK(mat_equal(lhs, rhs));
}

TEST_CASE("full morita certificates on the corpus") {
  auto dual_flip = flip_entwining(support::dual_numbers<Rat>(),
                                  support::coalgebra_k<Rat>());
  expect_all_ok(morita_report(dual_flip, 2, 2));
  expect_all_ok(morita_report(support::zn_translation<Rat>(2), 2, 2));
  expect_all_ok(morita_report(
      flip_entwining(support::dual_numbers<Rat>(),
                     support::grouplike_coalgebra<Rat>(2)),
      2, 2));
}

TEST_CASE("morita certificate for a 3x3 extension") {
  auto s = flip_entwining(support::algebra_k<Rat>(), support::coalgebra_k<Rat>());
  expect_all_ok(morita_report(s, 3, 2));
}

TEST_CASE("morita certificate survives a basis change") {
  support::Rng rng(77);
  auto s = flip_entwining(support::dual_numbers<Rat>(),
                          support::coalgebra_k<Rat>());
  DMat<Rat> p = support::random_invertible<Rat>(rng, s.dimA());
  DMat<Rat> q = support::random_invertible<Rat>(rng, s.dimC());
  expect_all_ok(morita_report(support::change_basis(s, p, q), 2, 1));
}

TEST_CASE("reported dimension tables stay equal between A and M_2(A)") {
  auto s = support::zn_translation<Rat>(2);
  Report rep = morita_report(s, 2, 2);
  const CheckItem* dims = rep.find("cohomology dimensions agree");
  REQUIRE(dims != nullptr);
  CHECK(dims->ok);
  CHECK(dims->witness.find("hochschild base [2,0,0] matrix [2,0,0]") !=
        std::string::npos);
  CHECK(dims->witness.find("cyclic base [2,0,2] matrix [2,0,2]") !=
        std::string::npos);
}
