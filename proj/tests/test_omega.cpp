#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "entwine/omega.hpp"
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

TEST_CASE("truncated universal calculus satisfies the differential graded axioms") {
  expect_all_ok(validate_dg_entwining(
      omega_build(flip_entwining(support::dual_numbers<Rat>(),
                                 support::coalgebra_k<Rat>()),
                  2)));
  expect_all_ok(validate_dg_entwining(
      omega_build(support::zn_translation<Rat>(2), 2)));
  expect_all_ok(validate_dg_entwining(
      omega_build(flip_entwining(support::dual_numbers<Rat>(),
                                 support::grouplike_coalgebra<Rat>(2)),
                  2)));
}

TEST_CASE("dimension formula of the truncation") {
  auto s = support::zn_translation<Rat>(2);
  auto dg = omega_build(s, 3);
  CHECK(dg.dim == std::vector<long long>{2, 6, 12, 24});
  CHECK_THROWS_AS(dg.mul_table(2, 2), EntwineError);
}

TEST_CASE("traces attached to cyclic cocycles pass the trace axioms") {
  for (int n = 0; n <= 2; ++n) {
    auto s = support::zn_translation<Rat>(2);
    auto dg = omega_build(s, n < 1 ? 1 : n);
    auto r = cohomology(s, Theory::Cyclic, n);
    for (int j = 0; j < r.cocycle_basis.cols(); ++j) {
      auto T = trace_from_cocycle(s, sparse_col(r.cocycle_basis, j));
      expect_all_ok(validate_trace(dg, T));
    }
  }
}

TEST_CASE("non-cocycles fail the trace axioms") {
  auto s = support::zn_translation<Rat>(2);
  auto dg = omega_build(s, 1);
  DVec<Rat> g = zero_vec<Rat>(2 * 2 * 2);
  g(3) = Rat(1);  // a single tuple functional, not a cyclic cocycle
  auto T = trace_from_cocycle(s, g);
  CHECK(!validate_trace(dg, T).ok());
}

TEST_CASE("character inverts the trace construction") {
  auto s = flip_entwining(support::dual_numbers<Rat>(),
                          support::coalgebra_k<Rat>());
  for (int n = 0; n <= 2; ++n) {
    auto dg = omega_build(s, n < 1 ? 1 : n);
    auto r = cohomology(s, Theory::Cyclic, n);
    for (int j = 0; j < r.cocycle_basis.cols(); ++j) {
      DVec<Rat> g = sparse_col(r.cocycle_basis, j);
      auto T = trace_from_cocycle(s, g);
      CHECK(dvec_equal(character(dg, T, n), g));
    }
  }
}

TEST_CASE("trace constraint solutions are exactly the cyclic cocycles") {
  for (const auto& s : {flip_entwining(support::dual_numbers<Rat>(),
                                       support::coalgebra_k<Rat>()),
                        support::zn_translation<Rat>(2)}) {
    for (int n = 0; n <= 2; ++n) {
      auto dg = omega_build(s, n < 1 ? 1 : n);
      auto constraints = trace_constraints(dg, n);
      auto solutions = kernel_basis(constraints);
      auto r = cohomology(s, Theory::Cyclic, n);
      // push each cocycle through trace_from_cocycle and compare spans
      std::vector<SpMat<Rat>> cols;
      for (int j = 0; j < r.cocycle_basis.cols(); ++j) {
        auto T = trace_from_cocycle(s, sparse_col(r.cocycle_basis, j));
        cols.push_back(vec_to_sparse(T.v));
      }
      auto span = cols.empty()
                      ? SpMat<Rat>(solutions.rows(), 0)
                      : hcat(cols);
      CHECK(solutions.cols() == r.cocycle_dim);
      CHECK(same_span(solutions, span));
    }
  }
}

TEST_CASE("pullback along the identity morphism is the identity") {
  auto s = support::zn_translation<Rat>(2);
  auto r = cohomology(s, Theory::Cyclic, 1);
  REQUIRE(r.cocycle_basis.cols() > 0);
  DVec<Rat> g = sparse_col(r.cocycle_basis, 0);
  CHECK(dvec_equal(pullback_cochain(identity_morphism(s), g), g));
}

TEST_CASE("conjugation by an entwined unit moves cocycles by coboundaries") {
  auto s = matrix_extend(
      flip_entwining(support::algebra_k<Rat>(), support::coalgebra_k<Rat>()), 2,
      4096);
  DVec<Rat> x = zero_vec<Rat>(4);
  x(1) = x(2) = Rat(1);  // the transposition matrix, its own inverse
  auto r = cohomology(s, Theory::Cyclic, 2);
  REQUIRE(r.cocycle_basis.cols() == 4);
  for (int j = 0; j < r.cocycle_basis.cols(); ++j)
    expect_all_ok(conjugation_check(s, x, x, sparse_col(r.cocycle_basis, j)));
}

TEST_CASE("corner collapse fails on finite unital algebras") {
  auto s = flip_entwining(support::dual_numbers<Rat>(),
                          support::coalgebra_k<Rat>());
  DMat<Rat> nu = zero_mat<Rat>(s.dimA(), s.dimA());
  for (int i = 0; i < s.dimA(); ++i) nu(i, i) = Rat(1);
  auto ext = matrix_extend(s, 2, 4096);
  DVec<Rat> one = zero_vec<Rat>(ext.dimA());
  one(matrix_basis_index(2, 0, 0, 0)) = Rat(1);
  one(matrix_basis_index(2, 0, 1, 1)) = Rat(1);
  Report rep = vanishing_hypotheses_check(s, nu, one, one);
  const CheckItem* morphism = rep.find("(nu, id) is an entwining morphism");
  const CheckItem* unit = rep.find("X lies in U_psi(M_2(A))");
  const CheckItem* collapse = rep.find("conjugation collapses the first corner");
  REQUIRE(morphism != nullptr);
  REQUIRE(unit != nullptr);
  REQUIRE(collapse != nullptr);
  CHECK(morphism->ok);
  CHECK(unit->ok);
  // no finite dimensional unital algebra admits the collapse, by rank
  CHECK(!collapse->ok);
}
