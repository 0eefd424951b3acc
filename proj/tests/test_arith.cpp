// Tests for the degree-order constraint solver: hand-picked systems with
// known answers, unit handling, integral tightening, disequality splitting,
// and agreement with an independent all-pairs reference solver on both an
// exhaustive small space and a large randomized sweep.

#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include <ccgnli/arith.hpp>

#include "support/arith_oracle.hpp"
#include "support/generators.hpp"

using ccgnli::arith_lit;
using ccgnli::arith_satisfiable;
using ccgnli::arith_var;
using ccgnli::ArithAtom;
using ccgnli::ArithOp;
using ccgnli::ArithTerm;
using ccgnli::Rational;
using ccgnli::UnitMismatchError;
using Catch::Matchers::ContainsSubstring;

namespace {

ArithAtom atom(ArithOp op, ArithTerm l, ArithTerm r) {
  return ArithAtom{op, std::move(l), std::move(r)};
}

const ArithTerm x = arith_var("x");
const ArithTerm y = arith_var("y");
const ArithTerm z = arith_var("z");

}  // namespace

TEST_CASE("atoms print readably") {
  CHECK(ccgnli::arith_atom_str(atom(ArithOp::Lt, x, y)) == "x < y");
  CHECK(ccgnli::arith_atom_str(atom(ArithOp::Le, arith_lit(Rational(5)), y)) ==
        "5 <= y");
  CHECK(ccgnli::arith_atom_str(
            atom(ArithOp::Eq, x, arith_lit(Rational(5), "foot"))) ==
        "x = 5 foot");
  CHECK(ccgnli::arith_atom_str(
            atom(ArithOp::Neq, arith_lit(Rational(1, 2)), x)) == "1/2 != x");
}

TEST_CASE("pure order constraints") {
  CHECK(arith_satisfiable({}));
  CHECK(arith_satisfiable({atom(ArithOp::Lt, x, y)}));
  CHECK_FALSE(
      arith_satisfiable({atom(ArithOp::Lt, x, y), atom(ArithOp::Lt, y, x)}));
  CHECK(
      arith_satisfiable({atom(ArithOp::Le, x, y), atom(ArithOp::Le, y, x)}));
  CHECK_FALSE(arith_satisfiable({atom(ArithOp::Lt, x, y),
                                 atom(ArithOp::Lt, y, z),
                                 atom(ArithOp::Lt, z, x)}));
  CHECK(arith_satisfiable({atom(ArithOp::Le, x, y), atom(ArithOp::Le, y, z),
                           atom(ArithOp::Le, z, x)}));
  // A single strict edge poisons an otherwise slack cycle.
  CHECK_FALSE(arith_satisfiable({atom(ArithOp::Le, x, y),
                                 atom(ArithOp::Le, y, z),
                                 atom(ArithOp::Lt, z, x)}));
}

TEST_CASE("equality chains") {
  CHECK_FALSE(arith_satisfiable({atom(ArithOp::Eq, x, y),
                                 atom(ArithOp::Eq, y, z),
                                 atom(ArithOp::Lt, x, z)}));
  CHECK(
      arith_satisfiable({atom(ArithOp::Eq, x, y), atom(ArithOp::Lt, y, z)}));
}

TEST_CASE("literal bounds") {
  auto three = arith_lit(Rational(3));
  CHECK_FALSE(
      arith_satisfiable({atom(ArithOp::Le, three, x), atom(ArithOp::Lt, x, three)}));
  CHECK(
      arith_satisfiable({atom(ArithOp::Le, three, x), atom(ArithOp::Le, x, three)}));
  CHECK(arith_satisfiable({atom(ArithOp::Lt, arith_lit(Rational(1)), x),
                           atom(ArithOp::Lt, x, arith_lit(Rational(2)))}));
  CHECK(arith_satisfiable({atom(ArithOp::Lt, arith_lit(Rational(1, 2)), x),
                           atom(ArithOp::Lt, x, arith_lit(Rational(2, 3)))}));

  SECTION("comparisons between two literals decide immediately") {
    CHECK(arith_satisfiable(
        {atom(ArithOp::Lt, arith_lit(Rational(1)), arith_lit(Rational(2)))}));
    CHECK_FALSE(arith_satisfiable(
        {atom(ArithOp::Lt, arith_lit(Rational(2)), arith_lit(Rational(1)))}));
    CHECK(arith_satisfiable(
        {atom(ArithOp::Le, arith_lit(Rational(2)), arith_lit(Rational(2)))}));
    CHECK_FALSE(arith_satisfiable(
        {atom(ArithOp::Lt, arith_lit(Rational(2)), arith_lit(Rational(2)))}));
    CHECK(arith_satisfiable({atom(ArithOp::Eq, arith_lit(Rational(1, 2)),
                                  arith_lit(Rational(2, 4)))}));
    CHECK_FALSE(arith_satisfiable(
        {atom(ArithOp::Eq, arith_lit(Rational(1)), arith_lit(Rational(2)))}));
    CHECK(arith_satisfiable(
        {atom(ArithOp::Neq, arith_lit(Rational(1)), arith_lit(Rational(2)))}));
    CHECK_FALSE(arith_satisfiable({atom(ArithOp::Neq, arith_lit(Rational(1)),
                                        arith_lit(Rational(1)))}));
  }
}

TEST_CASE("unit-tagged literals") {
  auto ft5 = arith_lit(Rational(5), "foot");
  auto ft4 = arith_lit(Rational(4), "foot");
  auto ft6 = arith_lit(Rational(6), "foot");
  auto lb3 = arith_lit(Rational(3), "pound");

  SECTION("one unit behaves like a plain scale") {
    CHECK(arith_satisfiable({atom(ArithOp::Le, ft5, x), atom(ArithOp::Lt, x, ft6)}));
    CHECK(arith_satisfiable({atom(ArithOp::Eq, x, ft5), atom(ArithOp::Lt, ft4, x)}));
    CHECK_FALSE(
        arith_satisfiable({atom(ArithOp::Eq, x, ft5), atom(ArithOp::Lt, ft6, x)}));
  }

  SECTION("literal-to-literal unit mismatch throws") {
    CHECK_THROWS_AS(arith_satisfiable({atom(ArithOp::Lt, ft5, lb3)}),
                    UnitMismatchError);
  }

  SECTION("a variable cannot straddle two units") {
    CHECK_THROWS_AS(arith_satisfiable(
                        {atom(ArithOp::Le, ft5, x), atom(ArithOp::Le, x, lb3)}),
                    UnitMismatchError);
  }

  SECTION("a measure and a pure number do not mix") {
    CHECK_THROWS_AS(
        arith_satisfiable({atom(ArithOp::Le, ft5, x),
                           atom(ArithOp::Le, x, arith_lit(Rational(7)))}),
        UnitMismatchError);
  }

  SECTION("separate components may carry different units") {
    CHECK(arith_satisfiable({atom(ArithOp::Le, ft5, x), atom(ArithOp::Le, lb3, y)}));
  }
}

TEST_CASE("integral variables get whole-number tightening") {
  auto d = arith_var("d", true);
  auto lit10 = arith_lit(Rational(10));
  auto lit11 = arith_lit(Rational(11));

  SECTION("a strict bound shifts to the next whole number") {
    // 10 < d forces 11 <= d, so there is no room below 11.
    CHECK_FALSE(
        arith_satisfiable({atom(ArithOp::Lt, lit10, d), atom(ArithOp::Lt, d, lit11)}));
    CHECK(arith_satisfiable({atom(ArithOp::Lt, lit10, arith_var("r")),
                             atom(ArithOp::Lt, arith_var("r"), lit11)}));
    CHECK(arith_satisfiable({atom(ArithOp::Lt, lit10, d), atom(ArithOp::Le, d, lit11)}));
  }

  SECTION("fractional pinch points close entirely") {
    auto half = arith_lit(Rational(21, 2));
    CHECK_FALSE(
        arith_satisfiable({atom(ArithOp::Le, half, d), atom(ArithOp::Le, d, half)}));
    CHECK(arith_satisfiable({atom(ArithOp::Le, half, arith_var("r")),
                             atom(ArithOp::Le, arith_var("r"), half)}));
  }

  SECTION("integrality is remembered from any occurrence of the name") {
    // First occurrence unmarked, second marked: the variable is integral.
    CHECK_FALSE(arith_satisfiable({atom(ArithOp::Lt, lit10, arith_var("d")),
                                   atom(ArithOp::Lt, arith_var("d", true), lit11)}));
  }

  SECTION("variable-to-variable strict edges tighten between integrals") {
    auto xi = arith_var("xi", true);
    auto yi = arith_var("yi", true);
    auto zi = arith_var("zi", true);
    std::vector<ArithAtom> chain = {
        atom(ArithOp::Lt, xi, yi), atom(ArithOp::Lt, yi, zi),
        atom(ArithOp::Le, zi, arith_lit(Rational(1))),
        atom(ArithOp::Le, arith_lit(Rational(0)), xi)};
    CHECK_FALSE(arith_satisfiable(chain));
    std::vector<ArithAtom> loose = {
        atom(ArithOp::Lt, x, y), atom(ArithOp::Lt, y, z),
        atom(ArithOp::Le, z, arith_lit(Rational(1))),
        atom(ArithOp::Le, arith_lit(Rational(0)), x)};
    CHECK(arith_satisfiable(loose));
  }
}

TEST_CASE("disequalities split into strict orders") {
  CHECK_FALSE(arith_satisfiable({atom(ArithOp::Neq, x, x)}));
  CHECK(arith_satisfiable({atom(ArithOp::Neq, x, y)}));
  CHECK_FALSE(arith_satisfiable({atom(ArithOp::Le, x, y),
                                 atom(ArithOp::Le, y, x),
                                 atom(ArithOp::Neq, x, y)}));
  CHECK_FALSE(arith_satisfiable({atom(ArithOp::Eq, x, arith_lit(Rational(5))),
                                 atom(ArithOp::Neq, x, arith_lit(Rational(5)))}));

  SECTION("an integral variable squeezed between its only two values") {
    auto d = arith_var("d", true);
    std::vector<ArithAtom> pinched = {
        atom(ArithOp::Le, arith_lit(Rational(0)), d),
        atom(ArithOp::Le, d, arith_lit(Rational(1))),
        atom(ArithOp::Neq, d, arith_lit(Rational(0))),
        atom(ArithOp::Neq, d, arith_lit(Rational(1)))};
    CHECK_FALSE(arith_satisfiable(pinched));
    std::vector<ArithAtom> loose = {
        atom(ArithOp::Le, arith_lit(Rational(0)), x),
        atom(ArithOp::Le, x, arith_lit(Rational(1))),
        atom(ArithOp::Neq, x, arith_lit(Rational(0))),
        atom(ArithOp::Neq, x, arith_lit(Rational(1)))};
    CHECK(arith_satisfiable(loose));
  }

  SECTION("the disequality budget is enforced") {
    std::vector<ArithAtom> many;
    for (int i = 0; i < 17; ++i)
      many.push_back(atom(ArithOp::Neq, arith_var("v" + std::to_string(i)),
                          arith_var("w" + std::to_string(i))));
    CHECK_THROWS_WITH(arith_satisfiable(many),
                      ContainsSubstring("too many disequalities"));
    many.pop_back();
    CHECK(arith_satisfiable(many));
  }
}

TEST_CASE("exhaustive agreement with the reference solver on two variables") {
  // Every one- and two-atom system over {x, y, 0, 1} and all four operators.
  std::vector<ArithTerm> terms = {x, y, arith_lit(Rational(0)),
                                  arith_lit(Rational(1))};
  std::vector<ArithOp> ops = {ArithOp::Lt, ArithOp::Le, ArithOp::Eq,
                              ArithOp::Neq};
  std::vector<ArithAtom> all;
  for (ArithOp op : ops)
    for (const auto& l : terms)
      for (const auto& r : terms) all.push_back(atom(op, l, r));

  long long checked = 0, mismatches = 0;
  for (const auto& a : all) {
    if (arith_satisfiable({a}) != testsupport::oracle_satisfiable({a}))
      ++mismatches;
    ++checked;
  }
  for (const auto& a : all)
    for (const auto& b : all) {
      if (arith_satisfiable({a, b}) != testsupport::oracle_satisfiable({a, b}))
        ++mismatches;
      ++checked;
    }
  INFO("systems checked: " << checked);
  CHECK(checked == 64 + 64 * 64);
  CHECK(mismatches == 0);
}

TEST_CASE("randomized agreement with the reference solver") {
  testsupport::Rng rng(20260815u);
  int sat = 0, unsat = 0;
  for (int i = 0; i < 1200; ++i) {
    auto c = testsupport::random_arith_case(rng, 5, 8, true);
    bool got = arith_satisfiable(c.atoms);
    bool want = testsupport::oracle_satisfiable(c.atoms);
    if (got != want) {
      std::string dump;
      for (const auto& a : c.atoms) dump += ccgnli::arith_atom_str(a) + "; ";
      INFO("case " << i << ": " << dump);
      REQUIRE(got == want);
    }
    (got ? sat : unsat)++;
  }
  // The generator must exercise both outcomes.
  CHECK(sat > 100);
  CHECK(unsat > 100);
}

TEST_CASE("grid search confirms satisfiable verdicts") {
  // The grid enumerates half-step assignments; when it finds a model the
  // solver must agree, and a solver UNSAT must leave the grid empty-handed.
  testsupport::Rng rng(99173u);
  int grid_sat = 0;
  for (int i = 0; i < 300; ++i) {
    auto c = testsupport::random_arith_case(rng, 3, 5, true);
    bool got = arith_satisfiable(c.atoms);
    bool grid = testsupport::grid_satisfiable(c.atoms, c.vars);
    if (grid) {
      ++grid_sat;
      std::string dump;
      for (const auto& a : c.atoms) dump += ccgnli::arith_atom_str(a) + "; ";
      INFO("case " << i << ": " << dump);
      REQUIRE(got);
    }
  }
  CHECK(grid_sat > 50);
}
