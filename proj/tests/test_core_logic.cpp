// Typed lambda terms: construction, substitution, normalization, formula
// validation, and the text round trip.

#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include <ccgnli/rational.hpp>
#include <ccgnli/term.hpp>
#include <ccgnli/term_text.hpp>

#include "support/generators.hpp"
#include "support/term_compare.hpp"

using namespace ccgnli;

namespace {

TypePtr E() { return SemType::entity(); }
TypePtr T() { return SemType::truth(); }
TypePtr ET() { return SemType::arrow(E(), T()); }

TermPtr pred(const std::string& p, TermPtr arg) {
  return mk_app(mk_const(p, ET()), std::move(arg));
}

}  // namespace

TEST_CASE("rational arithmetic") {
  SECTION("normalization") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, -4) == Rational(1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(6, 3).is_integer());
    CHECK_FALSE(Rational(1, 3).is_integer());
  }
  SECTION("field laws on random values") {
    std::mt19937_64 rng(7);
    for (int i = 0; i < 500; ++i) {
      Rational a((long long)(rng() % 41) - 20, (long long)(rng() % 9) + 1);
      Rational b((long long)(rng() % 41) - 20, (long long)(rng() % 9) + 1);
      CHECK((a + b) - b == a);
      CHECK(a + b == b + a);
      if (b != Rational(0)) CHECK(a * b * Rational(b.den(), b.num()) == a);
      CHECK(a - a == Rational(0));
      CHECK((a < b) == (b - a > Rational(0)));
    }
  }
  SECTION("floor and ceil") {
    CHECK(Rational(7, 2).floor() == 3);
    CHECK(Rational(7, 2).ceil() == 4);
    CHECK(Rational(-7, 2).floor() == -4);
    CHECK(Rational(-7, 2).ceil() == -3);
    CHECK(Rational(5).floor() == 5);
    CHECK(Rational(5).ceil() == 5);
  }
  SECTION("string round trip") {
    CHECK(Rational::parse("3/4") == Rational(3, 4));
    CHECK(Rational::parse("-11") == Rational(-11));
    CHECK(Rational(9, 6).str() == "3/2");
  }
}

TEST_CASE("typing") {
  SECTION("application types compose") {
    auto t = pred("tall", mk_const("chris", E()));
    CHECK(type_str(type_of(t)) == "T");
  }
  SECTION("mismatched application is rejected") {
    auto bad = mk_app(mk_const("tall", ET()), mk_num(Rational(3)));
    CHECK_THROWS_AS(type_of(bad), TypeError);
  }
  SECTION("quantifier body must be a truth value") {
    auto bad = mk_exists("x", E(), mk_const("c", E()));
    CHECK_THROWS_AS(type_of(bad), TypeError);
  }
}

TEST_CASE("substitution avoids capture") {
  // (\x. exists y. p(x) & q(y)) applied to y must rename the binder
  auto body = mk_exists(
      "y", E(), mk_and(pred("p", mk_var("x", E())), pred("q", mk_var("y", E()))));
  auto abs = mk_abs("x", E(), body);
  auto applied = beta_normalize(mk_app(abs, mk_var("y", E())));
  auto fv = free_vars(applied);
  REQUIRE(fv.size() == 1);
  CHECK(fv.begin()->first == "y");
  // the free y must not be bound by the surviving quantifier
  CHECK(applied->kind == TermKind::Exists);
  CHECK(applied->name != "y");
}

TEST_CASE("beta normalization") {
  SECTION("identity chains collapse") {
    auto id = mk_abs("x", E(), mk_var("x", E()));
    TermPtr t = mk_const("john", E());
    for (int i = 0; i < 5; ++i) t = mk_app(id, t);
    auto n = beta_normalize(t);
    CHECK(term_str(n) == "john");
  }
  SECTION("normalization is idempotent") {
    auto f = mk_abs(
        "p", ET(),
        mk_exists("x", E(), mk_app(mk_var("p", ET()), mk_var("x", E()))));
    auto t = mk_app(f, mk_abs("y", E(), pred("tall", mk_var("y", E()))));
    auto once = beta_normalize(t);
    auto twice = beta_normalize(once);
    CHECK(term_str(once) == term_str(twice));
  }
}

TEST_CASE("rectify gives distinct binder names") {
  auto inner = mk_exists("x", E(), pred("p", mk_var("x", E())));
  auto t = mk_and(inner, mk_exists("x", E(), pred("q", mk_var("x", E()))));
  auto r = rectify(t);
  CHECK(r->a->name != r->b->name);
  CHECK(term_str(rectify(r)) == term_str(r));
}

TEST_CASE("formula validation") {
  SECTION("accepts a closed truth-typed term") {
    auto f = Formula::make(mk_exists("x", E(), pred("p", mk_var("x", E()))));
    CHECK(f.valid());
  }
  SECTION("rejects open terms") {
    CHECK_THROWS_AS(Formula::make(pred("p", mk_var("x", E()))), TypeError);
  }
  SECTION("rejects non-truth terms") {
    CHECK_THROWS_AS(Formula::make(mk_const("john", E())), TypeError);
  }
  SECTION("rejects unreduced lambdas") {
    auto abs = mk_abs("x", E(), pred("p", mk_var("x", E())));
    CHECK_THROWS_AS(Formula::make(mk_and(mk_app(abs, mk_var("y", E())),
                                         pred("q", mk_var("y", E())))),
                    TypeError);
  }
  SECTION("default constructed formula is invalid") {
    Formula f;
    CHECK_FALSE(f.valid());
  }
  SECTION("negate wraps the root") {
    auto f = Formula::make(pred("p", mk_const("c", E())));
    CHECK(formula_str(negate(f)) == "-p(c)");
  }
}

TEST_CASE("text round trip") {
  const char* samples[] = {
      "exists e1.((shout(e1) & subj(e1) = john) & loud(e1, th_loud))",
      "-(exists x1.(student(x1) & many(x1, 5) & exists e1.(laugh(e1) & "
      "subj(e1) = x1)))",
      "forall d1.(careful(c1, d1) -> careful(c2, d1))",
      "exists d1.(tall(chris, d1) & -tall(alex, d1))",
      "tall(chris, 5 foot)",
      "p(c) | (q(c) -> r(c)) | s(c) <-> t(c)",
  };
  for (const char* s : samples) {
    auto t = parse_term(s);
    auto again = parse_term(term_str(t));
    INFO(s);
    CHECK(term_str(again) == term_str(t));
  }
}

TEST_CASE("printer round trip on random formulas") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    testsupport::FormulaVocab v = testsupport::small_vocab(rng, true, true);
    auto f = testsupport::random_formula(rng, v, 3);
    auto back = parse_formula(formula_str(f));
    INFO(formula_str(f));
    CHECK(formula_str(back) == formula_str(f));
    CHECK(testsupport::same_logical_form(back.term(), f.term()));
  }
}
