// Composition of logical forms from derivation trees, checked against the
// printed forms for the core constructions: adverbs with comparative and
// equative variants, gradable and measured adjectives, and the three
// quantifier monotonicity classes.

#include <catch2/catch_amalgamated.hpp>

#include <ccgnli/cky.hpp>
#include <ccgnli/compose.hpp>
#include <ccgnli/fuse.hpp>
#include <ccgnli/lexicon.hpp>
#include <ccgnli/problems.hpp>
#include <ccgnli/rewrite.hpp>
#include <ccgnli/templates.hpp>

#include "support/paths.hpp"
#include "support/term_compare.hpp"

using namespace ccgnli;

namespace {

struct Fixture {
  Lexicon lex;
  TemplateBank templates;
  ScaleResolver scales;
  Fixture() {
    lex.load_dir(testsupport::data_dir());
    templates.load(testsupport::data_file("templates.tsv"));
    KnowledgeBase kb;
    kb.load(testsupport::data_file("kb.tsv"));
    scales = ScaleResolver(kb);
  }
};

Fixture& fx() {
  static Fixture f;
  return f;
}

Formula compose_text(const std::string& text) {
  auto& f = fx();
  auto fusedToks = fuse_tokens(tokenize_sentence(text, f.lex), f.lex);
  CkyParser parser(f.lex);
  auto parses = parser.parse(fusedToks);
  REQUIRE_FALSE(parses.empty());
  Composer composer(f.templates, f.lex, f.scales);
  std::string first_error;
  for (const auto& p : parses) {
    try {
      return composer.compose(rewrite_monotonicity_features(p, f.lex));
    } catch (const Error& e) {
      if (first_error.empty()) first_error = e.what();
    }
  }
  FAIL("no parse composes for: " << text << " (" << first_error << ")");
  return {};
}

void golden(const std::string& text, const std::string& expected) {
  Formula got = compose_text(text);
  INFO(text);
  INFO("got:      " + formula_str(got));
  INFO("expected: " + expected);
  CHECK(testsupport::same_logical_form(got, expected));
}

}  // namespace

TEST_CASE("golden forms: adverb family") {
  golden("John shouted loudly .",
         "exists e1.((shout(e1) & subj(e1) = john) & loud(e1, th_loud))");
  golden("Ann studied English very hard .",
         "exists e1.((study(e1) & subj(e1) = ann & acc(e1) = english) & "
         "exists d1.(hard(e1, d1) & th_hard < d1))");
  golden("Jim sings better than Mary .",
         "exists e1.exists e2.((sing(e1) & subj(e1) = jim) & (sing(e2) & "
         "subj(e2) = mary) & exists d1.(good(e1, d1) & -good(e2, d1)))");
  golden("Bob drives as carefully as John .",
         "exists e1.exists e2.((drive(e1) & subj(e1) = bob) & (drive(e2) & "
         "subj(e2) = john) & forall d1.(careful(e2, d1) -> careful(e1, d1)))");
}

TEST_CASE("golden forms: quantifier monotonicity classes") {
  golden("Many people cried .",
         "exists x1.(people(x1) & many(x1, th_many_person) & "
         "exists e1.(cry(e1) & subj(e1) = x1))");
  golden("Less than five students laughed .",
         "-(exists x1.(student(x1) & many(x1, 5) & "
         "exists e1.(laugh(e1) & subj(e1) = x1)))");
  golden("Exactly eleven boys play soccer .",
         "(exists x1.(boy(x1) & many(x1, 11) & exists e1.(play(e1) & "
         "subj(e1) = x1 & acc(e1) = soccer))) & forall x2.forall d1.(boy(x2) "
         "& many(x2, d1) & (exists e2.(play(e2) & subj(e2) = x2 & acc(e2) = "
         "soccer)) -> d1 < 12)");
}

TEST_CASE("golden forms: adjectives and degrees") {
  golden("Chris is tall .", "tall(chris, th_tall)");
  golden("Chris is five feet tall .", "tall(chris, 5 foot)");
  golden("John is taller than Bob .",
         "exists d1.(tall(john, d1) & -tall(bob, d1))");
  golden("John is as tall as Bob .",
         "forall d1.(tall(bob, d1) -> tall(john, d1))");
  golden("Chris is at least five feet tall .",
         "exists d1.(tall(chris, d1) & 5 foot <= d1)");
  golden("Chris is more than five feet tall .",
         "exists d1.(tall(chris, d1) & 5 foot < d1)");
  golden("Chris is less than five feet tall .", "-tall(chris, 5 foot)");
}

TEST_CASE("golden forms: events and arguments") {
  golden("John ran .", "exists e1.(run(e1) & subj(e1) = john)");
  golden("John did not shout .",
         "-(exists e1.(shout(e1) & subj(e1) = john))");
  golden("Every student laughed .",
         "forall x1.(student(x1) -> exists e1.(laugh(e1) & subj(e1) = x1))");
  golden("No student danced .",
         "-(exists x1.(student(x1) & exists e1.(dance(e1) & subj(e1) = "
         "x1)))");
  golden("A puppy rolled on the floor .",
         "exists x1.(puppy(x1) & exists x2.(floor(x2) & exists e1.((roll(e1) "
         "& subj(e1) = x1) & on(e1, x2))))");
  golden("John ran or Mary walked .",
         "(exists e1.(run(e1) & subj(e1) = john)) | (exists e2.(walk(e2) & "
         "subj(e2) = mary))");
  golden("John ran and Mary walked .",
         "(exists e1.(run(e1) & subj(e1) = john)) & (exists e2.(walk(e2) & "
         "subj(e2) = mary))");
}

TEST_CASE("clausal comparative") {
  golden("ITEL won more orders than APCOM lost .",
         "exists d1.((exists x1.(order(x1) & many(x1, d1) & exists e1.(win(e1)"
         " & subj(e1) = itel & acc(e1) = x1))) & -(exists x2.(order(x2) & "
         "many(x2, d1) & exists e2.(lose(e2) & subj(e2) = apcom & acc(e2) = "
         "x2))))");
}

TEST_CASE("composition failures are typed errors") {
  auto& f = fx();
  Composer composer(f.templates, f.lex, f.scales);
  SECTION("unknown template key") {
    LeafAttrs attrs;
    attrs.template_key = "no-such-template";
    auto leaf = mk_leaf("zzz", "zzz", Pos::Noun, parse_category("S"), attrs);
    CHECK_THROWS_AS(composer.compose(leaf), NoTemplateError);
  }
  SECTION("root must be a sentence") {
    auto leaf = mk_leaf("John", "john", Pos::ProperNoun, parse_category("NP"));
    CHECK_THROWS_AS(composer.compose(leaf), CompositionError);
  }
}

TEST_CASE("composed forms are well typed formulas") {
  for (const char* s :
       {"John shouted loudly .", "Many people cried .",
        "Exactly eleven boys play soccer .", "Chris is five feet tall .",
        "ITEL won more orders than APCOM lost ."}) {
    Formula f = compose_text(s);
    CHECK(f.valid());
    // printing and reparsing preserves the form
    CHECK(testsupport::same_logical_form(f, formula_str(f)));
  }
}
