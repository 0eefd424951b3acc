// Categories, token fusion, chart parsing, derivation ingestion, and the
// monotonicity feature rewrite.

#include <catch2/catch_amalgamated.hpp>

#include <ccgnli/category.hpp>
#include <ccgnli/cky.hpp>
#include <ccgnli/derivation.hpp>
#include <ccgnli/fuse.hpp>
#include <ccgnli/lexicon.hpp>
#include <ccgnli/problems.hpp>
#include <ccgnli/rewrite.hpp>

#include "support/paths.hpp"

using namespace ccgnli;

namespace {

const Lexicon& lex() {
  static Lexicon l = [] {
    Lexicon x;
    x.load_dir(testsupport::data_dir());
    return x;
  }();
  return l;
}

std::vector<Token> toks(const std::string& text) {
  return tokenize_sentence(text, lex());
}

std::vector<Token> fused(const std::string& text) {
  return fuse_tokens(toks(text), lex());
}

}  // namespace

TEST_CASE("category parse and print") {
  SECTION("round trips") {
    for (const char* s :
         {"S", "NP", "N", "S\\NP", "(S\\NP)/NP", "(S\\NP)\\(S\\NP)",
          "((S\\NP)\\(S\\NP))/NP", "N_down", "N_nm/N", "NP/(S/NP)", "*"}) {
      CHECK(cat_str(parse_category(s)) == s);
    }
  }
  SECTION("slashes associate left") {
    CHECK(cat_equal(parse_category("S\\NP/NP"), parse_category("(S\\NP)/NP")));
  }
  SECTION("rejects malformed strings") {
    for (const char* s : {"", "(", "(S", "S/", "S//NP", "S)", "N_", "N_1"}) {
      INFO(s);
      CHECK_THROWS_AS(parse_category(s), CategoryParseError);
    }
  }
  SECTION("feature-aware equality") {
    auto plain = parse_category("N");
    auto down = parse_category("N_down");
    CHECK_FALSE(cat_equal(plain, down));
    CHECK(cat_equal_nofeat(plain, down));
    CHECK(cat_equal(cat_bare(down), plain));
  }
  SECTION("pattern matching") {
    CHECK(cat_matches(parse_category("*"), parse_category("(S\\NP)/NP")));
    CHECK(cat_matches(parse_category("N"), parse_category("N_down")));
    CHECK_FALSE(cat_matches(parse_category("N_down"), parse_category("N")));
    CHECK_FALSE(cat_matches(parse_category("S/NP"), parse_category("S\\NP")));
  }
  SECTION("category to semantic type") {
    CHECK(type_str(category_to_type(parse_category("S"))) == "T");
    CHECK(type_str(category_to_type(parse_category("NP"))) == "E");
    CHECK(type_str(category_to_type(parse_category("S\\NP"))) == "E>T");
    CHECK(type_str(category_to_type(parse_category("N"))) == "E>T");
  }
}

TEST_CASE("token fusion") {
  SECTION("spelled quantifier with numeral") {
    auto ts = fused("At least five students laughed .");
    REQUIRE(ts.size() == 3);
    CHECK(ts[0].lemma == "at-least");
    CHECK(ts[0].attrs.num == Rational(5));
    CHECK(ts[0].surface == "At least five");
  }
  SECTION("more than") {
    auto ts = fused("More than ten orders arrived ."); // arrived is OOV but fusion runs first
    REQUIRE(ts.size() >= 2);
    CHECK(ts[0].lemma == "more-than");
    CHECK(ts[0].attrs.num == Rational(10));
  }
  SECTION("bare numeral reads as a lower-bound quantifier") {
    auto ts = fused("APCOM lost ten orders .");
    REQUIRE(ts.size() == 4);
    CHECK(ts[2].attrs.template_key == "q-num");
    CHECK(ts[2].attrs.num == Rational(10));
    REQUIRE(ts[2].fused_category);
    CHECK(cat_str(ts[2].fused_category) == "N/N");
  }
  SECTION("digits work like spelled numerals") {
    auto ts = fused("APCOM lost 10 orders .");
    REQUIRE(ts.size() == 4);
    CHECK(ts[2].attrs.num == Rational(10));
  }
  SECTION("measure phrase") {
    auto ts = fused("Chris is five feet tall .");
    REQUIRE(ts.size() == 3);
    CHECK(ts[2].attrs.num == Rational(5));
    CHECK(ts[2].attrs.unit == "foot");
    CHECK(ts[2].attrs.template_key == "adj-measure");
    REQUIRE(ts[2].fused_category);
    CHECK(cat_str(ts[2].fused_category) == "S\\NP");
  }
  SECTION("bounded measure phrases") {
    auto ts = fused("Chris is at least five feet tall .");
    REQUIRE(ts.size() == 3);
    CHECK(ts[2].attrs.template_key == "adj-measure-min");
    ts = fused("Chris is more than five feet tall .");
    REQUIRE(ts.size() == 3);
    CHECK(ts[2].attrs.template_key == "adj-measure-more");
    ts = fused("Chris is less than five feet tall .");
    REQUIRE(ts.size() == 3);
    CHECK(ts[2].attrs.template_key == "adj-measure-less");
  }
  SECTION("synthetic comparative") {
    auto ts = fused("John is taller than Bob .");
    REQUIRE(ts.size() == 4);
    CHECK(ts[2].attrs.template_key == "adj-cmp");
    CHECK(ts[2].attrs.stem == "tall");
  }
  SECTION("comparative adverb") {
    auto ts = fused("John ran faster than Bob .");
    REQUIRE(ts.size() == 4);
    CHECK(ts[2].attrs.template_key == "adv-cmp");
    CHECK(ts[2].attrs.stem == "fast");
    CHECK(ts[2].pos == Pos::Adverb);
  }
  SECTION("equative") {
    auto ts = fused("John ran as fast as Bob .");
    REQUIRE(ts.size() == 4);
    CHECK(ts[2].attrs.template_key == "adv-eq");
    ts = fused("John is as tall as Bob .");
    REQUIRE(ts.size() == 4);
    CHECK(ts[2].attrs.template_key == "adj-eq");
  }
  SECTION("clausal comparative") {
    auto ts = fused("ITEL won more orders than APCOM lost .");
    bool found = false;
    for (const auto& t : ts) found |= t.attrs.template_key == "q-clausal-more";
    CHECK(found);
  }
  SECTION("negation with do support") {
    auto ts = fused("John did not shout .");
    REQUIRE(ts.size() == 3);
    CHECK(ts[1].lemma == "not");
    CHECK(ts[2].lemma == "shout");
  }
  SECTION("punctuation dropped") {
    auto ts = fused("John shouted .");
    CHECK(ts.size() == 2);
  }
  SECTION("very followed by gradable adverb") {
    auto ts = fused("Ann studied English very hard .");
    REQUIRE(ts.size() == 4);
    CHECK(ts[3].attrs.template_key == "adv-very");
  }
}

TEST_CASE("cky parsing") {
  CkyParser parser(lex());
  SECTION("finds a sentence parse") {
    auto ps = parser.parse(fused("John shouted loudly ."));
    REQUIRE_FALSE(ps.empty());
    CHECK(cat_str(ps[0]->category) == "S");
  }
  SECTION("deterministic order") {
    auto a = parser.parse(fused("Exactly eleven boys play soccer ."));
    auto b = parser.parse(fused("Exactly eleven boys play soccer ."));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      CHECK(tree_str(a[i]) == tree_str(b[i]));
  }
  SECTION("no parse yields empty list") {
    auto ps = parser.parse(fused("shouted laughed ."));
    CHECK(ps.empty());
  }
  SECTION("every parse validates") {
    for (const char* s :
         {"Every student laughed .", "ITEL won more orders than APCOM lost .",
          "Bob drives as carefully as John ."}) {
      for (const auto& p : parser.parse(fused(s))) {
        INFO(s);
        CHECK(validate_tree(p).empty());
      }
    }
  }
}

TEST_CASE("derivation ingestion") {
  const std::string good = R"({
    "category": "S", "rule": "ba", "children": [
      {"category": "NP", "surface": "John", "lemma": "john", "pos": "pn"},
      {"category": "S\\NP", "surface": "shouted", "lemma": "shout", "pos": "verb"}
    ]})";
  SECTION("valid tree round trips") {
    auto t = ingest_derivation_text(good);
    CHECK(validate_tree(t).empty());
    CHECK(cat_str(t->category) == "S");
    CHECK(t->left->lemma == "john");
    // stem defaults to the lemma
    CHECK(t->right->attrs.stem == "shout");
  }
  SECTION("leaf attributes carry through") {
    auto t = ingest_derivation_text(R"({
      "category": "S\\NP", "surface": "five feet tall", "lemma": "tall",
      "pos": "adj", "num": "5", "unit": "foot", "template": "adj-measure"})");
    REQUIRE(t->attrs.num.has_value());
    CHECK(*t->attrs.num == Rational(5));
    CHECK(t->attrs.unit == "foot");
    CHECK(t->attrs.template_key == "adj-measure");
  }
  SECTION("schema violations") {
    CHECK_THROWS_AS(ingest_derivation_text("null"), SchemaError);
    CHECK_THROWS_AS(ingest_derivation_text("{}"), SchemaError);
    CHECK_THROWS_AS(ingest_derivation_text("[1,2]"), SchemaError);
    CHECK_THROWS_AS(ingest_derivation_text("not json"), SchemaError);
    // unknown rule
    CHECK_THROWS_AS(ingest_derivation_text(R"({"category":"S","rule":"xx",
      "children":[{"category":"S","surface":"a","lemma":"a","pos":"pn"}]})"),
                    SchemaError);
    // unknown pos
    CHECK_THROWS_AS(ingest_derivation_text(
                        R"({"category":"NP","surface":"a","lemma":"a","pos":"xyz"})"),
                    SchemaError);
    // three children
    CHECK_THROWS_AS(ingest_derivation_text(R"({"category":"S","rule":"ba","children":[
      {"category":"NP","surface":"a","lemma":"a","pos":"pn"},
      {"category":"NP","surface":"b","lemma":"b","pos":"pn"},
      {"category":"NP","surface":"c","lemma":"c","pos":"pn"}]})"),
                    SchemaError);
    // bad category string
    CHECK_THROWS_AS(ingest_derivation_text(
                        R"({"category":"S//","surface":"a","lemma":"a","pos":"pn"})"),
                    CategoryParseError);
  }
  SECTION("combinator mismatches") {
    // ba claimed but children only fit fa
    CHECK_THROWS_AS(ingest_derivation_text(R"({
      "category": "S", "rule": "fa", "children": [
        {"category": "NP", "surface": "John", "lemma": "john", "pos": "pn"},
        {"category": "S\\NP", "surface": "ran", "lemma": "run", "pos": "verb"}
      ]})"),
                    RuleMismatchError);
    // wrong parent category
    CHECK_THROWS_AS(ingest_derivation_text(R"({
      "category": "NP", "rule": "ba", "children": [
        {"category": "NP", "surface": "John", "lemma": "john", "pos": "pn"},
        {"category": "S\\NP", "surface": "ran", "lemma": "run", "pos": "verb"}
      ]})"),
                    RuleMismatchError);
  }
  SECTION("validate_tree reports bad nodes as data") {
    auto bad = mk_node(CombinatorRule::FwdApp, parse_category("S"),
                       mk_leaf("John", "john", Pos::ProperNoun,
                               parse_category("NP")),
                       mk_leaf("ran", "run", Pos::Verb,
                               parse_category("S\\NP")));
    auto report = validate_tree(bad);
    REQUIRE_FALSE(report.empty());
  }
}

TEST_CASE("monotonicity feature rewrite") {
  CkyParser parser(lex());
  auto first_parse = [&](const std::string& s) {
    auto ps = parser.parse(fused(s));
    REQUIRE_FALSE(ps.empty());
    return ps[0];
  };
  SECTION("downward quantifier is marked") {
    auto t = rewrite_monotonicity_features(
        first_parse("Less than five students laughed ."), lex());
    CHECK(tree_str(t).find("N_down/N") != std::string::npos);
    CHECK(validate_tree(t).empty());
  }
  SECTION("non-monotone quantifier is marked") {
    auto t = rewrite_monotonicity_features(
        first_parse("Exactly eleven boys play soccer ."), lex());
    CHECK(tree_str(t).find("N_nm/N") != std::string::npos);
  }
  SECTION("upward quantifier stays unmarked") {
    auto t = rewrite_monotonicity_features(first_parse("Many people cried ."),
                                           lex());
    CHECK(tree_str(t).find("_down") == std::string::npos);
    CHECK(tree_str(t).find("_nm") == std::string::npos);
  }
  SECTION("idempotent") {
    for (const char* s :
         {"Less than five students laughed .", "Many people cried .",
          "Exactly eleven boys play soccer .", "John shouted loudly ."}) {
      auto once = rewrite_monotonicity_features(first_parse(s), lex());
      auto twice = rewrite_monotonicity_features(once, lex());
      INFO(s);
      CHECK(tree_str(twice) == tree_str(once));
    }
  }
}

TEST_CASE("tokenizer") {
  SECTION("strips surrounding punctuation and lowercases") {
    auto ts = toks("John shouted, loudly!");
    REQUIRE(ts.size() == 3);
    CHECK(ts[0].lemma == "john");
    CHECK(ts[2].lemma == "loudly");
  }
  SECTION("unknown words fall back to noun") {
    auto ts = toks("Zyx shouted .");
    REQUIRE(ts.size() >= 1);
    CHECK(ts[0].pos == Pos::Noun);
  }
}
