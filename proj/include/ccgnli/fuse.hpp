#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ccgnli/derivation.hpp"
#include "ccgnli/lexicon.hpp"

namespace ccgnli {

// Rewrites the raw token stream before parsing: multiword quantifiers and
// degree constructions become single tokens, spelled numerals are resolved,
// do-support negation collapses onto "not", and sentence-final elliptical
// "does" is dropped. Quantifier fusions keep their lexicon category (so the
// monotonicity rewriting pass can still classify them); degree fusions carry
// their category and template directly.

namespace detail {

inline bool punct_only(const std::string& s) {
  return !s.empty() && s.find_first_not_of(".,!?;:'\"") == std::string::npos;
}

inline const std::set<std::string>& measure_units() {
  static const std::set<std::string> units = {
      "foot", "inch", "meter", "centimeter", "mile", "pound", "kilogram"};
  return units;
}

inline bool is_unit(const ccgnli::Token& t) {
  return t.pos == Pos::Noun && measure_units().count(t.lemma) > 0;
}

inline bool is_gradable_word(const ccgnli::Token& t) {
  return t.pos == Pos::Adverb || t.pos == Pos::Adjective;
}

inline std::optional<Rational> token_number(const ccgnli::Token& t) {
  if (t.attrs.num) return t.attrs.num;
  if (auto v = numeral_token(t.lemma)) return v;
  return numeral_token(t.surface);
}

inline std::string joined_surface(const std::vector<ccgnli::Token>& ts, size_t from,
                                  size_t n) {
  std::string s;
  for (size_t i = from; i < from + n; ++i) {
    if (!s.empty()) s += " ";
    s += ts[i].surface;
  }
  return s;
}

inline ccgnli::Token quantifier_token(const std::vector<ccgnli::Token>& ts, size_t from,
                              size_t n, std::string lemma, Rational num) {
  ccgnli::Token t;
  t.surface = joined_surface(ts, from, n);
  t.lemma = std::move(lemma);
  t.pos = Pos::Det;
  t.attrs.stem = t.lemma;
  t.attrs.num = num;
  return t;
}

inline ccgnli::Token degree_token(const std::vector<ccgnli::Token>& ts, size_t from, size_t n,
                          std::string stem, Pos pos, const char* category,
                          std::string template_key) {
  ccgnli::Token t;
  t.surface = joined_surface(ts, from, n);
  t.lemma = stem;
  t.pos = pos;
  t.attrs.stem = std::move(stem);
  t.attrs.template_key = std::move(template_key);
  t.fused_category = parse_category(category);
  return t;
}

}  // namespace detail

inline std::vector<Token> fuse_tokens(const std::vector<Token>& input,
                                      const Lexicon& lex) {
  using detail::token_number;
  std::vector<Token> ts;
  for (const auto& t : input)
    if (!detail::punct_only(t.surface)) ts.push_back(t);

  // "... as Luis does" — elliptical do-support at the end of the sentence.
  if (ts.size() >= 2 && ts.back().lemma == "do" && ts.back().pos == Pos::Verb)
    ts.pop_back();

  std::vector<Token> out;
  size_t i = 0;
  auto have = [&](size_t k) { return i + k < ts.size(); };

  while (i < ts.size()) {
    const Token& t0 = ts[i];

    // at least/most NUM [UNIT ADJ]
    if (t0.lemma == "at" && have(2) &&
        (ts[i + 1].lemma == "least" || ts[i + 1].lemma == "most")) {
      if (auto n = token_number(ts[i + 2])) {
        bool least = ts[i + 1].lemma == "least";
        if (least && have(4) && detail::is_unit(ts[i + 3]) &&
            ts[i + 4].pos == Pos::Adjective) {
          Token f = detail::degree_token(ts, i, 5, lex.stem(ts[i + 4].lemma),
                                         Pos::Adjective, "S\\NP",
                                         "adj-measure-min");
          f.attrs.num = n;
          f.attrs.unit = ts[i + 3].lemma;
          out.push_back(f);
          i += 5;
          continue;
        }
        out.push_back(detail::quantifier_token(
            ts, i, 3, least ? "at-least" : "at-most", *n));
        i += 3;
        continue;
      }
    }

    // less/more than NUM [UNIT ADJ] ; more N than ; more ADV/ADJ than
    if ((t0.lemma == "less" || t0.lemma == "more") && have(1)) {
      if (ts[i + 1].lemma == "than" && have(2)) {
        if (auto n = token_number(ts[i + 2])) {
          if (have(4) && detail::is_unit(ts[i + 3]) &&
              ts[i + 4].pos == Pos::Adjective) {
            Token f = detail::degree_token(
                ts, i, 5, lex.stem(ts[i + 4].lemma), Pos::Adjective, "S\\NP",
                t0.lemma == "more" ? "adj-measure-more" : "adj-measure-less");
            f.attrs.num = n;
            f.attrs.unit = ts[i + 3].lemma;
            out.push_back(f);
            i += 5;
            continue;
          }
          out.push_back(detail::quantifier_token(
              ts, i, 3, t0.lemma == "less" ? "less-than" : "more-than", *n));
          i += 3;
          continue;
        }
      }
      if (t0.lemma == "more" && have(2) && ts[i + 1].pos == Pos::Noun &&
          ts[i + 2].lemma == "than") {
        Token f;
        f.surface = detail::joined_surface(ts, i, 3);
        f.lemma = "more-clausal";
        f.pos = Pos::Det;
        f.attrs.stem = f.lemma;
        f.attrs.noun_stem = ts[i + 1].lemma;
        f.attrs.template_key = "q-clausal-more";
        f.fused_category = parse_category("NP/(S/NP)");
        out.push_back(f);
        i += 3;
        continue;
      }
      if (t0.lemma == "more" && have(2) &&
          detail::is_gradable_word(ts[i + 1]) && ts[i + 2].lemma == "than") {
        bool adverbial = ts[i + 1].pos == Pos::Adverb;
        out.push_back(detail::degree_token(
            ts, i, 3, lex.stem(ts[i + 1].lemma), ts[i + 1].pos,
            adverbial ? "((S\\NP)\\(S\\NP))/NP" : "(S\\NP)/NP",
            adverbial ? "adv-cmp" : "adj-cmp"));
        i += 3;
        continue;
      }
    }

    // exactly/only NUM
    if ((t0.lemma == "exactly" || t0.lemma == "only") && have(1)) {
      if (auto n = token_number(ts[i + 1])) {
        out.push_back(detail::quantifier_token(ts, i, 2, t0.lemma, *n));
        i += 2;
        continue;
      }
    }

    // very ADV/ADJ
    if (t0.lemma == "very" && have(1) && detail::is_gradable_word(ts[i + 1])) {
      bool adverbial = ts[i + 1].pos == Pos::Adverb;
      out.push_back(detail::degree_token(
          ts, i, 2, lex.stem(ts[i + 1].lemma), ts[i + 1].pos,
          adverbial ? "(S\\NP)\\(S\\NP)" : "S\\NP",
          adverbial ? "adv-very" : "adj-very"));
      i += 2;
      continue;
    }

    // as ADV/ADJ as
    if (t0.lemma == "as" && have(2) && detail::is_gradable_word(ts[i + 1]) &&
        ts[i + 2].lemma == "as") {
      bool adverbial = ts[i + 1].pos == Pos::Adverb;
      out.push_back(detail::degree_token(
          ts, i, 3, lex.stem(ts[i + 1].lemma), ts[i + 1].pos,
          adverbial ? "((S\\NP)\\(S\\NP))/NP" : "(S\\NP)/NP",
          adverbial ? "adv-eq" : "adj-eq"));
      i += 3;
      continue;
    }

    // synthetic comparative + than: "better than", "taller than"
    if (detail::is_gradable_word(t0) && have(1) && ts[i + 1].lemma == "than" &&
        lex.has_stem_entry(t0.lemma)) {
      bool adverbial = t0.pos == Pos::Adverb;
      out.push_back(detail::degree_token(
          ts, i, 2, lex.stem(t0.lemma), t0.pos,
          adverbial ? "((S\\NP)\\(S\\NP))/NP" : "(S\\NP)/NP",
          adverbial ? "adv-cmp" : "adj-cmp"));
      i += 2;
      continue;
    }

    // NUM UNIT ADJ measure: "5 feet tall"
    if (token_number(t0) && have(2) && detail::is_unit(ts[i + 1]) &&
        ts[i + 2].pos == Pos::Adjective) {
      Token f = detail::degree_token(ts, i, 3, lex.stem(ts[i + 2].lemma),
                                     Pos::Adjective, "S\\NP", "adj-measure");
      f.attrs.num = token_number(t0);
      f.attrs.unit = ts[i + 1].lemma;
      out.push_back(f);
      i += 3;
      continue;
    }

    // bare numeral determiner: "ten orders" reads as at-least-ten
    if (token_number(t0) && have(1) && ts[i + 1].pos == Pos::Noun &&
        !detail::is_unit(ts[i + 1])) {
      Token f = t0;
      f.attrs.num = token_number(t0);
      f.attrs.stem = t0.lemma;
      f.attrs.template_key = "q-num";
      f.fused_category = parse_category("N/N");
      out.push_back(f);
      ++i;
      continue;
    }

    // do-support negation: "did not", "does not", "do not"
    if (t0.lemma == "do" && t0.pos == Pos::Verb && have(1) &&
        ts[i + 1].lemma == "not") {
      Token f;
      f.surface = detail::joined_surface(ts, i, 2);
      f.lemma = "not";
      f.pos = Pos::Adverb;
      f.attrs.stem = "not";
      out.push_back(f);
      i += 2;
      continue;
    }

    out.push_back(t0);
    ++i;
  }
  return out;
}

}  // namespace ccgnli
