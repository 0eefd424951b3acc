#pragma once

#include <string>

#include "ccgnli/util.hpp"

namespace ccgnli {

enum class Pos {
  Noun, Verb, Adjective, Adverb, Det, Preposition, ProperNoun,
  Copula, Expletive, Conjunction, CompMarker,
};

inline std::string pos_str(Pos p) {
  switch (p) {
    case Pos::Noun: return "noun";
    case Pos::Verb: return "verb";
    case Pos::Adjective: return "adj";
    case Pos::Adverb: return "adv";
    case Pos::Det: return "det";
    case Pos::Preposition: return "prep";
    case Pos::ProperNoun: return "pn";
    case Pos::Copula: return "cop";
    case Pos::Expletive: return "expl";
    case Pos::Conjunction: return "conj";
    case Pos::CompMarker: return "cmp";
  }
  throw Error("unreachable pos");
}

inline Pos parse_pos(const std::string& s) {
  if (s == "noun") return Pos::Noun;
  if (s == "verb") return Pos::Verb;
  if (s == "adj") return Pos::Adjective;
  if (s == "adv") return Pos::Adverb;
  if (s == "det") return Pos::Det;
  if (s == "prep") return Pos::Preposition;
  if (s == "pn") return Pos::ProperNoun;
  if (s == "cop") return Pos::Copula;
  if (s == "expl") return Pos::Expletive;
  if (s == "conj") return Pos::Conjunction;
  if (s == "cmp") return Pos::CompMarker;
  throw SchemaError("unknown part-of-speech tag '" + s + "'");
}

enum class CombinatorRule {
  FwdApp, BwdApp, FwdComp, BwdComp, FwdRaise, BwdRaise, UnaryLex,
};

inline std::string rule_str(CombinatorRule r) {
  switch (r) {
    case CombinatorRule::FwdApp: return "fa";
    case CombinatorRule::BwdApp: return "ba";
    case CombinatorRule::FwdComp: return "fc";
    case CombinatorRule::BwdComp: return "bc";
    case CombinatorRule::FwdRaise: return "fr";
    case CombinatorRule::BwdRaise: return "br";
    case CombinatorRule::UnaryLex: return "lex";
  }
  throw Error("unreachable rule");
}

inline CombinatorRule parse_rule(const std::string& s) {
  if (s == "fa") return CombinatorRule::FwdApp;
  if (s == "ba") return CombinatorRule::BwdApp;
  if (s == "fc") return CombinatorRule::FwdComp;
  if (s == "bc") return CombinatorRule::BwdComp;
  if (s == "fr") return CombinatorRule::FwdRaise;
  if (s == "br") return CombinatorRule::BwdRaise;
  if (s == "lex") return CombinatorRule::UnaryLex;
  throw SchemaError("unknown combinator rule '" + s + "'");
}

}  // namespace ccgnli
