#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccgnli/derivation.hpp"
#include "ccgnli/fuse.hpp"
#include "ccgnli/lexicon.hpp"
#include "ccgnli/prover.hpp"

namespace ccgnli {

// Dataset loading. The bundled corpus is line-delimited JSON records; a
// FraCaS-style XML reader covers the subset of that format the sample file
// uses (problem elements with p/h children and an answer attribute).

class UnknownLabelError : public Error {
public:
  UnknownLabelError(const std::string& id, const std::string& label)
      : Error("problem " + id + ": unknown gold label '" + label + "'") {}
};

// One input sentence: explicit tokens, a pre-built derivation document, or
// raw text to be tokenized against the surface table.
struct Sentence {
  std::vector<Token> tokens;
  nlohmann::json derivation;
  std::string text;

  bool has_derivation() const {
    return !derivation.is_null() && !derivation.empty();
  }
};

struct Problem {
  std::string id;
  std::vector<Sentence> premises;
  Sentence hypothesis;
  Verdict gold{Verdict::Unknown};
  std::set<std::string> tags;
  std::string note;
};

enum class CorpusFormat { BundledJsonl, FracasXml };

inline CorpusFormat parse_corpus_format(const std::string& s) {
  if (s == "bundled-jsonl") return CorpusFormat::BundledJsonl;
  if (s == "fracas-xml") return CorpusFormat::FracasXml;
  throw ParseError("unknown corpus format '" + s + "'");
}

inline const std::set<std::string>& tag_vocabulary() {
  static const std::set<std::string> tags = {
      "adverb-drop",
      "adverb-comparative",
      "adverb-equative",
      "adjective-comparative",
      "numeric",
      "upward",
      "downward",
      "non-monotone",
      "clausal-comparative",
      "lexical",
      "lexical-hypernym",
      "lexical-antonym",
      "lexical-synonym",
      "disjunction-constituent",
      "negation",
      "equative",
      "measure",
      "copula",
      "limitation",
  };
  return tags;
}

// Whitespace tokenization with surrounding punctuation stripped; word
// identity comes from the surface table, digits pass through as numerals,
// and unknown words keep a noun guess so the parser diagnoses them rather
// than the loader.
inline std::vector<Token> tokenize_sentence(const std::string& raw,
                                            const Lexicon& lex) {
  std::vector<Token> out;
  std::istringstream in(raw);
  std::string word;
  while (in >> word) {
    size_t b = word.find_first_not_of(".,!?;:()\"");
    if (b == std::string::npos) continue;
    size_t e = word.find_last_not_of(".,!?;:()\"");
    word = word.substr(b, e - b + 1);
    Token tk;
    tk.surface = word;
    if (auto info = lex.surface_info(word)) {
      tk.lemma = info->first;
      tk.pos = info->second;
    } else if (numeral_token(word)) {
      tk.lemma = lowercase(word);
      tk.pos = Pos::Det;
    } else {
      tk.lemma = lowercase(word);
      tk.pos = Pos::Noun;
    }
    out.push_back(std::move(tk));
  }
  return out;
}

namespace detail {

inline Sentence sentence_from_json(const nlohmann::json& j,
                                   const std::string& id, const Lexicon& lex) {
  if (!j.is_object()) throw FormatError(id, "sentence must be an object");
  int forms = static_cast<int>(j.contains("tokens")) +
              static_cast<int>(j.contains("derivation")) +
              static_cast<int>(j.contains("text"));
  if (forms != 1)
    throw FormatError(id,
                      "sentence needs exactly one of tokens, derivation, "
                      "text");
  Sentence s;
  if (j.contains("derivation")) {
    s.derivation = j.at("derivation");
    return s;
  }
  if (j.contains("text")) {
    if (!j.at("text").is_string())
      throw FormatError(id, "text must be a string");
    s.text = j.at("text").get<std::string>();
    s.tokens = tokenize_sentence(s.text, lex);
    return s;
  }
  const auto& arr = j.at("tokens");
  if (!arr.is_array() || arr.empty())
    throw FormatError(id, "tokens must be a non-empty array");
  for (const auto& t : arr) {
    if (!t.is_object()) throw FormatError(id, "token must be an object");
    for (const char* field : {"surface", "lemma", "pos"})
      if (!t.contains(field) || !t.at(field).is_string())
        throw FormatError(id, std::string("token lacks string field '") +
                                  field + "'");
    ccgnli::Token tk;
    tk.surface = t.at("surface").get<std::string>();
    tk.lemma = t.at("lemma").get<std::string>();
    try {
      tk.pos = parse_pos(t.at("pos").get<std::string>());
    } catch (const Error& e) {
      throw FormatError(id, e.what());
    }
    s.tokens.push_back(std::move(tk));
  }
  return s;
}

inline void validate_problem(const Problem& p) {
  if (p.id.empty()) throw FormatError("?", "missing id");
  if (p.premises.empty()) throw FormatError(p.id, "needs at least 1 premise");
  for (const auto& tag : p.tags)
    if (!tag_vocabulary().count(tag))
      throw FormatError(p.id, "unknown tag '" + tag + "'");
}

inline std::vector<Problem> load_jsonl(const std::string& path,
                                       const Lexicon& lex) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<Problem> out;
  std::set<std::string> ids;
  std::string line;
  long lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path + ": bad JSON record: " + e.what(), lineno);
    }
    if (!j.is_object() || !j.contains("id") || !j.at("id").is_string())
      throw ParseError(path + ": record lacks string id", lineno);
    Problem p;
    p.id = j.at("id").get<std::string>();
    if (!ids.insert(p.id).second)
      throw FormatError(p.id, "duplicate problem id");
    if (!j.contains("premises") || !j.at("premises").is_array())
      throw FormatError(p.id, "premises must be an array");
    for (const auto& s : j.at("premises"))
      p.premises.push_back(sentence_from_json(s, p.id, lex));
    if (!j.contains("hypothesis"))
      throw FormatError(p.id, "missing hypothesis");
    p.hypothesis = sentence_from_json(j.at("hypothesis"), p.id, lex);
    if (!j.contains("gold") || !j.at("gold").is_string())
      throw FormatError(p.id, "missing gold label");
    std::string gold = j.at("gold").get<std::string>();
    try {
      p.gold = parse_verdict(gold);
    } catch (const Error&) {
      throw UnknownLabelError(p.id, gold);
    }
    if (j.contains("tags")) {
      if (!j.at("tags").is_array())
        throw FormatError(p.id, "tags must be an array");
      for (const auto& t : j.at("tags")) {
        if (!t.is_string()) throw FormatError(p.id, "tags must be strings");
        p.tags.insert(t.get<std::string>());
      }
    }
    if (j.contains("note") && j.at("note").is_string())
      p.note = j.at("note").get<std::string>();
    validate_problem(p);
    out.push_back(std::move(p));
  }
  return out;
}

// Minimal XML scanning for the FraCaS layout: attribute quoting, comments,
// processing instructions, and the five standard entities.
struct XmlScanner {
  const std::string& s;
  size_t i = 0;

  explicit XmlScanner(const std::string& text) : s(text) {}

  static std::string unescape(const std::string& t) {
    std::string out;
    for (size_t k = 0; k < t.size(); ++k) {
      if (t[k] != '&') {
        out += t[k];
        continue;
      }
      size_t semi = t.find(';', k);
      std::string ent =
          semi == std::string::npos ? "" : t.substr(k + 1, semi - k - 1);
      if (ent == "amp") out += '&';
      else if (ent == "lt") out += '<';
      else if (ent == "gt") out += '>';
      else if (ent == "apos") out += '\'';
      else if (ent == "quot") out += '"';
      else {
        out += t[k];
        continue;
      }
      k = semi;
    }
    return out;
  }

  // Advances to the next element tag, skipping comments, doctype, and
  // processing instructions. Returns false at end of input.
  bool next_tag(std::string& name, std::map<std::string, std::string>& attrs,
                bool& closing) {
    while (true) {
      size_t lt = s.find('<', i);
      if (lt == std::string::npos) return false;
      if (s.compare(lt, 4, "<!--") == 0) {
        size_t end = s.find("-->", lt);
        if (end == std::string::npos) throw ParseError("unclosed comment");
        i = end + 3;
        continue;
      }
      if (s.compare(lt, 2, "<?") == 0 || s.compare(lt, 2, "<!") == 0) {
        i = s.find('>', lt);
        if (i == std::string::npos) throw ParseError("unclosed declaration");
        ++i;
        continue;
      }
      size_t gt = s.find('>', lt);
      if (gt == std::string::npos) throw ParseError("unclosed tag");
      std::string inner = s.substr(lt + 1, gt - lt - 1);
      i = gt + 1;
      closing = !inner.empty() && inner[0] == '/';
      if (closing) inner = inner.substr(1);
      if (!inner.empty() && inner.back() == '/') inner.pop_back();
      std::istringstream ts(inner);
      ts >> name;
      attrs.clear();
      std::string rest;
      std::getline(ts, rest);
      size_t k = 0;
      while (k < rest.size()) {
        size_t eq = rest.find('=', k);
        if (eq == std::string::npos) break;
        std::string key = trim(rest.substr(k, eq - k));
        size_t q1 = rest.find_first_of("\"'", eq);
        if (q1 == std::string::npos) throw ParseError("unquoted attribute");
        size_t q2 = rest.find(rest[q1], q1 + 1);
        if (q2 == std::string::npos) throw ParseError("unclosed attribute");
        attrs[key] = unescape(rest.substr(q1 + 1, q2 - q1 - 1));
        k = q2 + 1;
      }
      return true;
    }
  }

  // Text up to the next '<'.
  std::string text_until_tag() {
    size_t lt = s.find('<', i);
    if (lt == std::string::npos) lt = s.size();
    std::string t = s.substr(i, lt - i);
    i = lt;
    return unescape(t);
  }
};

inline std::vector<Problem> load_fracas(const std::string& path,
                                        const Lexicon& lex,
                                        std::vector<std::string>* warnings) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  std::string text = buf.str();

  XmlScanner xs(text);
  std::vector<Problem> out;
  std::string name;
  std::map<std::string, std::string> attrs;
  bool closing = false;
  while (xs.next_tag(name, attrs, closing)) {
    if (closing || name != "problem") continue;
    Problem p;
    auto it = attrs.find("id");
    p.id = it == attrs.end() ? "fracas-?" : "fracas-" + it->second;
    std::string answer = attrs.count("fracas_answer")
                             ? attrs.at("fracas_answer")
                             : "";
    while (xs.next_tag(name, attrs, closing)) {
      if (closing && name == "problem") break;
      if (closing) continue;
      if (name == "p" || name == "h" || name == "a" || name == "q" ||
          name == "why") {
        std::string body = trim(xs.text_until_tag());
        std::string open = name;
        std::map<std::string, std::string> a2;
        if (!xs.next_tag(name, a2, closing) || !closing || name != open)
          throw ParseError(path + ": malformed <" + open + "> element");
        if (open == "p") {
          Sentence s;
          s.text = body;
          s.tokens = tokenize_sentence(body, lex);
          p.premises.push_back(std::move(s));
        } else if (open == "h") {
          p.hypothesis.text = body;
          p.hypothesis.tokens = tokenize_sentence(body, lex);
        } else if (open == "a" && answer.empty()) {
          answer = lowercase(body);
        }
      }
    }
    if (answer == "yes") {
      p.gold = Verdict::Yes;
    } else if (answer == "no") {
      p.gold = Verdict::No;
    } else if (answer == "unknown") {
      p.gold = Verdict::Unknown;
    } else {
      if (warnings)
        warnings->push_back("skipping " + p.id + ": gold label '" + answer +
                            "'");
      continue;
    }
    validate_problem(p);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace detail

inline std::vector<Problem> load_problems(
    const std::string& path, CorpusFormat format, const Lexicon& lex,
    std::vector<std::string>* warnings = nullptr) {
  if (format == CorpusFormat::BundledJsonl)
    return detail::load_jsonl(path, lex);
  return detail::load_fracas(path, lex, warnings);
}

}  // namespace ccgnli
