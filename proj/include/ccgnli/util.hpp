#pragma once

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ccgnli {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class TypeError : public Error {
public:
  TypeError(const std::string& where, const std::string& expected,
            const std::string& actual)
      : Error("type mismatch at `" + where + "`: expected " + expected +
              ", got " + actual),
        subterm(where), expected(expected), actual(actual) {}
  std::string subterm, expected, actual;
};

class UnboundVariableError : public Error {
public:
  explicit UnboundVariableError(const std::string& name)
      : Error("unbound variable: " + name), name(name) {}
  std::string name;
};

class ParseError : public Error {
public:
  ParseError(const std::string& what, int position = -1)
      : Error(position >= 0 ? what + " (at " + std::to_string(position) + ")"
                            : what),
        position(position) {}
  int position;
};

class SchemaError : public Error {
public:
  explicit SchemaError(const std::string& what) : Error("schema: " + what) {}
};

class CategoryParseError : public Error {
public:
  CategoryParseError(const std::string& input, int position)
      : Error("bad category `" + input + "` at " + std::to_string(position)),
        position(position) {}
  int position;
};

class RuleMismatchError : public Error {
public:
  RuleMismatchError(int node_id, const std::string& what)
      : Error("rule mismatch at node " + std::to_string(node_id) + ": " + what),
        node_id(node_id) {}
  int node_id;
};

class OutOfVocabularyError : public Error {
public:
  explicit OutOfVocabularyError(const std::string& token)
      : Error("out of vocabulary: " + token), token(token) {}
  std::string token;
};

class NoTemplateError : public Error {
public:
  NoTemplateError(const std::string& category, const std::string& lemma)
      : Error("no template for category " + category + ", lemma " + lemma) {}
};

class CompositionError : public Error {
public:
  explicit CompositionError(const std::string& what)
      : Error("composition: " + what) {}
};

class UnitMismatchError : public Error {
public:
  explicit UnitMismatchError(const std::string& what)
      : Error("unit mismatch: " + what) {}
};

class FormatError : public Error {
public:
  FormatError(const std::string& id, const std::string& what)
      : Error("problem " + id + ": " + what) {}
};

inline std::string trim(std::string_view s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  size_t start = 0;
  while (true) {
    size_t p = s.find(sep, start);
    if (p == std::string_view::npos) {
      out.emplace_back(s.substr(start));
      break;
    }
    out.emplace_back(s.substr(start, p - start));
    start = p + 1;
  }
  return out;
}

inline std::string join(const std::vector<std::string>& parts,
                        const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline std::string lowercase(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Identifier-safe form of a lemma ("less-than" -> "less_than").
inline std::string sanitize_ident(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') c = '_';
  if (!s.empty() && std::isdigit(static_cast<unsigned char>(s[0])))
    s = "n" + s;
  return s;
}

}  // namespace ccgnli
