#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ccgnli/category.hpp"
#include "ccgnli/rational.hpp"
#include "ccgnli/tagset.hpp"
#include "ccgnli/util.hpp"

namespace ccgnli {

enum class MonoClass { Up, Down, NonMono };

inline std::string mono_str(MonoClass m) {
  switch (m) {
    case MonoClass::Up: return "up";
    case MonoClass::Down: return "down";
    case MonoClass::NonMono: return "nm";
  }
  throw Error("unreachable monotonicity class");
}

struct LexEntry {
  CatPtr category;
  std::string template_key;
};

namespace detail {

inline std::vector<std::string> read_data_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

inline std::vector<std::string> tsv_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == '\t') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline bool skippable(const std::string& line) {
  std::string t = trim(line);
  return t.empty() || t[0] == '#';
}

}  // namespace detail

// Spelled-out numerals: zero through twenty plus the tens up to one hundred.
inline std::optional<long long> numeral_word(const std::string& w) {
  static const std::map<std::string, long long> table = {
      {"zero", 0},     {"one", 1},       {"two", 2},      {"three", 3},
      {"four", 4},     {"five", 5},      {"six", 6},      {"seven", 7},
      {"eight", 8},    {"nine", 9},      {"ten", 10},     {"eleven", 11},
      {"twelve", 12},  {"thirteen", 13}, {"fourteen", 14},{"fifteen", 15},
      {"sixteen", 16}, {"seventeen", 17},{"eighteen", 18},{"nineteen", 19},
      {"twenty", 20},  {"thirty", 30},   {"forty", 40},   {"fifty", 50},
      {"sixty", 60},   {"seventy", 70},  {"eighty", 80},  {"ninety", 90},
      {"hundred", 100},
  };
  auto it = table.find(lowercase(w));
  if (it == table.end()) return std::nullopt;
  return it->second;
}

// Numeral token: a spelled-out numeral word or a digit string.
inline std::optional<Rational> numeral_token(const std::string& w) {
  if (auto v = numeral_word(w)) return Rational(*v);
  if (!w.empty() &&
      w.find_first_not_of("0123456789") == std::string::npos)
    return Rational::parse(w);
  return std::nullopt;
}

class Lexicon {
public:
  // lexicon.tsv: lemma TAB pos TAB category TAB template-key
  void load_lexicon(const std::string& path) {
    auto lines = detail::read_data_lines(path);
    for (size_t i = 0; i < lines.size(); ++i) {
      if (detail::skippable(lines[i])) continue;
      auto f = detail::tsv_fields(lines[i]);
      if (f.size() != 4)
        throw ParseError(path + ": expected 4 tab-separated fields",
                         static_cast<long>(i + 1));
      entries_[{f[0], parse_pos(f[1])}].push_back(
          {parse_category(f[2]), f[3]});
    }
  }

  // quantifiers.tsv: lemma TAB up|down|nm
  void load_quantifiers(const std::string& path) {
    auto lines = detail::read_data_lines(path);
    for (size_t i = 0; i < lines.size(); ++i) {
      if (detail::skippable(lines[i])) continue;
      auto f = detail::tsv_fields(lines[i]);
      if (f.size() != 2)
        throw ParseError(path + ": expected 2 tab-separated fields",
                         static_cast<long>(i + 1));
      MonoClass m;
      if (f[1] == "up") m = MonoClass::Up;
      else if (f[1] == "down") m = MonoClass::Down;
      else if (f[1] == "nm") m = MonoClass::NonMono;
      else
        throw ParseError(path + ": unknown class '" + f[1] + "'",
                         static_cast<long>(i + 1));
      quant_class_[f[0]] = m;
    }
  }

  // stems.tsv: word TAB stem  (comparative forms, -ly adverbs, plural
  // nouns used in threshold names)
  void load_stems(const std::string& path) {
    auto lines = detail::read_data_lines(path);
    for (size_t i = 0; i < lines.size(); ++i) {
      if (detail::skippable(lines[i])) continue;
      auto f = detail::tsv_fields(lines[i]);
      if (f.size() != 2)
        throw ParseError(path + ": expected 2 tab-separated fields",
                         static_cast<long>(i + 1));
      stems_[f[0]] = f[1];
    }
  }

  // surfaces.tsv: surface TAB lemma TAB pos  (for tokenizing raw text)
  void load_surfaces(const std::string& path) {
    auto lines = detail::read_data_lines(path);
    for (size_t i = 0; i < lines.size(); ++i) {
      if (detail::skippable(lines[i])) continue;
      auto f = detail::tsv_fields(lines[i]);
      if (f.size() != 3)
        throw ParseError(path + ": expected 3 tab-separated fields",
                         static_cast<long>(i + 1));
      surfaces_[f[0]] = {f[1], parse_pos(f[2])};
    }
  }

  void load_dir(const std::string& dir) {
    load_lexicon(dir + "/lexicon.tsv");
    load_quantifiers(dir + "/quantifiers.tsv");
    load_stems(dir + "/stems.tsv");
    load_surfaces(dir + "/surfaces.tsv");
  }

  const std::vector<LexEntry>* lookup(const std::string& lemma,
                                      Pos pos) const {
    auto it = entries_.find({lemma, pos});
    if (it == entries_.end()) return nullptr;
    return &it->second;
  }

  std::optional<MonoClass> quant_class(const std::string& lemma) const {
    auto it = quant_class_.find(lemma);
    if (it == quant_class_.end()) return std::nullopt;
    return it->second;
  }

  const std::map<std::string, MonoClass>& quant_classes() const {
    return quant_class_;
  }

  // Maps a word to its stem; identity when no entry exists.
  std::string stem(const std::string& word) const {
    auto it = stems_.find(word);
    if (it == stems_.end()) it = stems_.find(lowercase(word));
    if (it == stems_.end()) return word;
    return it->second;
  }

  bool has_stem_entry(const std::string& word) const {
    return stems_.count(word) > 0 || stems_.count(lowercase(word)) > 0;
  }

  std::optional<std::pair<std::string, Pos>> surface_info(
      const std::string& surface) const {
    auto it = surfaces_.find(surface);
    if (it == surfaces_.end()) it = surfaces_.find(lowercase(surface));
    if (it == surfaces_.end()) return std::nullopt;
    return it->second;
  }

  size_t entry_count() const { return entries_.size(); }

private:
  std::map<std::pair<std::string, Pos>, std::vector<LexEntry>> entries_;
  std::map<std::string, MonoClass> quant_class_;
  std::map<std::string, std::string> stems_;
  std::map<std::string, std::pair<std::string, Pos>> surfaces_;
};

}  // namespace ccgnli
