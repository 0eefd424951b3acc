#pragma once

#include <memory>
#include <string>

#include "ccgnli/semtype.hpp"
#include "ccgnli/util.hpp"

namespace ccgnli {

enum class CatKind { Atom, Slash };
enum class SlashDir { Fwd, Bwd };

class Category;
using CatPtr = std::shared_ptr<const Category>;

// Atom: name in {S, NP, N, PP} plus an optional monotonicity feature
// ("down" or "nm"; empty otherwise). Slash: result combined with an
// argument to the right (/) or left (\).
class Category {
public:
  CatKind kind{};
  std::string name;
  std::string feature;
  SlashDir dir{};
  CatPtr result, argument;
};

inline CatPtr mk_atom(std::string name, std::string feature = "") {
  auto c = std::make_shared<Category>();
  c->kind = CatKind::Atom;
  c->name = std::move(name);
  c->feature = std::move(feature);
  return c;
}

inline CatPtr mk_slash(SlashDir dir, CatPtr result, CatPtr argument) {
  auto c = std::make_shared<Category>();
  c->kind = CatKind::Slash;
  c->dir = dir;
  c->result = std::move(result);
  c->argument = std::move(argument);
  return c;
}

inline CatPtr mk_fwd(CatPtr result, CatPtr argument) {
  return mk_slash(SlashDir::Fwd, std::move(result), std::move(argument));
}
inline CatPtr mk_bwd(CatPtr result, CatPtr argument) {
  return mk_slash(SlashDir::Bwd, std::move(result), std::move(argument));
}

inline bool cat_equal(const CatPtr& a, const CatPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  if (a->kind == CatKind::Atom)
    return a->name == b->name && a->feature == b->feature;
  return a->dir == b->dir && cat_equal(a->result, b->result) &&
         cat_equal(a->argument, b->argument);
}

inline bool cat_equal_nofeat(const CatPtr& a, const CatPtr& b) {
  if (a.get() == b.get()) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  if (a->kind == CatKind::Atom) return a->name == b->name;
  return a->dir == b->dir && cat_equal_nofeat(a->result, b->result) &&
         cat_equal_nofeat(a->argument, b->argument);
}

inline std::string cat_str(const CatPtr& c) {
  if (!c) return "<null>";
  if (c->kind == CatKind::Atom)
    return c->feature.empty() ? c->name : c->name + "_" + c->feature;
  auto side = [](const CatPtr& x) {
    std::string s = cat_str(x);
    return x->kind == CatKind::Slash ? "(" + s + ")" : s;
  };
  return side(c->result) + (c->dir == SlashDir::Fwd ? "/" : "\\") +
         side(c->argument);
}

// Strips monotonicity features everywhere.
inline CatPtr cat_bare(const CatPtr& c) {
  if (c->kind == CatKind::Atom)
    return c->feature.empty() ? c : mk_atom(c->name);
  CatPtr r = cat_bare(c->result);
  CatPtr a = cat_bare(c->argument);
  if (r == c->result && a == c->argument) return c;
  return mk_slash(c->dir, r, a);
}

// Pattern match for template lookup: '*' matches anything; an atom pattern
// without a feature matches any feature on the target; slashes must agree
// structurally.
inline bool cat_matches(const CatPtr& pattern, const CatPtr& target) {
  if (!pattern || !target) return false;
  if (pattern->kind == CatKind::Atom && pattern->name == "*") return true;
  if (pattern->kind != target->kind) return false;
  if (pattern->kind == CatKind::Atom) {
    if (pattern->name != target->name) return false;
    return pattern->feature.empty() || pattern->feature == target->feature;
  }
  return pattern->dir == target->dir &&
         cat_matches(pattern->result, target->result) &&
         cat_matches(pattern->argument, target->argument);
}

// ---------------------------------------------------------------------------
// Parsing. Slashes associate left: S\NP/NP reads ((S\NP)/NP).

namespace detail {

class CatParser {
public:
  explicit CatParser(std::string_view src) : src_(src) {}

  CatPtr parse() {
    CatPtr c = parse_expr();
    skip_ws();
    if (pos_ != src_.size())
      throw CategoryParseError(std::string(src_), static_cast<long>(pos_));
    return c;
  }

private:
  void skip_ws() {
    while (pos_ < src_.size() &&
           std::isspace(static_cast<unsigned char>(src_[pos_])))
      ++pos_;
  }

  CatPtr parse_expr() {
    CatPtr left = parse_part();
    for (;;) {
      skip_ws();
      if (pos_ >= src_.size()) break;
      char c = src_[pos_];
      if (c != '/' && c != '\\') break;
      ++pos_;
      CatPtr right = parse_part();
      left = mk_slash(c == '/' ? SlashDir::Fwd : SlashDir::Bwd, left, right);
    }
    return left;
  }

  CatPtr parse_part() {
    skip_ws();
    if (pos_ >= src_.size())
      throw CategoryParseError(std::string(src_), static_cast<long>(pos_));
    if (src_[pos_] == '(') {
      ++pos_;
      CatPtr c = parse_expr();
      skip_ws();
      if (pos_ >= src_.size() || src_[pos_] != ')')
        throw CategoryParseError(std::string(src_), static_cast<long>(pos_));
      ++pos_;
      return c;
    }
    size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalpha(static_cast<unsigned char>(src_[pos_])) ||
            src_[pos_] == '*'))
      ++pos_;
    if (pos_ == start)
      throw CategoryParseError(std::string(src_), static_cast<long>(pos_));
    std::string name(src_.substr(start, pos_ - start));
    std::string feature;
    if (pos_ < src_.size() && src_[pos_] == '_') {
      ++pos_;
      size_t fstart = pos_;
      while (pos_ < src_.size() &&
             std::isalpha(static_cast<unsigned char>(src_[pos_])))
        ++pos_;
      if (pos_ == fstart)
        throw CategoryParseError(std::string(src_), static_cast<long>(pos_));
      feature = std::string(src_.substr(fstart, pos_ - fstart));
    }
    return mk_atom(std::move(name), std::move(feature));
  }

  std::string_view src_;
  size_t pos_ = 0;
};

}  // namespace detail

inline CatPtr parse_category(std::string_view src) {
  return detail::CatParser(src).parse();
}

// Homomorphism from categories to semantic types: NP and PP denote
// individuals, N denotes a property, S a truth value; both slashes become
// functions from the argument's type to the result's.
inline TypePtr category_to_type(const CatPtr& c) {
  if (c->kind == CatKind::Atom) {
    if (c->name == "NP" || c->name == "PP") return SemType::entity();
    if (c->name == "N") return SemType::arrow(SemType::entity(), SemType::truth());
    if (c->name == "S") return SemType::truth();
    throw CategoryParseError("no type for atom " + c->name, -1);
  }
  return SemType::arrow(category_to_type(c->argument),
                        category_to_type(c->result));
}

}  // namespace ccgnli
