#pragma once

// Logical-form comparison helpers for golden tests: alpha equivalence and
// equality up to reordering of top-level conjuncts.

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include <ccgnli/term.hpp>
#include <ccgnli/term_text.hpp>

namespace testsupport {

inline bool alpha_eq(const ccgnli::TermPtr& a, const ccgnli::TermPtr& b,
                     std::map<std::string, std::string>& ab,
                     std::map<std::string, std::string>& ba) {
  using ccgnli::TermKind;
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  if (!ccgnli::type_equal(a->type, b->type)) return false;
  switch (a->kind) {
    case TermKind::Var: {
      auto f = ab.find(a->name);
      auto g = ba.find(b->name);
      if (f == ab.end() && g == ba.end()) return a->name == b->name;
      return f != ab.end() && g != ba.end() && f->second == b->name &&
             g->second == a->name;
    }
    case TermKind::Const:
      return a->name == b->name && a->unit == b->unit;
    case TermKind::Num:
      return a->value == b->value && a->unit == b->unit;
    case TermKind::Abs:
    case TermKind::Exists:
    case TermKind::Forall: {
      auto ab2 = ab;
      auto ba2 = ba;
      ab2[a->name] = b->name;
      ba2[b->name] = a->name;
      return alpha_eq(a->a, b->a, ab2, ba2);
    }
    case TermKind::Not:
      return alpha_eq(a->a, b->a, ab, ba);
    default:
      return alpha_eq(a->a, b->a, ab, ba) && alpha_eq(a->b, b->b, ab, ba);
  }
}

inline bool alpha_eq(const ccgnli::TermPtr& a, const ccgnli::TermPtr& b) {
  std::map<std::string, std::string> ab, ba;
  return alpha_eq(a, b, ab, ba);
}

inline void conjuncts_of(const ccgnli::TermPtr& t,
                         std::vector<ccgnli::TermPtr>& out) {
  if (t && t->kind == ccgnli::TermKind::And) {
    conjuncts_of(t->a, out);
    conjuncts_of(t->b, out);
  } else {
    out.push_back(t);
  }
}

// Equal up to alpha renaming and permutation of top-level conjuncts.
inline bool same_logical_form(const ccgnli::TermPtr& a,
                              const ccgnli::TermPtr& b) {
  if (alpha_eq(a, b)) return true;
  std::vector<ccgnli::TermPtr> ca, cb;
  conjuncts_of(a, ca);
  conjuncts_of(b, cb);
  if (ca.size() != cb.size()) return false;
  std::vector<bool> used(cb.size(), false);
  for (const auto& x : ca) {
    bool found = false;
    for (std::size_t j = 0; j < cb.size(); ++j) {
      if (!used[j] && alpha_eq(x, cb[j])) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

inline bool same_logical_form(const ccgnli::Formula& got,
                              const std::string& expected) {
  ccgnli::Formula want = ccgnli::parse_formula(expected);
  return same_logical_form(got.term(), want.term());
}

}  // namespace testsupport
