#pragma once

#include <map>
#include <string>
#include <vector>

#include "ccgnli/category.hpp"
#include "ccgnli/lexicon.hpp"
#include "ccgnli/tagset.hpp"
#include "ccgnli/term_text.hpp"

namespace ccgnli {

// A semantic template: a lambda body keyed by name, guarded by a category
// pattern (wildcards allowed) and an optional lemma pattern. Bodies use the
// term syntax with placeholder constants:
//   %P        the lemma-derived predicate
//   %n, %n1   the leaf's numeral, and numeral + 1
//   %th       threshold constant of the predicate's scale
//   %thN      per-noun threshold, resolved when the noun argument arrives
//   _e        a fresh event variable, registered for sentence closure
//   _ev, _ev2 the event of the modified verb phrase / of its duplicate
//   _dup      duplicate a verb phrase for a second (comparative) event
//   _neg      clause negation, resolved at sentence closure
//   _pack_*   generalized-quantifier packets, resolved at sentence closure
struct Template {
  std::string key;
  CatPtr cat_pattern;
  std::string lemma_pattern;  // "*" matches any lemma
  TermPtr body;
  int priority{};             // file order
};

class TemplateBank {
public:
  // templates.tsv: key TAB category-pattern TAB lemma-pattern-or-* TAB body
  void load(const std::string& path) {
    auto lines = detail::read_data_lines(path);
    for (size_t i = 0; i < lines.size(); ++i) {
      if (detail::skippable(lines[i])) continue;
      auto f = detail::tsv_fields(lines[i]);
      if (f.size() != 4)
        throw ParseError(path + ": expected 4 tab-separated fields",
                         static_cast<long>(i + 1));
      Template t;
      t.key = f[0];
      t.cat_pattern = parse_category(f[1]);
      t.lemma_pattern = f[2];
      try {
        t.body = has_wildcard(t.cat_pattern)
                     ? parse_term(f[3])
                     : parse_term(f[3], category_to_type(t.cat_pattern));
      } catch (const Error& e) {
        throw ParseError(path + ": template '" + t.key + "': " + e.what(),
                         static_cast<long>(i + 1));
      }
      t.priority = static_cast<int>(templates_.size());
      check_body_type(t, path, i + 1);
      if (by_key_.count(t.key))
        throw ParseError(path + ": duplicate template key '" + t.key + "'",
                         static_cast<long>(i + 1));
      by_key_[t.key] = templates_.size();
      templates_.push_back(std::move(t));
    }
  }

  const Template& by_key(const std::string& key) const {
    auto it = by_key_.find(key);
    if (it == by_key_.end()) throw NoTemplateError("<key>", key);
    return templates_[it->second];
  }

  bool has_key(const std::string& key) const { return by_key_.count(key) > 0; }

  // Highest-priority match; a lemma-specific template beats any
  // category-only template, then earlier file order wins.
  const Template& lookup(const CatPtr& category, const std::string& lemma,
                         Pos) const {
    const Template* category_hit = nullptr;
    for (const auto& t : templates_) {
      if (!cat_matches(t.cat_pattern, category)) continue;
      if (t.lemma_pattern == lemma) return t;
      if (t.lemma_pattern == "*" && !category_hit) category_hit = &t;
    }
    if (category_hit) return *category_hit;
    throw NoTemplateError(cat_str(category), lemma);
  }

  size_t size() const { return templates_.size(); }
  const std::vector<Template>& all() const { return templates_; }

private:
  // A wildcard-free pattern fixes the semantic type; the body must have it.
  void check_body_type(const Template& t, const std::string& path,
                       size_t line) const {
    if (has_wildcard(t.cat_pattern)) return;
    TypePtr want = category_to_type(t.cat_pattern);
    TypePtr got = type_of(t.body);
    if (!type_equal(want, got))
      throw ParseError(path + ": template '" + t.key + "' has type " +
                           type_str(got) + " but its category needs " +
                           type_str(want),
                       static_cast<long>(line));
  }

  static bool has_wildcard(const CatPtr& c) {
    if (c->kind == CatKind::Atom) return c->name == "*";
    return has_wildcard(c->result) || has_wildcard(c->argument);
  }

  std::vector<Template> templates_;
  std::map<std::string, size_t> by_key_;
};

}  // namespace ccgnli
