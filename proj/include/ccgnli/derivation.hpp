#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ccgnli/category.hpp"
#include "ccgnli/rational.hpp"
#include "ccgnli/tagset.hpp"
#include "ccgnli/util.hpp"

namespace ccgnli {

// Extra payload a leaf can carry after multiword fusion: the predicate stem,
// a numeral, a measure unit, the inner noun of a clausal comparative, and a
// direct template key that bypasses lexicon lookup.
struct LeafAttrs {
  std::string stem;
  std::optional<Rational> num;
  std::string unit;
  std::string noun_stem;
  std::string template_key;

  bool operator==(const LeafAttrs&) const = default;
};

// One input token: surface word(s), lemma, POS. `fused_category` is set when
// the fusion pass fixed the category itself (degree constructions).
struct Token {
  std::string surface;
  std::string lemma;
  Pos pos{};
  LeafAttrs attrs;
  CatPtr fused_category;
};

struct DerivTree;
using TreePtr = std::shared_ptr<const DerivTree>;

struct DerivTree {
  bool is_leaf{};
  CatPtr category;

  // leaf
  std::string surface;
  std::string lemma;
  Pos pos{};
  LeafAttrs attrs;

  // node (right is null for unary rules)
  CombinatorRule rule{};
  TreePtr left, right;
};

inline TreePtr mk_leaf(std::string surface, std::string lemma, Pos pos,
                       CatPtr category, LeafAttrs attrs = {}) {
  auto t = std::make_shared<DerivTree>();
  t->is_leaf = true;
  t->surface = std::move(surface);
  t->lemma = std::move(lemma);
  t->pos = pos;
  t->category = std::move(category);
  t->attrs = std::move(attrs);
  if (t->attrs.stem.empty()) t->attrs.stem = t->lemma;
  return t;
}

inline TreePtr mk_node(CombinatorRule rule, CatPtr category, TreePtr left,
                       TreePtr right = nullptr) {
  auto t = std::make_shared<DerivTree>();
  t->is_leaf = false;
  t->rule = rule;
  t->category = std::move(category);
  t->left = std::move(left);
  t->right = std::move(right);
  return t;
}

// ---------------------------------------------------------------------------
// Validation: checks that every internal node's category follows from its
// children by the stated combinator. Violations are returned as data, one
// line per bad node, numbered in preorder.

namespace detail {

inline bool is_fwd(const CatPtr& c) {
  return c->kind == CatKind::Slash && c->dir == SlashDir::Fwd;
}
inline bool is_bwd(const CatPtr& c) {
  return c->kind == CatKind::Slash && c->dir == SlashDir::Bwd;
}

inline bool rule_checks(const DerivTree& n, std::string& why) {
  switch (n.rule) {
    case CombinatorRule::FwdApp: {
      if (!n.right) { why = "binary rule with one child"; return false; }
      const CatPtr& f = n.left->category;
      if (!is_fwd(f)) { why = "left child is not X/Y"; return false; }
      if (!cat_equal(f->argument, n.right->category)) {
        why = "argument mismatch: expects " + cat_str(f->argument) + ", got " +
              cat_str(n.right->category);
        return false;
      }
      if (!cat_equal(f->result, n.category)) {
        why = "result should be " + cat_str(f->result);
        return false;
      }
      return true;
    }
    case CombinatorRule::BwdApp: {
      if (!n.right) { why = "binary rule with one child"; return false; }
      const CatPtr& f = n.right->category;
      if (!is_bwd(f)) { why = "right child is not X\\Y"; return false; }
      if (!cat_equal(f->argument, n.left->category)) {
        why = "argument mismatch: expects " + cat_str(f->argument) + ", got " +
              cat_str(n.left->category);
        return false;
      }
      if (!cat_equal(f->result, n.category)) {
        why = "result should be " + cat_str(f->result);
        return false;
      }
      return true;
    }
    case CombinatorRule::FwdComp: {
      if (!n.right) { why = "binary rule with one child"; return false; }
      const CatPtr& f = n.left->category;
      const CatPtr& g = n.right->category;
      if (!is_fwd(f) || !is_fwd(g)) { why = "children are not X/Y, Y/Z"; return false; }
      if (!cat_equal(f->argument, g->result)) {
        why = "middle category mismatch";
        return false;
      }
      if (!cat_equal(n.category, mk_fwd(f->result, g->argument))) {
        why = "result should be " + cat_str(mk_fwd(f->result, g->argument));
        return false;
      }
      return true;
    }
    case CombinatorRule::BwdComp: {
      if (!n.right) { why = "binary rule with one child"; return false; }
      const CatPtr& g = n.left->category;
      const CatPtr& f = n.right->category;
      if (!is_bwd(f) || !is_bwd(g)) { why = "children are not Y\\Z, X\\Y"; return false; }
      if (!cat_equal(f->argument, g->result)) {
        why = "middle category mismatch";
        return false;
      }
      if (!cat_equal(n.category, mk_bwd(f->result, g->argument))) {
        why = "result should be " + cat_str(mk_bwd(f->result, g->argument));
        return false;
      }
      return true;
    }
    case CombinatorRule::FwdRaise: {
      if (n.right) { why = "unary rule with two children"; return false; }
      const CatPtr& c = n.category;
      if (!is_fwd(c) || !is_bwd(c->argument)) {
        why = "raised category is not T/(T\\X)";
        return false;
      }
      if (!cat_equal(c->result, c->argument->result) ||
          !cat_equal(c->argument->argument, n.left->category)) {
        why = "raised category does not fit child " + cat_str(n.left->category);
        return false;
      }
      return true;
    }
    case CombinatorRule::BwdRaise: {
      if (n.right) { why = "unary rule with two children"; return false; }
      const CatPtr& c = n.category;
      if (!is_bwd(c) || !is_fwd(c->argument)) {
        why = "raised category is not T\\(T/X)";
        return false;
      }
      if (!cat_equal(c->result, c->argument->result) ||
          !cat_equal(c->argument->argument, n.left->category)) {
        why = "raised category does not fit child " + cat_str(n.left->category);
        return false;
      }
      return true;
    }
    case CombinatorRule::UnaryLex: {
      if (n.right) { why = "unary rule with two children"; return false; }
      const CatPtr& child = n.left->category;
      if (child->kind != CatKind::Atom || child->name != "N" ||
          n.category->kind != CatKind::Atom || n.category->name != "NP" ||
          !n.category->feature.empty()) {
        why = "only the N to NP lexical rule is supported";
        return false;
      }
      return true;
    }
  }
  why = "unknown rule";
  return false;
}

inline void validate_rec(const TreePtr& t, int& idx,
                         std::vector<std::string>& out) {
  int my_id = idx++;
  if (t->is_leaf) return;
  std::string why;
  if (!rule_checks(*t, why))
    out.push_back("node " + std::to_string(my_id) + " (" + rule_str(t->rule) +
                  " -> " + cat_str(t->category) + "): " + why);
  validate_rec(t->left, idx, out);
  if (t->right) validate_rec(t->right, idx, out);
}

}  // namespace detail

inline std::vector<std::string> validate_tree(const TreePtr& t) {
  std::vector<std::string> out;
  if (!t) {
    out.push_back("empty tree");
    return out;
  }
  int idx = 0;
  detail::validate_rec(t, idx, out);
  return out;
}

// ---------------------------------------------------------------------------
// Ingestion of external derivation documents (JSON). Leaves carry `surface`,
// `lemma`, `pos`, `category` plus optional `num`, `unit`, `noun`, `stem`,
// `template`; internal nodes carry `rule`, `category`, `children`.

namespace detail {

inline TreePtr ingest_rec(const nlohmann::json& j, int& idx) {
  int my_id = idx++;
  if (!j.is_object())
    throw SchemaError("derivation node " + std::to_string(my_id) +
                      " is not an object");
  if (!j.contains("category") || !j.at("category").is_string())
    throw SchemaError("derivation node " + std::to_string(my_id) +
                      " lacks a category string");
  CatPtr cat = parse_category(j.at("category").get<std::string>());

  if (j.contains("children")) {
    if (!j.contains("rule") || !j.at("rule").is_string())
      throw SchemaError("derivation node " + std::to_string(my_id) +
                        " lacks a rule");
    CombinatorRule rule = parse_rule(j.at("rule").get<std::string>());
    const auto& kids = j.at("children");
    if (!kids.is_array() || kids.empty() || kids.size() > 2)
      throw SchemaError("derivation node " + std::to_string(my_id) +
                        " must have 1 or 2 children");
    TreePtr left = ingest_rec(kids[0], idx);
    TreePtr right = kids.size() == 2 ? ingest_rec(kids[1], idx) : nullptr;
    return mk_node(rule, cat, left, right);
  }

  for (const char* field : {"surface", "lemma", "pos"})
    if (!j.contains(field) || !j.at(field).is_string())
      throw SchemaError("derivation leaf " + std::to_string(my_id) +
                        " lacks field '" + field + "'");
  LeafAttrs attrs;
  if (j.contains("stem")) attrs.stem = j.at("stem").get<std::string>();
  if (j.contains("num")) {
    if (j.at("num").is_number_integer())
      attrs.num = Rational(j.at("num").get<long long>());
    else
      attrs.num = Rational::parse(j.at("num").get<std::string>());
  }
  if (j.contains("unit")) attrs.unit = j.at("unit").get<std::string>();
  if (j.contains("noun")) attrs.noun_stem = j.at("noun").get<std::string>();
  if (j.contains("template"))
    attrs.template_key = j.at("template").get<std::string>();
  return mk_leaf(j.at("surface").get<std::string>(),
                 j.at("lemma").get<std::string>(),
                 parse_pos(j.at("pos").get<std::string>()), cat,
                 std::move(attrs));
}

}  // namespace detail

inline TreePtr ingest_derivation(const nlohmann::json& doc) {
  if (doc.is_null() || (doc.is_object() && doc.empty()))
    throw SchemaError("empty derivation document");
  int idx = 0;
  TreePtr t = detail::ingest_rec(doc, idx);
  auto violations = validate_tree(t);
  if (!violations.empty()) throw RuleMismatchError(0, violations.front());
  return t;
}

inline TreePtr ingest_derivation_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("derivation document is not valid JSON: ") +
                      e.what());
  }
  return ingest_derivation(j);
}

// Text rendering of a derivation, one node per line, for traces.
inline void tree_str_rec(const TreePtr& t, int depth, std::string& out) {
  out.append(static_cast<size_t>(depth) * 2, ' ');
  if (t->is_leaf) {
    out += cat_str(t->category) + "  " + t->surface + " [" + t->lemma + "/" +
           pos_str(t->pos) + "]";
    if (t->attrs.num) out += " num=" + t->attrs.num->str();
    if (!t->attrs.unit.empty()) out += " unit=" + t->attrs.unit;
    out += "\n";
    return;
  }
  out += cat_str(t->category) + "  <" + rule_str(t->rule) + ">\n";
  tree_str_rec(t->left, depth + 1, out);
  if (t->right) tree_str_rec(t->right, depth + 1, out);
}

inline std::string tree_str(const TreePtr& t) {
  std::string out;
  tree_str_rec(t, 0, out);
  return out;
}

}  // namespace ccgnli
