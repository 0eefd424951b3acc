#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "ccgnli/derivation.hpp"
#include "ccgnli/lexicon.hpp"

namespace ccgnli {

// Chart parser over the bundled lexicon. Binary rules: forward/backward
// application and forward/backward composition. Unary rules: bare N to NP,
// and type raising restricted to NP -> S/(S\NP) (what subject gaps in
// than-clauses need). Results are ranked by (fewer raising steps, more
// left-branching, stable text key) so output order is deterministic.

namespace detail {

struct ChartItem {
  TreePtr tree;
  int raises{};
  int right_weight{};
  std::string key;  // rank fingerprint, also used for dedup
};

inline int leaf_count(const TreePtr& t) {
  if (t->is_leaf) return 1;
  return leaf_count(t->left) + (t->right ? leaf_count(t->right) : 0);
}

inline void fingerprint(const TreePtr& t, std::string& out) {
  if (t->is_leaf) {
    out += "[" + t->surface + "]";
    return;
  }
  out += "(" + rule_str(t->rule) + " " + cat_str(t->category) + " ";
  fingerprint(t->left, out);
  if (t->right) fingerprint(t->right, out);
  out += ")";
}

inline ChartItem make_item(TreePtr tree, int raises, int right_weight) {
  ChartItem it;
  it.key.reserve(64);
  fingerprint(tree, it.key);
  it.tree = std::move(tree);
  it.raises = raises;
  it.right_weight = right_weight;
  return it;
}

inline bool item_less(const ChartItem& a, const ChartItem& b) {
  if (a.raises != b.raises) return a.raises < b.raises;
  if (a.right_weight != b.right_weight) return a.right_weight < b.right_weight;
  return a.key < b.key;
}

}  // namespace detail

class CkyParser {
public:
  explicit CkyParser(const Lexicon& lex) : lex_(lex) {}

  std::vector<TreePtr> parse(const std::vector<Token>& tokens) const {
    if (tokens.empty()) return {};
    const size_t n = tokens.size();
    // chart[i][len-1] holds items for span [i, i+len)
    std::vector<std::vector<std::vector<detail::ChartItem>>> chart(
        n, std::vector<std::vector<detail::ChartItem>>(n));

    for (size_t i = 0; i < n; ++i) {
      chart[i][0] = leaf_items(tokens[i]);
      apply_unaries(chart[i][0]);
    }

    for (size_t len = 2; len <= n; ++len) {
      for (size_t i = 0; i + len <= n; ++i) {
        auto& cell = chart[i][len - 1];
        for (size_t split = 1; split < len; ++split) {
          const auto& ls = chart[i][split - 1];
          const auto& rs = chart[i + split][len - split - 1];
          for (const auto& l : ls)
            for (const auto& r : rs) combine(l, r, cell);
        }
        apply_unaries(cell);
        prune(cell);
      }
    }

    std::vector<TreePtr> roots;
    for (const auto& it : chart[0][n - 1]) {
      const CatPtr& c = it.tree->category;
      if (c->kind == CatKind::Atom && c->name == "S") roots.push_back(it.tree);
    }
    return roots;
  }

private:
  static constexpr size_t kCellCap = 48;

  std::vector<detail::ChartItem> leaf_items(const Token& t) const {
    std::vector<detail::ChartItem> out;
    if (t.fused_category) {
      out.push_back(detail::make_item(
          mk_leaf(t.surface, t.lemma, t.pos, t.fused_category, t.attrs), 0, 0));
      return out;
    }
    const auto* entries = lex_.lookup(t.lemma, t.pos);
    if (!entries || entries->empty()) throw OutOfVocabularyError(t.surface);
    for (const auto& e : *entries) {
      LeafAttrs attrs = t.attrs;
      attrs.template_key = e.template_key;
      if (attrs.stem.empty())
        attrs.stem = (t.pos == Pos::Adverb || t.pos == Pos::Adjective)
                         ? lex_.stem(t.lemma)
                         : t.lemma;
      out.push_back(detail::make_item(
          mk_leaf(t.surface, t.lemma, t.pos, e.category, std::move(attrs)), 0,
          0));
    }
    return out;
  }

  void combine(const detail::ChartItem& l, const detail::ChartItem& r,
               std::vector<detail::ChartItem>& cell) const {
    const CatPtr& lc = l.tree->category;
    const CatPtr& rc = r.tree->category;
    int raises = l.raises + r.raises;
    int rweight = l.right_weight + r.right_weight +
                  detail::leaf_count(r.tree) - 1;
    if (lc->kind == CatKind::Slash && lc->dir == SlashDir::Fwd) {
      if (cat_equal(lc->argument, rc))
        push(cell, detail::make_item(
                       mk_node(CombinatorRule::FwdApp, lc->result, l.tree,
                               r.tree),
                       raises, rweight));
      if (rc->kind == CatKind::Slash && rc->dir == SlashDir::Fwd &&
          cat_equal(lc->argument, rc->result))
        push(cell, detail::make_item(
                       mk_node(CombinatorRule::FwdComp,
                               mk_fwd(lc->result, rc->argument), l.tree,
                               r.tree),
                       raises, rweight));
    }
    if (rc->kind == CatKind::Slash && rc->dir == SlashDir::Bwd) {
      if (cat_equal(rc->argument, lc))
        push(cell, detail::make_item(
                       mk_node(CombinatorRule::BwdApp, rc->result, l.tree,
                               r.tree),
                       raises, rweight));
      if (lc->kind == CatKind::Slash && lc->dir == SlashDir::Bwd &&
          cat_equal(rc->argument, lc->result))
        push(cell, detail::make_item(
                       mk_node(CombinatorRule::BwdComp,
                               mk_bwd(rc->result, lc->argument), l.tree,
                               r.tree),
                       raises, rweight));
    }
  }

  void apply_unaries(std::vector<detail::ChartItem>& cell) const {
    // the frontier grows: N -> NP -> raised NP chains in one pass
    for (size_t k = 0; k < cell.size(); ++k) {
      const CatPtr& c = cell[k].tree->category;
      if (c->kind != CatKind::Atom) continue;
      if (c->name == "N")
        push(cell,
             detail::make_item(mk_node(CombinatorRule::UnaryLex,
                                       mk_atom("NP"), cell[k].tree),
                               cell[k].raises, cell[k].right_weight));
      if (c->name == "NP" && c->feature.empty()) {
        CatPtr raised = mk_fwd(mk_atom("S"), mk_bwd(mk_atom("S"), mk_atom("NP")));
        push(cell, detail::make_item(
                       mk_node(CombinatorRule::FwdRaise, raised, cell[k].tree),
                       cell[k].raises + 1, cell[k].right_weight));
      }
    }
  }

  void push(std::vector<detail::ChartItem>& cell,
            detail::ChartItem item) const {
    for (const auto& existing : cell)
      if (existing.key == item.key) return;
    cell.push_back(std::move(item));
  }

  void prune(std::vector<detail::ChartItem>& cell) const {
    std::sort(cell.begin(), cell.end(), detail::item_less);
    if (cell.size() > kCellCap) cell.resize(kCellCap);
  }

  const Lexicon& lex_;
};

}  // namespace ccgnli
