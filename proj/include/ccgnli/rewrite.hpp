#pragma once

#include "ccgnli/derivation.hpp"
#include "ccgnli/lexicon.hpp"

namespace ccgnli {

// Monotonicity feature pass: quantifier leaves classified downward get their
// N/N category replaced by N_down/N, non-monotone ones by N_nm/N, and node
// categories along the N spine are recomputed so the feature reaches the
// N -> NP step where the quantifier's scope is resolved. Shape, tokens,
// lemmas, and rules are untouched; the pass is idempotent.

namespace detail {

inline CatPtr rederive_category(const DerivTree& n, const CatPtr& left,
                                const CatPtr& right) {
  switch (n.rule) {
    case CombinatorRule::FwdApp:
      return left->result;
    case CombinatorRule::BwdApp:
      return right->result;
    case CombinatorRule::FwdComp:
      return mk_fwd(left->result, right->argument);
    case CombinatorRule::BwdComp:
      return mk_bwd(right->result, left->argument);
    case CombinatorRule::FwdRaise:
    case CombinatorRule::BwdRaise:
    case CombinatorRule::UnaryLex:
      return n.category;  // NP and raised categories never carry features
  }
  return n.category;
}

}  // namespace detail

inline TreePtr rewrite_monotonicity_features(const TreePtr& t,
                                             const Lexicon& lex) {
  if (t->is_leaf) {
    auto mc = lex.quant_class(t->lemma);
    if (!mc) return t;
    std::string want;
    if (*mc == MonoClass::Down) want = "down";
    else if (*mc == MonoClass::NonMono) want = "nm";
    // only N/N-shaped quantifier leaves participate
    if (!cat_equal_nofeat(t->category, mk_fwd(mk_atom("N"), mk_atom("N"))))
      return t;
    if (t->category->result->feature == want) return t;
    CatPtr cat = want.empty()
                     ? mk_fwd(mk_atom("N"), mk_atom("N"))
                     : mk_fwd(mk_atom("N", want), mk_atom("N"));
    return mk_leaf(t->surface, t->lemma, t->pos, cat, t->attrs);
  }
  TreePtr left = rewrite_monotonicity_features(t->left, lex);
  TreePtr right =
      t->right ? rewrite_monotonicity_features(t->right, lex) : nullptr;
  CatPtr cat = detail::rederive_category(
      *t, left->category, right ? right->category : nullptr);
  if (left == t->left && right == t->right && cat_equal(cat, t->category))
    return t;
  return mk_node(t->rule, cat, left, right);
}

}  // namespace ccgnli
