#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "ccgnli/lexicon.hpp"
#include "ccgnli/term.hpp"

namespace ccgnli {

enum class RelKind {
  Antonym,
  Hypernym,
  Hyponym,
  Synonym,
  Similar,
  Inflection,
  Derivation,
};

inline const char* rel_str(RelKind k) {
  switch (k) {
    case RelKind::Antonym: return "antonym";
    case RelKind::Hypernym: return "hypernym";
    case RelKind::Hyponym: return "hyponym";
    case RelKind::Synonym: return "synonym";
    case RelKind::Similar: return "similar";
    case RelKind::Inflection: return "inflection";
    case RelKind::Derivation: return "derivation";
  }
  return "?";
}

inline RelKind parse_rel(const std::string& s, const std::string& where) {
  if (s == "antonym") return RelKind::Antonym;
  if (s == "hypernym") return RelKind::Hypernym;
  if (s == "hyponym") return RelKind::Hyponym;
  if (s == "synonym") return RelKind::Synonym;
  if (s == "similar") return RelKind::Similar;
  if (s == "inflection") return RelKind::Inflection;
  if (s == "derivation") return RelKind::Derivation;
  throw ParseError(where + ": unknown relation kind '" + s + "'");
}

// True for the kinds whose entries hold in both directions.
inline bool rel_symmetric(RelKind k) {
  return k == RelKind::Synonym || k == RelKind::Similar ||
         k == RelKind::Inflection || k == RelKind::Derivation;
}

struct KbTriple {
  std::string source;
  RelKind kind{};
  std::string target;
  std::string provenance;  // file:line of the entry that introduced it

  bool operator<(const KbTriple& o) const {
    if (source != o.source) return source < o.source;
    if (kind != o.kind) return kind < o.kind;
    return target < o.target;
  }
};

// Word-relation store. Loading normalizes: symmetric kinds are closed under
// swap, hypernym/hyponym duals are added, duplicates collapse, and a
// reflexive antonym is rejected outright.
class KnowledgeBase {
public:
  void load(const std::string& path) {
    auto lines = detail::read_data_lines(path);
    for (size_t i = 0; i < lines.size(); ++i) {
      if (detail::skippable(lines[i])) continue;
      auto f = detail::tsv_fields(lines[i]);
      std::string where = path + ":" + std::to_string(i + 1);
      if (f.size() != 3)
        throw ParseError(where + ": expected 3 tab-separated fields");
      RelKind kind = parse_rel(f[1], where);
      std::string src = sanitize_ident(f[0]);
      std::string tgt = sanitize_ident(f[2]);
      if (kind == RelKind::Antonym && src == tgt)
        throw ParseError(where + ": reflexive antonym '" + f[0] + "'");
      add(KbTriple{src, kind, tgt, where});
    }
  }

  void add(KbTriple t) {
    t.source = sanitize_ident(t.source);
    t.target = sanitize_ident(t.target);
    insert(t);
    if (rel_symmetric(t.kind))
      insert(KbTriple{t.target, t.kind, t.source, t.provenance});
    if (t.kind == RelKind::Hypernym)
      insert(KbTriple{t.target, RelKind::Hyponym, t.source, t.provenance});
    if (t.kind == RelKind::Hyponym)
      insert(KbTriple{t.target, RelKind::Hypernym, t.source, t.provenance});
  }

  bool has(const std::string& source, RelKind kind,
           const std::string& target) const {
    return triples_.count(KbTriple{source, kind, target, ""}) > 0;
  }

  const std::set<KbTriple>& triples() const { return triples_; }
  bool empty() const { return triples_.empty(); }

private:
  void insert(KbTriple t) { triples_.insert(std::move(t)); }
  std::set<KbTriple> triples_;
};

// Maps a gradable lemma to its scale's shared threshold constant. A scale is
// the connected component of the lemma under antonym/synonym/similar edges;
// its threshold is named th_ followed by the sorted member lemmas, so both
// ends of an antonym pair read and write one constant (fast/slow share
// th_fastslow). A lemma with no edges is its own scale.
class ScaleResolver {
public:
  ScaleResolver() = default;

  explicit ScaleResolver(const KnowledgeBase& kb) {
    for (const auto& t : kb.triples()) {
      if (t.kind == RelKind::Antonym || t.kind == RelKind::Synonym ||
          t.kind == RelKind::Similar)
        link(t.source, t.target);
    }
  }

  std::string theta(const std::string& lemma) const {
    auto it = parent_.find(lemma);
    if (it == parent_.end()) return "th_" + lemma;
    std::string root = find(lemma);
    std::vector<std::string> members;
    for (const auto& [m, _] : parent_)
      if (find(m) == root) members.push_back(m);
    std::sort(members.begin(), members.end());
    std::string name = "th_";
    for (const auto& m : members) name += m;
    return name;
  }

  bool same_scale(const std::string& a, const std::string& b) const {
    if (a == b) return true;
    if (!parent_.count(a) || !parent_.count(b)) return false;
    return find(a) == find(b);
  }

private:
  std::string find(const std::string& x) const {
    std::string cur = x;
    while (true) {
      const std::string& p = parent_.at(cur);
      if (p == cur) return cur;
      cur = p;
    }
  }

  void link(const std::string& a, const std::string& b) {
    parent_.emplace(a, a);
    parent_.emplace(b, b);
    std::string ra = find(a), rb = find(b);
    if (ra != rb) parent_[std::max(ra, rb)] = std::min(ra, rb);
  }

  std::map<std::string, std::string> parent_;
};

// A predicate occurrence: constant name plus argument types, gathered from
// application spines of Truth type in a formula.
struct PredSig {
  std::string name;
  std::vector<TypePtr> args;

  bool same_args(const PredSig& o) const {
    if (args.size() != o.args.size()) return false;
    for (size_t i = 0; i < args.size(); ++i)
      if (!type_equal(args[i], o.args[i])) return false;
    return true;
  }

  bool degree_final() const {
    return !args.empty() && args.back()->kind == TypeKind::Degree;
  }
};

namespace detail {

inline void collect_preds_rec(const TermPtr& t,
                              std::map<std::string, PredSig>& out) {
  if (!t) return;
  if (t->kind == TermKind::App) {
    // walk the spine
    std::vector<TypePtr> args;
    TermPtr head = t;
    while (head->kind == TermKind::App) {
      args.push_back(type_of(head->b));
      collect_preds_rec(head->b, out);
      head = head->a;
    }
    std::reverse(args.begin(), args.end());
    if (head->kind == TermKind::Const &&
        type_of(t)->kind == TypeKind::Truth && !args.empty()) {
      out.emplace(head->name, PredSig{head->name, args});
    } else {
      collect_preds_rec(head, out);
    }
    return;
  }
  collect_preds_rec(t->a, out);
  collect_preds_rec(t->b, out);
}

}  // namespace detail

inline std::map<std::string, PredSig> collect_predicates(const Formula& f) {
  std::map<std::string, PredSig> out;
  detail::collect_preds_rec(f.term(), out);
  return out;
}

inline std::map<std::string, PredSig> collect_predicates(
    const std::vector<Formula>& fs) {
  std::map<std::string, PredSig> out;
  for (const auto& f : fs) detail::collect_preds_rec(f.term(), out);
  return out;
}

struct LexicalAxiom {
  Formula formula;
  std::string premise_pred;     // F
  std::string hypothesis_pred;  // G
  RelKind kind{};
};

namespace detail {

// ∀-close `body` over fresh variables x1..xn typed by `args`, applying
// `mk` to build the matrix from the argument variables.
template <typename Fn>
TermPtr forall_over(const std::vector<TypePtr>& args, Fn mk) {
  std::vector<TermPtr> vars;
  for (size_t i = 0; i < args.size(); ++i) {
    std::string base =
        args[i]->kind == TypeKind::Degree
            ? "d"
            : (args[i]->kind == TypeKind::Event ? "e" : "x");
    vars.push_back(mk_var(base + "a" + std::to_string(i + 1), args[i]));
  }
  TermPtr body = mk(vars);
  for (size_t i = args.size(); i-- > 0;)
    body = mk_forall(vars[i]->name, args[i], body);
  return body;
}

inline TermPtr apply_pred(const std::string& name,
                          const std::vector<TypePtr>& args,
                          const std::vector<TermPtr>& vars) {
  TypePtr ty = SemType::truth();
  for (size_t i = args.size(); i-- > 0;) ty = SemType::arrow(args[i], ty);
  TermPtr t = mk_const(name, ty);
  for (const auto& v : vars) t = mk_app(t, v);
  return t;
}

}  // namespace detail

// Axiom for one related pair, oriented premise-to-hypothesis:
//   antonym            ∀x̄(F(x̄) → ¬G(x̄))
//   antonym, gradable  ∀x̄∀δ(G(x̄,δ) ↔ ¬F(x̄,δ))   (complement of one scale)
//   hypernym           ∀x̄(F(x̄) → G(x̄))
//   hyponym            ∀x̄(G(x̄) → F(x̄))
//   equivalence kinds  ∀x̄(F(x̄) ↔ G(x̄))
inline Formula pair_axiom(const PredSig& f, const PredSig& g, RelKind kind) {
  const auto& args = f.args;
  TermPtr body;
  if (kind == RelKind::Antonym && f.degree_final()) {
    body = detail::forall_over(args, [&](const std::vector<TermPtr>& vs) {
      return mk_iff(detail::apply_pred(g.name, args, vs),
                    mk_not(detail::apply_pred(f.name, args, vs)));
    });
  } else if (kind == RelKind::Antonym) {
    body = detail::forall_over(args, [&](const std::vector<TermPtr>& vs) {
      return mk_implies(detail::apply_pred(f.name, args, vs),
                        mk_not(detail::apply_pred(g.name, args, vs)));
    });
  } else if (kind == RelKind::Hypernym) {
    body = detail::forall_over(args, [&](const std::vector<TermPtr>& vs) {
      return mk_implies(detail::apply_pred(f.name, args, vs),
                        detail::apply_pred(g.name, args, vs));
    });
  } else if (kind == RelKind::Hyponym) {
    body = detail::forall_over(args, [&](const std::vector<TermPtr>& vs) {
      return mk_implies(detail::apply_pred(g.name, args, vs),
                        detail::apply_pred(f.name, args, vs));
    });
  } else {
    body = detail::forall_over(args, [&](const std::vector<TermPtr>& vs) {
      return mk_iff(detail::apply_pred(f.name, args, vs),
                    detail::apply_pred(g.name, args, vs));
    });
  }
  return Formula::make(body);
}

// Axioms for every premise-predicate / hypothesis-predicate pair that shares
// an argument signature and is related in the KB. When several kinds relate
// the same pair, antonym wins over hypernym/hyponym, which win over the
// equivalence kinds, and only the winner is emitted. The KB entry consulted
// for pair (F,G) is (G, kind, F).
inline std::vector<LexicalAxiom> synthesize_axioms(
    const std::vector<Formula>& premises, const Formula& hypothesis,
    const KnowledgeBase& kb) {
  auto fpreds = collect_predicates(premises);
  auto gpreds = collect_predicates(hypothesis);
  static const RelKind order[] = {
      RelKind::Antonym,    RelKind::Hypernym,  RelKind::Hyponym,
      RelKind::Synonym,    RelKind::Similar,   RelKind::Inflection,
      RelKind::Derivation,
  };
  std::vector<LexicalAxiom> out;
  for (const auto& [fn, f] : fpreds) {
    for (const auto& [gn, g] : gpreds) {
      if (fn == gn || !f.same_args(g)) continue;
      for (RelKind kind : order) {
        if (!kb.has(gn, kind, fn)) continue;
        out.push_back(LexicalAxiom{pair_axiom(f, g, kind), fn, gn, kind});
        break;
      }
    }
  }
  return out;
}

}  // namespace ccgnli
