#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ccgnli/derivation.hpp"
#include "ccgnli/lexknow.hpp"
#include "ccgnli/templates.hpp"

namespace ccgnli {

// Generalized-quantifier packet: a noun phrase contributes a variable now and
// a quantifier wrapped around the sentence at closure time.
enum class PacketKind { Exist, Univ, NegExist, Down, NonMono, ClausalMore };

struct Packet {
  PacketKind kind{};
  int pos{};                 // allocation order
  std::string var;           // entity variable standing in for the NP
  TermPtr restriction;       // E>T noun property
  // ClausalMore only:
  std::string noun_stem;
  TermPtr than_body;                    // E>T gap predicate of the than-clause
  std::vector<std::string> than_events; // its events, closed inside the clause
};

struct NodeSem {
  TermPtr term;
  std::vector<Packet> packets;
  std::vector<std::string> events;  // free event variables, allocation order
};

namespace detail {

inline void collect_const_names(const TermPtr& t, std::set<std::string>& out) {
  if (!t) return;
  if (t->kind == TermKind::Const) out.insert(t->name);
  collect_const_names(t->a, out);
  collect_const_names(t->b, out);
}

inline TypePtr find_const_type(const TermPtr& t, const std::string& name) {
  if (!t) return nullptr;
  if (t->kind == TermKind::Const && t->name == name) return t->type;
  if (auto ty = find_const_type(t->a, name)) return ty;
  return find_const_type(t->b, name);
}

// Left-to-right conjuncts of an And spine.
inline void conjuncts_of(const TermPtr& t, std::vector<TermPtr>& out) {
  if (t->kind == TermKind::And) {
    conjuncts_of(t->a, out);
    conjuncts_of(t->b, out);
  } else {
    out.push_back(t);
  }
}

// Head predicate lemma of a noun property term, for per-noun thresholds.
inline std::optional<std::string> noun_head(TermPtr t) {
  while (t && t->kind == TermKind::Abs) t = t->b;
  while (t) {
    if (t->kind == TermKind::Const) return t->name;
    if (t->kind == TermKind::And) { t = t->a; continue; }
    if (t->kind == TermKind::App) { t = t->a; continue; }
    break;
  }
  return std::nullopt;
}

inline bool starts_with(const std::string& s, const std::string& p) {
  return s.size() >= p.size() && s.compare(0, p.size(), p) == 0;
}

}  // namespace detail

// Builds sentence formulas from derivation trees: instantiates each leaf's
// template, combines per combinator, and discharges events, negation, and
// quantifier packets at each full clause.
class Composer {
public:
  Composer(const TemplateBank& bank, const Lexicon& lex,
           const ScaleResolver& scales)
      : bank_(bank), lex_(lex), scales_(scales) {}

  Formula compose(const TreePtr& tree) {
    if (!(tree->category->kind == CatKind::Atom &&
          tree->category->name == "S"))
      throw CompositionError("derivation root must be S, got " +
                             cat_str(tree->category));
    NodeSem sem = walk(tree);
    return Formula::make(discharge(std::move(sem)));
  }

private:
  NodeSem walk(const TreePtr& t) {
    if (t->is_leaf) return leaf_sem(t);
    if (!t->right) {
      NodeSem child = walk(t->left);
      if (t->rule == CombinatorRule::UnaryLex) return noun_phrase(t, child);
      if (t->rule == CombinatorRule::FwdRaise ||
          t->rule == CombinatorRule::BwdRaise)
        return raise(t, std::move(child));
      throw CompositionError("unary node with rule " + rule_str(t->rule));
    }
    NodeSem left = walk(t->left);
    NodeSem right = walk(t->right);
    switch (t->rule) {
      case CombinatorRule::FwdApp:
        return apply(std::move(left), std::move(right), t->right, false);
      case CombinatorRule::BwdApp:
        return apply(std::move(right), std::move(left), t->left, true);
      case CombinatorRule::FwdComp:
      case CombinatorRule::BwdComp:
        return composition(t, std::move(left), std::move(right));
      default:
        throw CompositionError("binary node with rule " + rule_str(t->rule));
    }
  }

  // --- leaves ---

  NodeSem leaf_sem(const TreePtr& t) {
    const Template& tpl = !t->attrs.template_key.empty()
                              ? bank_.by_key(t->attrs.template_key)
                              : bank_.lookup(t->category, t->lemma, t->pos);
    std::string stem =
        sanitize_ident(t->attrs.stem.empty() ? t->lemma : t->attrs.stem);
    TermPtr body = tpl.body;
    NodeSem sem;

    if (auto ty = detail::find_const_type(body, "%P"))
      body = replace_const(body, "%P", mk_const(stem, ty));
    if (contains_const(body, "%n")) {
      if (!t->attrs.num)
        throw CompositionError("template '" + tpl.key + "' needs a numeral, '" +
                               t->lemma + "' has none");
      body = replace_const(body, "%n", mk_num(*t->attrs.num, t->attrs.unit));
    }
    if (contains_const(body, "%n1")) {
      if (!t->attrs.num)
        throw CompositionError("template '" + tpl.key + "' needs a numeral, '" +
                               t->lemma + "' has none");
      body = replace_const(body, "%n1",
                           mk_num(*t->attrs.num + Rational(1), t->attrs.unit));
    }
    if (contains_const(body, "%th"))
      body = replace_const(
          body, "%th", mk_const(scales_.theta(stem), SemType::degree()));
    if (contains_const(body, "%thN"))
      body = replace_const(body, "%thN",
                           mk_const("__thN_" + stem, SemType::degree()));
    if (contains_const(body, "_e")) {
      std::string ev = fresh_event();
      sem.events.push_back(ev);
      body = replace_const(body, "_e", mk_var(ev, SemType::event()));
    }
    if (contains_const(body, "_pack_cmore")) {
      std::string noun = sanitize_ident(t->attrs.noun_stem);
      if (noun.empty())
        throw CompositionError("clausal comparative '" + t->lemma +
                               "' lacks its noun");
      TypePtr ty = detail::find_const_type(body, "_pack_cmore");
      body = replace_const(body, "_pack_cmore",
                           mk_const("_pack_cmore$" + noun, ty));
    }

    std::set<std::string> names;
    detail::collect_const_names(body, names);
    for (const auto& n : names)
      if (n[0] == '%')
        throw CompositionError("template '" + tpl.key +
                               "' placeholder " + n + " not instantiable for '" +
                               t->lemma + "'");
    sem.term = body;
    return sem;
  }

  // --- unary nodes ---

  NodeSem noun_phrase(const TreePtr& t, NodeSem child) {
    const std::string& feat = t->left->category->feature;
    PacketKind kind = PacketKind::Exist;
    if (feat == "down") kind = PacketKind::Down;
    else if (feat == "nm") kind = PacketKind::NonMono;
    else if (!feat.empty())
      throw CompositionError("unknown noun feature '" + feat + "'");
    Packet p;
    p.kind = kind;
    p.pos = packet_pos_++;
    p.var = fresh_entity();
    p.restriction = beta_normalize(child.term);
    NodeSem out;
    out.term = mk_var(p.var, SemType::entity());
    out.packets = std::move(child.packets);
    out.packets.push_back(std::move(p));
    out.events = std::move(child.events);
    return out;
  }

  NodeSem raise(const TreePtr& t, NodeSem child) {
    TypePtr pt = category_to_type(t->category->argument);
    std::string p = "pr" + std::to_string(++misc_n_);
    child.term = mk_abs(p, pt, mk_app(mk_var(p, pt), child.term));
    return child;
  }

  // --- binary nodes ---

  NodeSem apply(NodeSem fun, NodeSem arg, const TreePtr& arg_tree,
                bool arg_is_left) {
    if (arg_tree->category->kind == CatKind::Atom &&
        arg_tree->category->name == "S") {
      arg.term = discharge(NodeSem{arg.term, std::move(arg.packets),
                                   std::move(arg.events)});
      arg.packets.clear();
      arg.events.clear();
    }
    NodeSem out;
    out.term = mk_app(fun.term, arg.term);
    auto& first = arg_is_left ? arg : fun;
    auto& second = arg_is_left ? fun : arg;
    out.packets = std::move(first.packets);
    for (auto& p : second.packets) out.packets.push_back(std::move(p));
    out.events = std::move(first.events);
    for (auto& e : second.events) out.events.push_back(e);

    resolve_theta_n(out, arg.term);
    out.term = beta_normalize(out.term);
    resolve_dups(out);
    resolve_ev(out, arg.term);
    out.term = beta_normalize(out.term);
    extract_packets(out);
    return out;
  }

  NodeSem composition(const TreePtr& t, NodeSem left, NodeSem right) {
    NodeSem& f = t->rule == CombinatorRule::FwdComp ? left : right;
    NodeSem& g = t->rule == CombinatorRule::FwdComp ? right : left;
    TypePtr zt = category_to_type(t->category->argument);
    std::string z = "zc" + std::to_string(++misc_n_);
    TermPtr zv = mk_var(z, zt);
    NodeSem out;
    out.term =
        beta_normalize(mk_abs(z, zt, mk_app(f.term, mk_app(g.term, zv))));
    out.packets = std::move(left.packets);
    for (auto& p : right.packets) out.packets.push_back(std::move(p));
    out.events = std::move(left.events);
    for (auto& e : right.events) out.events.push_back(e);
    return out;
  }

  // --- marker resolution ---

  // Per-noun threshold: __thN_<q> waits for the quantified noun, then becomes
  // th_<q>_<noun-stem> (singular via the stem table).
  void resolve_theta_n(NodeSem& sem, const TermPtr& arg) {
    std::set<std::string> names;
    detail::collect_const_names(sem.term, names);
    for (const auto& n : names) {
      if (!detail::starts_with(n, "__thN_")) continue;
      auto noun = detail::noun_head(arg);
      if (!noun) continue;
      std::string theta = "th_" + n.substr(6) + "_" + lex_.stem(*noun);
      sem.term =
          replace_const(sem.term, n, mk_const(theta, SemType::degree()));
    }
  }

  // _dup(V, y): duplicate the verb phrase with fresh events and apply it to
  // y; _ev2 names the duplicate of V's first event.
  void resolve_dups(NodeSem& sem) {
    while (true) {
      std::string ev2;
      sem.term = rewrite_dup(sem.term, sem, ev2);
      if (ev2.empty()) break;
      if (contains_const(sem.term, "_ev2"))
        sem.term = replace_const(sem.term, "_ev2",
                                 mk_var(ev2, SemType::event()));
    }
  }

  TermPtr rewrite_dup(const TermPtr& t, NodeSem& sem, std::string& ev2) {
    if (!t || !ev2.empty() || t->kind == TermKind::Var ||
        t->kind == TermKind::Const || t->kind == TermKind::Num)
      return t;
    if (t->kind == TermKind::App && t->a->kind == TermKind::App &&
        t->a->a->kind == TermKind::Const && t->a->a->name == "_dup" &&
        t->a->b->kind == TermKind::Abs) {
      TermPtr vp = t->a->b;
      auto fv = free_vars(vp);
      std::vector<std::string> evs;
      for (const auto& e : sem.events)
        if (fv.count(e)) evs.push_back(e);
      if (evs.empty())
        throw CompositionError("comparative duplicates an eventless phrase");
      TermPtr dup = vp;
      for (const auto& e : evs) {
        std::string ne = fresh_event();
        sem.events.push_back(ne);
        dup = substitute(dup, e, mk_var(ne, SemType::event()));
        if (ev2.empty()) ev2 = ne;
      }
      return beta_normalize(mk_app(dup, t->b));
    }
    TermPtr a = rewrite_dup(t->a, sem, ev2);
    TermPtr b = rewrite_dup(t->b, sem, ev2);
    if (a == t->a && b == t->b) return t;
    return remake(t, a, b);
  }

  // _ev names the single event of the verb phrase just consumed.
  void resolve_ev(NodeSem& sem, const TermPtr& arg) {
    if (!contains_const(sem.term, "_ev")) return;
    auto fv = free_vars(arg);
    std::vector<std::string> evs;
    for (const auto& e : sem.events)
      if (fv.count(e)) evs.push_back(e);
    if (evs.empty()) return;  // not this application; wait for the VP
    if (evs.size() > 1)
      throw CompositionError("gradable modifier over a multi-event phrase");
    sem.term =
        replace_const(sem.term, "_ev", mk_var(evs[0], SemType::event()));
  }

  void extract_packets(NodeSem& sem) {
    sem.term = extract_packets_rec(sem.term, sem);
  }

  TermPtr extract_packets_rec(const TermPtr& t, NodeSem& sem) {
    if (!t || t->kind == TermKind::Var || t->kind == TermKind::Const ||
        t->kind == TermKind::Num)
      return t;
    if (t->kind == TermKind::App && t->a->kind == TermKind::Const &&
        detail::starts_with(t->a->name, "_pack_")) {
      Packet p;
      p.pos = packet_pos_++;
      p.var = fresh_entity();
      p.restriction = beta_normalize(t->b);
      const std::string& n = t->a->name;
      if (n == "_pack_ex") p.kind = PacketKind::Exist;
      else if (n == "_pack_all") p.kind = PacketKind::Univ;
      else if (n == "_pack_no") p.kind = PacketKind::NegExist;
      else if (detail::starts_with(n, "_pack_cmore$")) {
        p.kind = PacketKind::ClausalMore;
        p.noun_stem = n.substr(12);
        p.than_body = p.restriction;
        p.restriction = nullptr;
        auto fv = free_vars(p.than_body);
        std::vector<std::string> keep;
        for (const auto& e : sem.events) {
          if (fv.count(e)) p.than_events.push_back(e);
          else keep.push_back(e);
        }
        sem.events = std::move(keep);
      } else {
        throw CompositionError("unknown packet marker " + n);
      }
      TermPtr v = mk_var(p.var, SemType::entity());
      sem.packets.push_back(std::move(p));
      return v;
    }
    TermPtr a = extract_packets_rec(t->a, sem);
    TermPtr b = extract_packets_rec(t->b, sem);
    if (a == t->a && b == t->b) return t;
    return remake(t, a, b);
  }

  static TermPtr remake(const TermPtr& t, const TermPtr& a, const TermPtr& b) {
    switch (t->kind) {
      case TermKind::Abs: return mk_abs(t->name, t->type, a);
      case TermKind::App: return mk_app(a, b);
      case TermKind::Not: return mk_not(a);
      case TermKind::And: return mk_and(a, b);
      case TermKind::Or: return mk_or(a, b);
      case TermKind::Implies: return mk_implies(a, b);
      case TermKind::Iff: return mk_iff(a, b);
      case TermKind::Exists: return mk_exists(t->name, t->type, a);
      case TermKind::Forall: return mk_forall(t->name, t->type, a);
      case TermKind::Eq: return mk_eq(a, b);
      case TermKind::Less: return mk_less(a, b);
      case TermKind::Leq: return mk_leq(a, b);
      default:
        throw CompositionError("cannot rebuild term node");
    }
  }

  // --- clause closure ---

  static int packet_rank(PacketKind k) {
    switch (k) {
      case PacketKind::Down:
      case PacketKind::NegExist:
      case PacketKind::NonMono:
      case PacketKind::ClausalMore:
        return 0;
      case PacketKind::Univ: return 1;
      case PacketKind::Exist: return 2;
    }
    return 3;
  }

  TermPtr discharge(NodeSem sem) {
    TermPtr core = beta_normalize(sem.term);
    bool negated = core->kind == TermKind::App &&
                   core->a->kind == TermKind::Const && core->a->name == "_neg";
    if (negated) core = core->b;

    std::set<std::string> names;
    detail::collect_const_names(core, names);
    for (const auto& p : sem.packets) {
      if (p.restriction) detail::collect_const_names(p.restriction, names);
      if (p.than_body) detail::collect_const_names(p.than_body, names);
    }
    for (const auto& n : names) {
      if (n == "_ev" || n == "_ev2" || n == "_dup" || n == "_e" ||
          n == "_neg" || n[0] == '%' || detail::starts_with(n, "_pack_") ||
          detail::starts_with(n, "__thN_"))
        throw CompositionError("unresolved marker " + n + " at clause end");
    }

    auto fv = free_vars(core);
    for (size_t i = sem.events.size(); i-- > 0;)
      if (fv.count(sem.events[i]))
        core = mk_exists(sem.events[i], SemType::event(), core);
    if (negated) core = mk_not(core);

    std::stable_sort(sem.packets.begin(), sem.packets.end(),
                     [](const Packet& a, const Packet& b) {
                       int ra = packet_rank(a.kind), rb = packet_rank(b.kind);
                       if (ra != rb) return ra < rb;
                       return a.pos < b.pos;
                     });
    for (size_t i = sem.packets.size(); i-- > 0;)
      core = wrap_packet(sem.packets[i], core);

    TypePtr ty = type_of(core);
    if (ty->kind != TypeKind::Truth)
      throw CompositionError("clause closes at type " + type_str(ty) +
                             ", expected T");
    return core;
  }

  TermPtr wrap_packet(const Packet& p, const TermPtr& core) {
    if (p.kind == PacketKind::ClausalMore) return wrap_clausal_more(p, core);
    TermPtr x = mk_var(p.var, SemType::entity());
    TermPtr rx = beta_normalize(mk_app(p.restriction, x));
    std::vector<TermPtr> parts;
    detail::conjuncts_of(rx, parts);
    switch (p.kind) {
      case PacketKind::Exist: {
        parts.push_back(core);
        return mk_exists(p.var, SemType::entity(), mk_and_list(parts));
      }
      case PacketKind::Univ:
        return mk_forall(p.var, SemType::entity(), mk_implies(rx, core));
      case PacketKind::NegExist:
      case PacketKind::Down: {
        parts.push_back(core);
        return mk_not(
            mk_exists(p.var, SemType::entity(), mk_and_list(parts)));
      }
      case PacketKind::NonMono: {
        parts.push_back(core);
        TermPtr witness =
            mk_exists(p.var, SemType::entity(), mk_and_list(parts));
        std::string d = fresh_degree();
        Rational n;
        TermPtr rd = generalize_many_num(rx, mk_var(d, SemType::degree()), n);
        std::vector<TermPtr> ant;
        detail::conjuncts_of(rd, ant);
        ant.push_back(core);
        TermPtr bound = mk_less(mk_var(d, SemType::degree()),
                                mk_num(n + Rational(1), ""));
        TermPtr cap = mk_forall(
            p.var, SemType::entity(),
            mk_forall(d, SemType::degree(),
                      mk_implies(mk_and_list(ant), bound)));
        return mk_and(witness, cap);
      }
      default:
        throw CompositionError("unhandled packet kind");
    }
  }

  TermPtr wrap_clausal_more(const Packet& p, const TermPtr& core) {
    std::string d = fresh_degree();
    std::string y = fresh_entity();
    TermPtr dv = mk_var(d, SemType::degree());
    TypePtr et = SemType::entity();
    TypePtr nt = SemType::arrow(et, SemType::truth());
    TypePtr mt = SemType::arrow(et, SemType::arrow(SemType::degree(),
                                                   SemType::truth()));
    TermPtr noun = mk_const(p.noun_stem, nt);
    TermPtr many = mk_const("many", mt);

    TermPtr xv = mk_var(p.var, et);
    TermPtr main_part = mk_exists(
        p.var, et,
        mk_and_list({mk_app(noun, xv), mk_app(mk_app(many, xv), dv), core}));

    TermPtr yv = mk_var(y, et);
    TermPtr than = beta_normalize(mk_app(p.than_body, yv));
    auto fv = free_vars(than);
    for (size_t i = p.than_events.size(); i-- > 0;)
      if (fv.count(p.than_events[i]))
        than = mk_exists(p.than_events[i], SemType::event(), than);
    TermPtr than_part = mk_not(mk_exists(
        y, et,
        mk_and_list({mk_app(noun, yv), mk_app(mk_app(many, yv), dv), than})));

    return mk_exists(d, SemType::degree(), mk_and(main_part, than_part));
  }

  // Replace the numeral bound under many(x, n) by a fresh degree variable,
  // returning the numeral through `n`.
  TermPtr generalize_many_num(const TermPtr& t, const TermPtr& dvar,
                              Rational& n) {
    bool found = false;
    TermPtr out = generalize_rec(t, dvar, n, found);
    if (!found)
      throw CompositionError("non-monotone quantifier without a numeral");
    return out;
  }

  TermPtr generalize_rec(const TermPtr& t, const TermPtr& dvar, Rational& n,
                         bool& found) {
    if (!t || found || t->kind == TermKind::Var ||
        t->kind == TermKind::Const || t->kind == TermKind::Num)
      return t;
    if (t->kind == TermKind::App && t->b->kind == TermKind::Num &&
        t->a->kind == TermKind::App && t->a->a->kind == TermKind::Const &&
        t->a->a->name == "many") {
      found = true;
      n = t->b->value;
      return mk_app(t->a, dvar);
    }
    TermPtr a = generalize_rec(t->a, dvar, n, found);
    TermPtr b = generalize_rec(t->b, dvar, n, found);
    if (a == t->a && b == t->b) return t;
    return remake(t, a, b);
  }

  std::string fresh_event() { return "ec" + std::to_string(++event_n_); }
  std::string fresh_entity() { return "xq" + std::to_string(++entity_n_); }
  std::string fresh_degree() { return "dq" + std::to_string(++degree_n_); }

  const TemplateBank& bank_;
  const Lexicon& lex_;
  const ScaleResolver& scales_;
  int event_n_ = 0;
  int entity_n_ = 0;
  int degree_n_ = 0;
  int misc_n_ = 0;
  int packet_pos_ = 0;
};

}  // namespace ccgnli
