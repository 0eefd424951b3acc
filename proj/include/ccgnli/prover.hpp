#pragma once

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "ccgnli/arith.hpp"
#include "ccgnli/congruence.hpp"
#include "ccgnli/lexknow.hpp"
#include "ccgnli/term.hpp"
#include "ccgnli/term_text.hpp"

namespace ccgnli {

// Analytic tableau over ground first-order formulas with degree ordering.
// Branch closure consults congruence closure for entity and event equality
// and the difference-constraint solver for degree atoms. Universals are
// instantiated over ground terms seen on the branch, a bounded number of
// times each, so the search always terminates with one of three statuses.

enum class ProofStatus { Proved, Saturated, BudgetExhausted };

inline const char* proof_status_str(ProofStatus s) {
  switch (s) {
    case ProofStatus::Proved: return "proved";
    case ProofStatus::Saturated: return "saturated";
    case ProofStatus::BudgetExhausted: return "budget-exhausted";
  }
  return "?";
}

struct ProverBudget {
  long long max_steps = 10000;
  int gamma_per_universal = 5;
  long long wall_ms = 10000;
};

struct ProofStep {
  long long index{};
  int branch{};
  std::string rule;
  std::string input;
  std::string output;
};

struct ProofResult {
  ProofStatus status{ProofStatus::Saturated};
  long long steps{};
  int branches{1};
  long long gamma_count{};
  long long wall_ms{};
  bool trace_truncated{};
  std::vector<ProofStep> trace;
  std::string open_branch;  // literals of a saturated branch, if any

  bool proved() const { return status == ProofStatus::Proved; }
};

// One proving attempt: do the axioms and premises entail the goal?
struct ProofTask {
  std::vector<Formula> axioms;
  std::vector<Formula> premises;
  Formula goal;
  ProverBudget budget;
};

class Prover {
public:
  explicit Prover(ProverBudget budget = {}, bool record_trace = false)
      : budget_(budget), record_(record_trace) {}

  // Proved means the assumptions entail the goal.
  ProofResult prove(const std::vector<Formula>& assumptions,
                    const Formula& goal) {
    std::vector<Formula> all = assumptions;
    all.push_back(negate(goal));
    return refute(all);
  }

  ProofResult prove(const ProofTask& task) {
    budget_ = task.budget;
    std::vector<Formula> all = task.axioms;
    all.insert(all.end(), task.premises.begin(), task.premises.end());
    return prove(all, task.goal);
  }

  // Proved means the formulas are jointly unsatisfiable.
  ProofResult refute(const std::vector<Formula>& formulas) {
    auto t0 = std::chrono::steady_clock::now();
    ProofResult res;
    sk_ = 0;
    branch_counter_ = 0;

    Branch init;
    for (const auto& f : formulas) note_terms(init, f.term());
    for (const auto& f : formulas) enqueue(init, f.term());

    std::vector<Branch> stack;
    stack.push_back(std::move(init));
    int explored = 1;

    while (!stack.empty()) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
      if (res.steps >= budget_.max_steps || ms >= budget_.wall_ms) {
        res.status = ProofStatus::BudgetExhausted;
        res.branches = explored;
        res.wall_ms = ms;
        return res;
      }
      Branch& br = stack.back();
      if (br.closed) {
        stack.pop_back();
        continue;
      }
      ++res.steps;
      if (!br.todo.empty()) {
        TermPtr f = br.todo.front();
        br.todo.pop_front();
        dispatch(br, f, res);
        continue;
      }
      if (!br.betas.empty()) {
        BetaItem bi = br.betas.front();
        br.betas.erase(br.betas.begin());
        // a side whose literal is already contradicted on the branch would
        // close immediately, so take the other side without forking
        bool lref = side_refuted(br, bi.left);
        bool rref = side_refuted(br, bi.right);
        if (lref && rref) {
          close_branch(br, res, "both sides of " + bi.input + " refuted");
          continue;
        }
        if (lref || rref) {
          trace(res, br.id, bi.rule, bi.input, lref ? "right" : "left");
          for (const auto& f : lref ? bi.right : bi.left) enqueue(br, f);
          continue;
        }
        trace(res, br.id, bi.rule, bi.input, "split");
        Branch side = br;
        side.id = ++branch_counter_;
        for (const auto& f : bi.right) enqueue(side, f);
        for (const auto& f : bi.left) enqueue(br, f);
        stack.push_back(std::move(side));
        ++explored;
        continue;
      }
      if (fire_gamma(br, res)) continue;
      res.status = ProofStatus::Saturated;
      res.open_branch = branch_summary(br);
      res.branches = explored;
      res.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
      return res;
    }

    res.status = ProofStatus::Proved;
    res.branches = explored;
    res.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return res;
  }

private:
  struct Universal {
    std::string var;
    TypePtr sort;
    TermPtr body;
    std::set<std::string> tried;
    int used{};
  };

  struct BetaItem {
    std::vector<TermPtr> left, right;
    std::string rule, input;
  };

  struct DegAtom {
    ArithOp op{};
    TermPtr lhs, rhs;
  };

  struct Branch {
    int id{};
    std::deque<TermPtr> todo;
    std::vector<BetaItem> betas;
    std::vector<Universal> gammas;
    std::set<std::string> gamma_keys;
    std::set<std::string> seen;
    Congruence cong;
    std::vector<std::pair<TermPtr, TermPtr>> diseqs;
    std::vector<DegAtom> deg_atoms;
    std::set<std::string> deg_keys;  // dedupe for propagated comparisons
    std::vector<TermPtr> pos_lits, neg_lits;
    std::set<std::string> lit_keys;
    std::set<std::string> integral;  // count-valued degree constants
    std::vector<TermPtr> ground[3];  // entity, event, degree; first seen first
    std::set<std::string> ground_keys;
    bool closed{};
    std::string close_reason;
  };

  static int sort_index(const TypePtr& t) {
    switch (t->kind) {
      case TypeKind::Entity: return 0;
      case TypeKind::Event: return 1;
      case TypeKind::Degree: return 2;
      default: return -1;
    }
  }

  static const char* sort_letter(int si) {
    return si == 0 ? "x" : si == 1 ? "e" : "d";
  }

  void trace(ProofResult& res, int branch, const std::string& rule,
             const std::string& in, const std::string& out) {
    if (!record_) return;
    if (res.trace.size() >= 512) {
      res.trace_truncated = true;
      return;
    }
    res.trace.push_back({res.steps, branch, rule, in, out});
  }

  bool enqueue(Branch& br, const TermPtr& f) {
    if (br.closed) return false;
    if (!br.seen.insert(term_str(f)).second) return false;
    br.todo.push_back(f);
    return true;
  }

  void note_ground(Branch& br, const TermPtr& t, int si) {
    if (!br.ground_keys.insert(term_str(t)).second) return;
    br.ground[si].push_back(t);
  }

  // Collect ground entity, event, and degree terms for instantiation.
  void note_terms(Branch& br, const TermPtr& t) {
    if (!t) return;
    if (t->kind == TermKind::Const) {
      int si = sort_index(t->type);
      if (si >= 0) note_ground(br, t, si);
      return;
    }
    if (t->kind == TermKind::Num) {
      note_ground(br, t, 2);
      return;
    }
    if (t->kind == TermKind::Var) return;
    note_terms(br, t->a);
    note_terms(br, t->b);
  }

  void dispatch(Branch& br, const TermPtr& f, ProofResult& res) {
    if (f->kind == TermKind::Not) {
      const TermPtr& g = f->a;
      switch (g->kind) {
        case TermKind::Not:
          trace(res, br.id, "alpha-notnot", term_str(f), term_str(g->a));
          enqueue(br, g->a);
          return;
        case TermKind::Or:
          trace(res, br.id, "alpha-nor", term_str(f), "");
          enqueue(br, mk_not(g->a));
          enqueue(br, mk_not(g->b));
          return;
        case TermKind::Implies:
          trace(res, br.id, "alpha-nimp", term_str(f), "");
          enqueue(br, g->a);
          enqueue(br, mk_not(g->b));
          return;
        case TermKind::And:
          br.betas.push_back(
              {{mk_not(g->a)}, {mk_not(g->b)}, "beta-nand", term_str(f)});
          return;
        case TermKind::Iff:
          br.betas.push_back({{g->a, mk_not(g->b)},
                              {mk_not(g->a), g->b},
                              "beta-niff",
                              term_str(f)});
          return;
        case TermKind::Exists:
          add_universal(br, g->name, g->type, mk_not(g->a));
          trace(res, br.id, "gamma-add", term_str(f), "");
          return;
        case TermKind::Forall: {
          TermPtr w = skolem(br, g->type);
          trace(res, br.id, "delta-nall", term_str(f), term_str(w));
          enqueue(br, mk_not(substitute(g->a, g->name, w)));
          return;
        }
        default:
          add_literal(br, f, res);
          return;
      }
    }
    switch (f->kind) {
      case TermKind::And:
        trace(res, br.id, "alpha-and", term_str(f), "");
        enqueue(br, f->a);
        enqueue(br, f->b);
        return;
      case TermKind::Or:
        br.betas.push_back({{f->a}, {f->b}, "beta-or", term_str(f)});
        return;
      case TermKind::Implies:
        br.betas.push_back({{mk_not(f->a)}, {f->b}, "beta-imp", term_str(f)});
        return;
      case TermKind::Iff:
        br.betas.push_back({{f->a, f->b},
                            {mk_not(f->a), mk_not(f->b)},
                            "beta-iff",
                            term_str(f)});
        return;
      case TermKind::Exists: {
        TermPtr w = skolem(br, f->type);
        trace(res, br.id, "delta-exists", term_str(f), term_str(w));
        enqueue(br, substitute(f->a, f->name, w));
        return;
      }
      case TermKind::Forall:
        add_universal(br, f->name, f->type, f->a);
        trace(res, br.id, "gamma-add", term_str(f), "");
        return;
      default:
        add_literal(br, f, res);
        return;
    }
  }

  TermPtr skolem(Branch& br, const TypePtr& sort) {
    int si = sort_index(sort);
    std::string name = "sk" + std::to_string(++sk_) + "_" +
                       (si >= 0 ? sort_letter(si) : "t");
    TermPtr c = mk_const(name, sort);
    if (si >= 0) note_ground(br, c, si);
    return c;
  }

  void add_universal(Branch& br, const std::string& var, const TypePtr& sort,
                     const TermPtr& body) {
    std::string key = var + "." + term_str(body);
    if (!br.gamma_keys.insert(key).second) return;
    br.gammas.push_back({var, sort, body, {}, 0});
  }

  // An instance is eager when processing it cannot fork the branch:
  // a literal, an alpha shape, a quantifier, or a beta with a refuted side.
  bool eager_instance(Branch& br, const TermPtr& f) {
    bool neg = f->kind == TermKind::Not;
    const TermPtr& g = neg ? f->a : f;
    switch (g->kind) {
      case TermKind::And:
        return !neg ||
               side_refuted(br, {mk_not(g->a)}) ||
               side_refuted(br, {mk_not(g->b)});
      case TermKind::Or:
        return neg || side_refuted(br, {g->a}) || side_refuted(br, {g->b});
      case TermKind::Implies:
        return neg ||
               side_refuted(br, {mk_not(g->a)}) || side_refuted(br, {g->b});
      case TermKind::Iff:
        if (neg)
          return side_refuted(br, {g->a, mk_not(g->b)}) ||
                 side_refuted(br, {mk_not(g->a), g->b});
        return side_refuted(br, {g->a, g->b}) ||
               side_refuted(br, {mk_not(g->a), mk_not(g->b)});
      default:
        return true;
    }
  }

  bool fire_gamma_pass(Branch& br, ProofResult& res, bool eager_only) {
    for (auto& u : br.gammas) {
      if (u.used >= budget_.gamma_per_universal) continue;
      int si = sort_index(u.sort);
      if (si < 0) continue;
      if (br.ground[si].empty()) {
        if (eager_only) continue;
        // default witness keeps universals contentful on empty sorts
        note_ground(br, mk_const(std::string("w_") + sort_letter(si), u.sort),
                    si);
      }
      for (size_t i = 0; i < br.ground[si].size(); ++i) {
        TermPtr cand = br.ground[si][i];
        std::string ck = term_str(cand);
        if (u.tried.count(ck)) continue;
        TermPtr inst = substitute(u.body, u.var, cand);
        if (br.seen.count(term_str(inst))) {
          u.tried.insert(ck);
          continue;
        }
        if (eager_only && !eager_instance(br, inst)) continue;
        u.tried.insert(ck);
        enqueue(br, inst);
        ++u.used;
        ++res.gamma_count;
        trace(res, br.id, "gamma-inst", u.var + "." + term_str(u.body),
              term_str(cand));
        return true;
      }
    }
    return false;
  }

  // Instances that immediately simplify come before instances that fork.
  bool fire_gamma(Branch& br, ProofResult& res) {
    if (fire_gamma_pass(br, res, true)) return true;
    return fire_gamma_pass(br, res, false);
  }

  static bool literal_shape(const TermPtr& t) {
    switch (t->kind) {
      case TermKind::App:
      case TermKind::Const:
      case TermKind::Eq:
      case TermKind::Less:
      case TermKind::Leq:
        return true;
      default:
        return false;
    }
  }

  // True when adding any formula of the side would close the branch at once.
  bool side_refuted(Branch& br, const std::vector<TermPtr>& side) {
    for (const auto& f : side) {
      bool neg = f->kind == TermKind::Not;
      const TermPtr& atom = neg ? f->a : f;
      if (!literal_shape(atom)) continue;
      if (br.lit_keys.count((neg ? "+" : "-") + term_str(atom))) return true;
      if (atom->kind == TermKind::Eq &&
          type_of(atom->a)->kind != TypeKind::Degree) {
        if (neg && br.cong.equal(atom->a, atom->b)) return true;
        if (!neg) {
          for (const auto& [c, d] : br.diseqs) {
            if ((br.cong.equal(atom->a, c) && br.cong.equal(atom->b, d)) ||
                (br.cong.equal(atom->a, d) && br.cong.equal(atom->b, c)))
              return true;
          }
        }
        continue;
      }
      if (atom->kind == TermKind::Less || atom->kind == TermKind::Leq ||
          atom->kind == TermKind::Eq) {
        bool less = atom->kind == TermKind::Less;
        DegAtom d;
        if (atom->kind == TermKind::Eq)
          d = {neg ? ArithOp::Neq : ArithOp::Eq, atom->a, atom->b};
        else if (neg == less)
          d = {ArithOp::Le, neg ? atom->b : atom->a, neg ? atom->a : atom->b};
        else
          d = {ArithOp::Lt, neg ? atom->b : atom->a, neg ? atom->a : atom->b};
        std::vector<ArithAtom> atoms;
        for (const auto& g : br.deg_atoms)
          atoms.push_back({g.op, to_arith(br, g.lhs), to_arith(br, g.rhs)});
        atoms.push_back({d.op, to_arith(br, d.lhs), to_arith(br, d.rhs)});
        try {
          if (!arith_satisfiable(atoms)) return true;
        } catch (const UnitMismatchError&) {
        }
        continue;
      }
      const auto& others = neg ? br.pos_lits : br.neg_lits;
      for (const auto& o : others) {
        if (head_name(atom) != head_name(o) || spine_len(atom) != spine_len(o))
          continue;
        if (br.cong.equal(atom, o)) return true;
      }
    }
    return false;
  }

  static std::string head_name(const TermPtr& atom) {
    TermPtr h = atom;
    while (h->kind == TermKind::App) h = h->a;
    return h->kind == TermKind::Const ? h->name : "";
  }

  static int spine_len(const TermPtr& atom) {
    int n = 0;
    TermPtr h = atom;
    while (h->kind == TermKind::App) {
      ++n;
      h = h->a;
    }
    return n;
  }

  void close_branch(Branch& br, ProofResult& res, const std::string& why) {
    br.closed = true;
    br.close_reason = why;
    trace(res, br.id, "close", why, "");
  }

  ArithTerm to_arith(const Branch& br, const TermPtr& t) const {
    if (t->kind == TermKind::Num) return arith_lit(t->value, t->unit);
    return arith_var(t->name, br.integral.count(t->name) > 0);
  }

  void check_arith(Branch& br, ProofResult& res) {
    std::vector<ArithAtom> atoms;
    atoms.reserve(br.deg_atoms.size());
    for (const auto& d : br.deg_atoms)
      atoms.push_back({d.op, to_arith(br, d.lhs), to_arith(br, d.rhs)});
    try {
      if (!arith_satisfiable(atoms))
        close_branch(br, res, "degree constraints unsatisfiable");
    } catch (const UnitMismatchError&) {
      // incomparable scales never close a branch
    }
  }

  void check_diseqs(Branch& br, ProofResult& res) {
    if (br.cong.num_clash()) {
      close_branch(br, res, "distinct numerals identified");
      return;
    }
    for (const auto& [a, b] : br.diseqs) {
      if (br.cong.equal(a, b)) {
        close_branch(br, res,
                     term_str(a) + " = " + term_str(b) + " and its negation");
        return;
      }
    }
  }

  void check_pred_pairs(Branch& br, ProofResult& res) {
    for (const auto& p : br.pos_lits) {
      for (const auto& n : br.neg_lits) {
        if (head_name(p) != head_name(n) || spine_len(p) != spine_len(n))
          continue;
        if (br.cong.equal(p, n)) {
          close_branch(br, res, term_str(p) + " against " + term_str(n));
          return;
        }
      }
    }
  }

  void check_pred_against(Branch& br, ProofResult& res, const TermPtr& atom,
                          bool positive) {
    const auto& others = positive ? br.neg_lits : br.pos_lits;
    for (const auto& o : others) {
      if (head_name(atom) != head_name(o) || spine_len(atom) != spine_len(o))
        continue;
      if (br.cong.equal(atom, o)) {
        close_branch(br, res, term_str(atom) + " against " + term_str(o));
        return;
      }
    }
  }

  void add_literal(Branch& br, const TermPtr& f, ProofResult& res) {
    bool pos = f->kind != TermKind::Not;
    TermPtr atom = pos ? f : f->a;
    std::string lk = (pos ? "+" : "-") + term_str(atom);
    if (!br.lit_keys.insert(lk).second) return;
    trace(res, br.id, "literal", lk, "");
    note_terms(br, atom);

    if (atom->kind == TermKind::Eq) {
      TypePtr ty = type_of(atom->a);
      bool degree = ty->kind == TypeKind::Degree;
      if (degree)
        br.deg_atoms.push_back(
            {pos ? ArithOp::Eq : ArithOp::Neq, atom->a, atom->b});
      if (pos) {
        br.cong.add_eq(atom->a, atom->b);
        check_diseqs(br, res);
        if (!br.closed) check_pred_pairs(br, res);
        if (!br.closed) propagate_degrees(br, res);
      } else {
        br.diseqs.push_back({atom->a, atom->b});
        if (br.cong.equal(atom->a, atom->b))
          close_branch(br, res, lk + " already entailed equal");
      }
      if (!br.closed && degree) check_arith(br, res);
      return;
    }

    if (atom->kind == TermKind::Less || atom->kind == TermKind::Leq) {
      bool less = atom->kind == TermKind::Less;
      DegAtom d;
      if (pos)
        d = {less ? ArithOp::Lt : ArithOp::Le, atom->a, atom->b};
      else
        d = {less ? ArithOp::Le : ArithOp::Lt, atom->b, atom->a};
      br.deg_atoms.push_back(d);
      check_arith(br, res);
      return;
    }

    // predicate atom; count-valued slots of `many` mark integral degrees
    if (head_name(atom) == "many" && spine_len(atom) == 2 &&
        atom->b->kind == TermKind::Const)
      br.integral.insert(atom->b->name);
    br.cong.intern(atom);
    (pos ? br.pos_lits : br.neg_lits).push_back(atom);
    check_pred_against(br, res, atom, pos);
    if (!br.closed) propagate_degrees(br, res);
  }

  static std::vector<TermPtr> spine_args(const TermPtr& atom) {
    std::vector<TermPtr> args;
    TermPtr h = atom;
    while (h->kind == TermKind::App) {
      args.push_back(h->b);
      h = h->a;
    }
    std::reverse(args.begin(), args.end());
    return args;
  }

  // Degree slots read as "at least", so P(x̄,d1) next to ¬P(x̄,d2) over the
  // same x̄ forces d1 < d2. This builds the downward-closure background
  // theory into branch closure instead of instantiating it as formulas.
  void propagate_degrees(Branch& br, ProofResult& res) {
    bool added = false;
    for (const auto& p : br.pos_lits) {
      if (br.closed) return;
      std::vector<TermPtr> pa = spine_args(p);
      if (pa.empty() || type_of(pa.back())->kind != TypeKind::Degree) continue;
      for (const auto& n : br.neg_lits) {
        if (head_name(p) != head_name(n) || spine_len(p) != spine_len(n))
          continue;
        std::vector<TermPtr> na = spine_args(n);
        bool same = true;
        for (size_t i = 0; same && i + 1 < pa.size(); ++i)
          same = br.cong.equal(pa[i], na[i]);
        if (!same) continue;
        std::string key =
            "<" + term_str(pa.back()) + "|" + term_str(na.back());
        if (!br.deg_keys.insert(key).second) continue;
        br.deg_atoms.push_back({ArithOp::Lt, pa.back(), na.back()});
        trace(res, br.id, "degree-mono",
              term_str(p) + " against -" + term_str(n),
              term_str(pa.back()) + " < " + term_str(na.back()));
        added = true;
      }
    }
    if (added) check_arith(br, res);
  }

  std::string branch_summary(const Branch& br) const {
    std::vector<std::string> bits;
    for (const auto& p : br.pos_lits) bits.push_back(term_str(p));
    for (const auto& n : br.neg_lits) bits.push_back("-" + term_str(n));
    for (const auto& d : br.diseqs)
      bits.push_back("-(" + term_str(d.first) + " = " + term_str(d.second) +
                     ")");
    for (const auto& d : br.deg_atoms)
      bits.push_back(arith_atom_str(
          {d.op, ArithTerm{false, Rational(), "", term_str(d.lhs), false},
           ArithTerm{false, Rational(), "", term_str(d.rhs), false}}));
    if (bits.size() > 24) {
      bits.resize(24);
      bits.push_back("...");
    }
    return join(bits, ", ");
  }

  ProverBudget budget_;
  bool record_;
  long long sk_{};
  int branch_counter_{};
};

// ---------------------------------------------------------------------------
// Background theory: every degree slot reads as "at least", so a predicate
// that holds at a degree holds at every smaller one.

inline std::vector<Formula> background_axioms(const std::vector<Formula>& fs) {
  auto preds = collect_predicates(fs);
  std::vector<Formula> out;
  for (const auto& [name, sig] : preds) {
    if (!sig.degree_final()) continue;
    std::vector<TypePtr> args = sig.args;
    args.push_back(SemType::degree());
    size_t k = sig.args.size();
    const std::string& pred = name;
    TermPtr body =
        detail::forall_over(args, [&](const std::vector<TermPtr>& vs) {
          std::vector<TermPtr> at_d1(vs.begin(), vs.begin() + k);
          std::vector<TermPtr> at_d2(vs.begin(), vs.begin() + k - 1);
          at_d2.push_back(vs[k]);
          return mk_implies(mk_and(detail::apply_pred(pred, sig.args, at_d1),
                                   mk_leq(vs[k], vs[k - 1])),
                            detail::apply_pred(pred, sig.args, at_d2));
        });
    out.push_back(Formula::make(body));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Event coreference: a premise event introduced with a verb and a named
// subject is read as the unique such event, so repeated mentions across
// sentences resolve to one shared constant.

namespace detail {

inline void and_parts(const TermPtr& t, std::vector<TermPtr>& out) {
  if (t->kind == TermKind::And) {
    and_parts(t->a, out);
    and_parts(t->b, out);
    return;
  }
  out.push_back(t);
}

}  // namespace detail

inline Formula merge_events(const Formula& f) {
  TermPtr body = f.term();
  std::vector<std::pair<std::string, TypePtr>> binders;
  while (body->kind == TermKind::Exists) {
    binders.push_back({body->name, body->type});
    body = body->a;
  }
  if (binders.empty()) return f;

  std::vector<TermPtr> parts;
  detail::and_parts(body, parts);

  std::map<std::string, std::string> canon;  // binder var -> event constant
  for (const auto& [var, sort] : binders) {
    if (sort->kind != TypeKind::Event) continue;
    std::string verb, subj;
    int verbs = 0, subjs = 0;
    for (const auto& c : parts) {
      if (c->kind == TermKind::App && c->a->kind == TermKind::Const &&
          c->b->kind == TermKind::Var && c->b->name == var) {
        ++verbs;
        verb = c->a->name;
      }
      if (c->kind == TermKind::Eq && c->a->kind == TermKind::App &&
          c->a->a->kind == TermKind::Const && c->a->a->name == "subj" &&
          c->a->b->kind == TermKind::Var && c->a->b->name == var &&
          c->b->kind == TermKind::Const &&
          c->b->type->kind == TypeKind::Entity) {
        ++subjs;
        subj = c->b->name;
      }
    }
    if (verbs == 1 && subjs == 1) canon[var] = "ev_" + verb + "_" + subj;
  }
  if (canon.empty()) return f;

  TermPtr matrix = body;
  for (const auto& [var, name] : canon)
    matrix = substitute(matrix, var, mk_const(name, SemType::event()));
  for (size_t i = binders.size(); i-- > 0;) {
    if (canon.count(binders[i].first)) continue;
    matrix = mk_exists(binders[i].first, binders[i].second, matrix);
  }
  return Formula::make(matrix);
}

// ---------------------------------------------------------------------------
// Three-way entailment decision.

enum class Verdict { Yes, No, Unknown };

inline const char* verdict_str(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    case Verdict::Unknown: return "unknown";
  }
  return "?";
}

inline Verdict parse_verdict(const std::string& s) {
  if (s == "yes") return Verdict::Yes;
  if (s == "no") return Verdict::No;
  if (s == "unknown") return Verdict::Unknown;
  throw ParseError("unknown entailment label '" + s + "'");
}

struct DecideOptions {
  bool event_coref = true;
  bool binary_labels = false;  // skip the refutation attempt
  bool use_lexical = true;
  bool prove = true;  // off builds the task without running the prover
  ProverBudget budget;
  bool record_trace = false;
};

struct Decision {
  Verdict verdict{Verdict::Unknown};
  ProofResult positive;
  std::optional<ProofResult> negative;
  std::vector<LexicalAxiom> axioms;
  std::vector<Formula> background;
  std::vector<Formula> merged_premises;  // what the prover actually saw
  Formula goal;                          // positive-attempt goal
};

// The full task a decision rests on, for export or replay. The background
// schemas ride along as explicit axiom formulas here; internally the prover
// applies them as its degree monotonicity rule instead.
inline ProofTask decision_task(const Decision& d,
                               const ProverBudget& budget = {}) {
  ProofTask t{{}, d.merged_premises, d.goal, budget};
  for (const auto& ax : d.axioms) t.axioms.push_back(ax.formula);
  for (const auto& bg : d.background) t.axioms.push_back(bg);
  return t;
}

// Prove the hypothesis for yes; failing that, prove its negation for no.
// Inconsistent premises prove anything, so they land on yes.
inline Decision decide_entailment(const std::vector<Formula>& premises,
                                  const Formula& hypothesis,
                                  const KnowledgeBase& kb,
                                  const DecideOptions& opt = {}) {
  Decision d;
  if (opt.use_lexical) d.axioms = synthesize_axioms(premises, hypothesis, kb);

  std::vector<Formula> scope = premises;
  scope.push_back(hypothesis);
  for (const auto& ax : d.axioms) scope.push_back(ax.formula);
  d.background = background_axioms(scope);

  for (const auto& p : premises)
    d.merged_premises.push_back(opt.event_coref ? merge_events(p) : p);
  d.goal = hypothesis;
  if (!opt.prove) return d;

  // The background theory is built into the prover as its degree
  // monotonicity rule; the formulas above feed export and diagnostics.
  std::vector<Formula> assumptions;
  for (const auto& ax : d.axioms) assumptions.push_back(ax.formula);
  for (const auto& p : d.merged_premises) assumptions.push_back(p);

  Prover prover(opt.budget, opt.record_trace);
  d.positive = prover.prove(assumptions, hypothesis);
  if (d.positive.proved()) {
    d.verdict = Verdict::Yes;
    return d;
  }
  if (!opt.binary_labels) {
    Formula h = opt.event_coref ? merge_events(hypothesis) : hypothesis;
    d.negative = prover.prove(assumptions, negate(h));
    if (d.negative->proved()) {
      d.verdict = Verdict::No;
      return d;
    }
  }
  d.verdict = Verdict::Unknown;
  return d;
}

}  // namespace ccgnli
