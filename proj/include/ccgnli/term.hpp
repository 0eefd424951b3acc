#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "ccgnli/rational.hpp"
#include "ccgnli/semtype.hpp"
#include "ccgnli/util.hpp"

namespace ccgnli {

enum class TermKind {
  Var, Const, Num,
  Abs, App,
  Not, And, Or, Implies, Iff,
  Exists, Forall,
  Eq, Less, Leq,
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

// Immutable lambda-term node. Field use by kind:
//   Var/Const : name, type
//   Num       : value, unit ("" when untagged)
//   Abs       : name/type of binder, a = body
//   App       : a = function, b = argument
//   Not       : a
//   And/Or/Implies/Iff/Eq/Less/Leq : a, b
//   Exists/Forall : name/type of binder, a = body
class Term {
public:
  TermKind kind{};
  std::string name;
  TypePtr type;
  Rational value;
  std::string unit;
  TermPtr a, b;
};

inline TermPtr mk_var(std::string name, TypePtr type) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Var;
  t->name = std::move(name);
  t->type = std::move(type);
  return t;
}

inline TermPtr mk_const(std::string name, TypePtr type) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Const;
  t->name = std::move(name);
  t->type = std::move(type);
  return t;
}

inline TermPtr mk_num(Rational value, std::string unit = "") {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Num;
  t->value = value;
  t->unit = std::move(unit);
  return t;
}

inline TermPtr mk_abs(std::string var, TypePtr var_type, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::Abs;
  t->name = std::move(var);
  t->type = std::move(var_type);
  t->a = std::move(body);
  return t;
}

inline TermPtr mk_app(TermPtr f, TermPtr x) {
  auto t = std::make_shared<Term>();
  t->kind = TermKind::App;
  t->a = std::move(f);
  t->b = std::move(x);
  return t;
}

inline TermPtr mk_unary(TermKind k, TermPtr x) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->a = std::move(x);
  return t;
}

inline TermPtr mk_not(TermPtr x) { return mk_unary(TermKind::Not, std::move(x)); }

inline TermPtr mk_binary(TermKind k, TermPtr l, TermPtr r) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->a = std::move(l);
  t->b = std::move(r);
  return t;
}

inline TermPtr mk_and(TermPtr l, TermPtr r) { return mk_binary(TermKind::And, std::move(l), std::move(r)); }
inline TermPtr mk_or(TermPtr l, TermPtr r) { return mk_binary(TermKind::Or, std::move(l), std::move(r)); }
inline TermPtr mk_implies(TermPtr l, TermPtr r) { return mk_binary(TermKind::Implies, std::move(l), std::move(r)); }
inline TermPtr mk_iff(TermPtr l, TermPtr r) { return mk_binary(TermKind::Iff, std::move(l), std::move(r)); }
inline TermPtr mk_eq(TermPtr l, TermPtr r) { return mk_binary(TermKind::Eq, std::move(l), std::move(r)); }
inline TermPtr mk_less(TermPtr l, TermPtr r) { return mk_binary(TermKind::Less, std::move(l), std::move(r)); }
inline TermPtr mk_leq(TermPtr l, TermPtr r) { return mk_binary(TermKind::Leq, std::move(l), std::move(r)); }

inline TermPtr mk_quant(TermKind k, std::string var, TypePtr var_type, TermPtr body) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->name = std::move(var);
  t->type = std::move(var_type);
  t->a = std::move(body);
  return t;
}

inline TermPtr mk_exists(std::string v, TypePtr ty, TermPtr body) {
  return mk_quant(TermKind::Exists, std::move(v), std::move(ty), std::move(body));
}
inline TermPtr mk_forall(std::string v, TypePtr ty, TermPtr body) {
  return mk_quant(TermKind::Forall, std::move(v), std::move(ty), std::move(body));
}

// Right-folds a list into a conjunction chain: a & (b & c).
inline TermPtr mk_and_list(const std::vector<TermPtr>& xs) {
  if (xs.empty()) throw CompositionError("empty conjunction");
  TermPtr out = xs.back();
  for (size_t i = xs.size() - 1; i-- > 0;) out = mk_and(xs[i], out);
  return out;
}

inline bool is_binder(TermKind k) {
  return k == TermKind::Abs || k == TermKind::Exists || k == TermKind::Forall;
}

inline bool is_connective(TermKind k) {
  return k == TermKind::And || k == TermKind::Or || k == TermKind::Implies ||
         k == TermKind::Iff;
}

inline bool is_comparison(TermKind k) {
  return k == TermKind::Eq || k == TermKind::Less || k == TermKind::Leq;
}

// ---------------------------------------------------------------------------
// Free variables, alpha-equality, substitution

inline void free_vars_into(const TermPtr& t, std::set<std::string>& bound,
                           std::map<std::string, TypePtr>& out) {
  if (!t) return;
  switch (t->kind) {
    case TermKind::Var:
      if (!bound.count(t->name)) out.emplace(t->name, t->type);
      return;
    case TermKind::Const:
    case TermKind::Num:
      return;
    default: break;
  }
  if (is_binder(t->kind)) {
    bool inserted = bound.insert(t->name).second;
    free_vars_into(t->a, bound, out);
    if (inserted) bound.erase(t->name);
    return;
  }
  free_vars_into(t->a, bound, out);
  free_vars_into(t->b, bound, out);
}

inline std::map<std::string, TypePtr> free_vars(const TermPtr& t) {
  std::set<std::string> bound;
  std::map<std::string, TypePtr> out;
  free_vars_into(t, bound, out);
  return out;
}

inline bool is_closed(const TermPtr& t) { return free_vars(t).empty(); }

inline bool alpha_equal_rec(const TermPtr& x, const TermPtr& y,
                            std::map<std::string, std::string>& lmap,
                            std::map<std::string, std::string>& rmap,
                            int& counter) {
  if (!x || !y) return x == y;
  if (x->kind != y->kind) return false;
  switch (x->kind) {
    case TermKind::Var: {
      auto lx = lmap.find(x->name);
      auto ry = rmap.find(y->name);
      if ((lx == lmap.end()) != (ry == rmap.end())) return false;
      if (lx != lmap.end()) return lx->second == ry->second;
      return x->name == y->name && type_equal(x->type, y->type);
    }
    case TermKind::Const:
      return x->name == y->name && type_equal(x->type, y->type);
    case TermKind::Num:
      return x->value == y->value && x->unit == y->unit;
    default: break;
  }
  if (is_binder(x->kind)) {
    if (!type_equal(x->type, y->type)) return false;
    std::string fresh = "#" + std::to_string(counter++);
    auto lold = lmap.find(x->name);
    auto rold = rmap.find(y->name);
    std::string lprev = lold == lmap.end() ? "" : lold->second;
    std::string rprev = rold == rmap.end() ? "" : rold->second;
    bool lhad = lold != lmap.end(), rhad = rold != rmap.end();
    lmap[x->name] = fresh;
    rmap[y->name] = fresh;
    bool ok = alpha_equal_rec(x->a, y->a, lmap, rmap, counter);
    if (lhad) lmap[x->name] = lprev; else lmap.erase(x->name);
    if (rhad) rmap[y->name] = rprev; else rmap.erase(y->name);
    return ok;
  }
  return alpha_equal_rec(x->a, y->a, lmap, rmap, counter) &&
         alpha_equal_rec(x->b, y->b, lmap, rmap, counter);
}

inline bool alpha_equal(const TermPtr& x, const TermPtr& y) {
  std::map<std::string, std::string> lmap, rmap;
  int counter = 0;
  return alpha_equal_rec(x, y, lmap, rmap, counter);
}

// Picks a name not free in any of the given maps.
inline std::string fresh_name(const std::string& base,
                              const std::map<std::string, TypePtr>& avoid1,
                              const std::map<std::string, TypePtr>& avoid2) {
  std::string candidate = base;
  int i = 0;
  while (avoid1.count(candidate) || avoid2.count(candidate))
    candidate = base + "_r" + std::to_string(++i);
  return candidate;
}

// Capture-avoiding substitution of `replacement` for free occurrences of
// variable `var`.
inline TermPtr substitute(const TermPtr& t, const std::string& var,
                          const TermPtr& replacement) {
  if (!t) return t;
  switch (t->kind) {
    case TermKind::Var:
      return t->name == var ? replacement : t;
    case TermKind::Const:
    case TermKind::Num:
      return t;
    default: break;
  }
  if (is_binder(t->kind)) {
    if (t->name == var) return t;
    auto rep_free = free_vars(replacement);
    if (rep_free.count(t->name)) {
      auto body_free = free_vars(t->a);
      std::string nn = fresh_name(t->name, rep_free, body_free);
      TermPtr renamed_body = substitute(t->a, t->name, mk_var(nn, t->type));
      return mk_quant(t->kind, nn, t->type,
                      substitute(renamed_body, var, replacement));
    }
    return mk_quant(t->kind, t->name, t->type,
                    substitute(t->a, var, replacement));
  }
  auto t2 = std::make_shared<Term>(*t);
  t2->a = substitute(t->a, var, replacement);
  t2->b = substitute(t->b, var, replacement);
  return t2;
}

// Replaces every constant named `name` by `replacement`. Used by template
// instantiation, where holes and markers are represented as constants.
inline TermPtr replace_const(const TermPtr& t, const std::string& name,
                             const TermPtr& replacement) {
  if (!t) return t;
  if (t->kind == TermKind::Const)
    return t->name == name ? replacement : t;
  if (t->kind == TermKind::Var || t->kind == TermKind::Num) return t;
  auto t2 = std::make_shared<Term>(*t);
  t2->a = replace_const(t->a, name, replacement);
  t2->b = replace_const(t->b, name, replacement);
  return t2;
}

inline bool contains_const(const TermPtr& t, const std::string& name) {
  if (!t) return false;
  if (t->kind == TermKind::Const) return t->name == name;
  if (t->kind == TermKind::Var || t->kind == TermKind::Num) return false;
  return contains_const(t->a, name) || contains_const(t->b, name);
}

inline bool contains_abs(const TermPtr& t) {
  if (!t) return false;
  if (t->kind == TermKind::Abs) return true;
  if (t->kind == TermKind::Var || t->kind == TermKind::Const ||
      t->kind == TermKind::Num)
    return false;
  return contains_abs(t->a) || contains_abs(t->b);
}

// ---------------------------------------------------------------------------
// Typing

inline std::string term_str(const TermPtr& t);  // forward (term_text.hpp)

inline TypePtr type_of_rec(const TermPtr& t,
                           std::map<std::string, TypePtr>& env) {
  switch (t->kind) {
    case TermKind::Var: {
      auto it = env.find(t->name);
      if (it == env.end()) {
        if (t->type) return t->type;  // free variable with intrinsic type
        throw UnboundVariableError(t->name);
      }
      return it->second;
    }
    case TermKind::Const:
      if (!t->type) throw TypeError(t->name, "typed constant", "untyped");
      return t->type;
    case TermKind::Num:
      return SemType::degree();
    case TermKind::Abs: {
      auto prev = env.find(t->name);
      TypePtr saved = prev == env.end() ? nullptr : prev->second;
      env[t->name] = t->type;
      TypePtr body = type_of_rec(t->a, env);
      if (saved) env[t->name] = saved; else env.erase(t->name);
      return SemType::arrow(t->type, body);
    }
    case TermKind::App: {
      TypePtr f = type_of_rec(t->a, env);
      TypePtr x = type_of_rec(t->b, env);
      if (f->kind != TypeKind::Arrow)
        throw TypeError(term_str(t->a), "function type", type_str(f));
      if (!type_equal(f->from, x))
        throw TypeError(term_str(t->b), type_str(f->from), type_str(x));
      return f->to;
    }
    case TermKind::Not: {
      TypePtr x = type_of_rec(t->a, env);
      if (x->kind != TypeKind::Truth)
        throw TypeError(term_str(t->a), "T", type_str(x));
      return SemType::truth();
    }
    case TermKind::And:
    case TermKind::Or:
    case TermKind::Implies:
    case TermKind::Iff: {
      TypePtr l = type_of_rec(t->a, env);
      TypePtr r = type_of_rec(t->b, env);
      if (l->kind != TypeKind::Truth)
        throw TypeError(term_str(t->a), "T", type_str(l));
      if (r->kind != TypeKind::Truth)
        throw TypeError(term_str(t->b), "T", type_str(r));
      return SemType::truth();
    }
    case TermKind::Exists:
    case TermKind::Forall: {
      auto prev = env.find(t->name);
      TypePtr saved = prev == env.end() ? nullptr : prev->second;
      env[t->name] = t->type;
      TypePtr body = type_of_rec(t->a, env);
      if (saved) env[t->name] = saved; else env.erase(t->name);
      if (body->kind != TypeKind::Truth)
        throw TypeError(term_str(t->a), "T", type_str(body));
      return SemType::truth();
    }
    case TermKind::Eq: {
      TypePtr l = type_of_rec(t->a, env);
      TypePtr r = type_of_rec(t->b, env);
      if (!type_equal(l, r))
        throw TypeError(term_str(t), type_str(l), type_str(r));
      return SemType::truth();
    }
    case TermKind::Less:
    case TermKind::Leq: {
      TypePtr l = type_of_rec(t->a, env);
      TypePtr r = type_of_rec(t->b, env);
      if (l->kind != TypeKind::Degree)
        throw TypeError(term_str(t->a), "D", type_str(l));
      if (r->kind != TypeKind::Degree)
        throw TypeError(term_str(t->b), "D", type_str(r));
      // Comparing literals tagged with different units is a type error.
      if (t->a->kind == TermKind::Num && t->b->kind == TermKind::Num &&
          t->a->unit != t->b->unit)
        throw TypeError(term_str(t), "matching unit tags",
                        t->a->unit + " vs " + t->b->unit);
      return SemType::truth();
    }
  }
  throw Error("unreachable term kind");
}

inline TypePtr type_of(const TermPtr& t,
                       const std::map<std::string, TypePtr>& env = {}) {
  std::map<std::string, TypePtr> e = env;
  return type_of_rec(t, e);
}

// ---------------------------------------------------------------------------
// Beta-normalization (normal order). Terminates on well-typed terms.

inline TermPtr beta_normalize(const TermPtr& t) {
  if (!t) return t;
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Const:
    case TermKind::Num:
      return t;
    case TermKind::App: {
      TermPtr f = beta_normalize(t->a);
      if (f->kind == TermKind::Abs)
        return beta_normalize(substitute(f->a, f->name, t->b));
      TermPtr x = beta_normalize(t->b);
      if (f == t->a && x == t->b) return t;
      return mk_app(f, x);
    }
    default: break;
  }
  if (is_binder(t->kind)) {
    TermPtr body = beta_normalize(t->a);
    if (body == t->a) return t;
    return mk_quant(t->kind, t->name, t->type, body);
  }
  TermPtr l = beta_normalize(t->a);
  TermPtr r = beta_normalize(t->b);
  if (l == t->a && r == t->b) return t;
  auto t2 = std::make_shared<Term>(*t);
  t2->a = l;
  t2->b = r;
  return t2;
}

// ---------------------------------------------------------------------------
// Rectification: renames every bound variable to a unique canonical name,
// prefixed by sort (events e1.., degrees d1.., entities x1.., other v1..).

struct RectifyState {
  int e = 0, d = 0, x = 0, v = 0;
  std::string next(const TypePtr& ty) {
    if (ty && ty->kind == TypeKind::Event) return "e" + std::to_string(++e);
    if (ty && ty->kind == TypeKind::Degree) return "d" + std::to_string(++d);
    if (ty && ty->kind == TypeKind::Entity) return "x" + std::to_string(++x);
    return "v" + std::to_string(++v);
  }
};

inline TermPtr rectify_rec(const TermPtr& t,
                           std::map<std::string, std::string>& renames,
                           RectifyState& st) {
  if (!t) return t;
  switch (t->kind) {
    case TermKind::Var: {
      auto it = renames.find(t->name);
      if (it != renames.end()) return mk_var(it->second, t->type);
      return t;
    }
    case TermKind::Const:
    case TermKind::Num:
      return t;
    default: break;
  }
  if (is_binder(t->kind)) {
    std::string nn = st.next(t->type);
    auto prev = renames.find(t->name);
    std::string saved = prev == renames.end() ? "" : prev->second;
    bool had = prev != renames.end();
    renames[t->name] = nn;
    TermPtr body = rectify_rec(t->a, renames, st);
    if (had) renames[t->name] = saved; else renames.erase(t->name);
    return mk_quant(t->kind, nn, t->type, body);
  }
  auto t2 = std::make_shared<Term>(*t);
  t2->a = rectify_rec(t->a, renames, st);
  t2->b = rectify_rec(t->b, renames, st);
  return t2;
}

inline TermPtr rectify(const TermPtr& t) {
  std::map<std::string, std::string> renames;
  RectifyState st;
  return rectify_rec(t, renames, st);
}

// ---------------------------------------------------------------------------
// Formula: closed, beta-normal, Abs-free, Truth-typed, rectified term.

class Formula {
public:
  Formula() = default;

  static Formula make(const TermPtr& t) {
    TermPtr n = rectify(beta_normalize(t));
    if (contains_abs(n))
      throw TypeError(term_str(n), "first-order formula", "lambda remains");
    auto fv = free_vars(n);
    if (!fv.empty())
      throw TypeError(term_str(n), "closed formula",
                      "free variable " + fv.begin()->first);
    TypePtr ty = type_of(n);
    if (ty->kind != TypeKind::Truth)
      throw TypeError(term_str(n), "T", type_str(ty));
    Formula f;
    f.term_ = n;
    return f;
  }

  const TermPtr& term() const { return term_; }
  bool valid() const { return term_ != nullptr; }

private:
  TermPtr term_;
};

inline Formula negate(const Formula& f) {
  return Formula::make(mk_not(f.term()));
}

}  // namespace ccgnli
