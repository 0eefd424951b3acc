#pragma once

#include <cctype>
#include <map>
#include <string>
#include <vector>

#include "ccgnli/term.hpp"

namespace ccgnli {

// ---------------------------------------------------------------------------
// Printing.
//
// Concrete syntax, loosest to tightest:
//   \x:T. B   exists x. B   forall x. B     (scope extends as far as possible)
//   <->   ->   |   &   -   = < <=   f(a,b)
// Quantifier bodies that are connectives are printed inside parens for
// readability; a quantifier that is not the final operand of its enclosing
// connective is parenthesized so the maximal-scope reading stays correct.

inline int term_prec(TermKind k) {
  switch (k) {
    case TermKind::Abs:
    case TermKind::Exists:
    case TermKind::Forall: return 0;
    case TermKind::Iff: return 1;
    case TermKind::Implies: return 2;
    case TermKind::Or: return 3;
    case TermKind::And: return 4;
    case TermKind::Not: return 5;
    case TermKind::Eq:
    case TermKind::Less:
    case TermKind::Leq: return 6;
    default: return 10;
  }
}

inline TypePtr binder_convention_type(const std::string& name) {
  char c = name.empty() ? 'x' : name[0];
  if (c == 'e') return SemType::event();
  if (c == 'd' || c == 'n' || c == 'm') return SemType::degree();
  return SemType::entity();
}

inline std::string render_term(const TermPtr& t, int ctx, bool tail);

inline std::string render_bare(const TermPtr& t, bool tail) {
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Const:
      return t->name;
    case TermKind::Num:
      return t->unit.empty() ? t->value.str() : t->value.str() + " " + t->unit;
    case TermKind::App: {
      std::vector<TermPtr> args;
      TermPtr head = t;
      while (head->kind == TermKind::App) {
        args.push_back(head->b);
        head = head->a;
      }
      std::string s;
      if (head->kind == TermKind::Var || head->kind == TermKind::Const)
        s = head->name;
      else
        s = "(" + render_term(head, 0, true) + ")";
      s += "(";
      for (size_t i = args.size(); i-- > 0;) {
        s += render_term(args[i], 0, true);
        if (i > 0) s += ", ";
      }
      s += ")";
      return s;
    }
    case TermKind::Abs: {
      std::string s = "\\" + t->name + ":" + type_str(t->type) + ". ";
      if (is_connective(t->a->kind))
        s += "(" + render_term(t->a, 0, true) + ")";
      else
        s += render_term(t->a, 0, tail);
      return s;
    }
    case TermKind::Exists:
    case TermKind::Forall: {
      std::string s = t->kind == TermKind::Exists ? "exists " : "forall ";
      s += t->name;
      if (!type_equal(t->type, binder_convention_type(t->name)))
        s += ":" + type_str(t->type);
      s += ".";
      if (is_connective(t->a->kind))
        s += "(" + render_term(t->a, 0, true) + ")";
      else
        s += render_term(t->a, 0, tail);
      return s;
    }
    case TermKind::Not:
      return "-" + render_term(t->a, 7, false);
    case TermKind::And:
      return render_term(t->a, 5, false) + " & " + render_term(t->b, 4, tail);
    case TermKind::Or:
      return render_term(t->a, 4, false) + " | " + render_term(t->b, 3, tail);
    case TermKind::Implies:
      return render_term(t->a, 3, false) + " -> " + render_term(t->b, 2, tail);
    case TermKind::Iff:
      return render_term(t->a, 2, false) + " <-> " + render_term(t->b, 1, tail);
    case TermKind::Eq:
      return render_term(t->a, 7, false) + " = " + render_term(t->b, 7, false);
    case TermKind::Less:
      return render_term(t->a, 7, false) + " < " + render_term(t->b, 7, false);
    case TermKind::Leq:
      return render_term(t->a, 7, false) + " <= " + render_term(t->b, 7, false);
  }
  throw Error("unreachable term kind in printer");
}

inline std::string render_term(const TermPtr& t, int ctx, bool tail) {
  if (!t) return "<null>";
  bool wrap;
  if (is_binder(t->kind))
    wrap = ctx > 0 && !tail;
  else
    wrap = term_prec(t->kind) < ctx;
  if (wrap) return "(" + render_bare(t, true) + ")";
  return render_bare(t, tail);
}

inline std::string term_str(const TermPtr& t) { return render_term(t, 0, true); }

inline std::string formula_str(const Formula& f) { return term_str(f.term()); }

// ---------------------------------------------------------------------------
// Type inference for parsed constants (union-find over shallow type graphs).
// Bound variables get concrete types at parse time, so only constants need
// solving. Unconstrained constants default to Entity.

class TypeInference {
public:
  int fresh() {
    nodes_.push_back({-1, TypeKind::Entity, false, false, -1, -1});
    return static_cast<int>(nodes_.size()) - 1;
  }

  int base(TypeKind k) {
    nodes_.push_back({-1, k, true, false, -1, -1});
    return static_cast<int>(nodes_.size()) - 1;
  }

  int arrow(int from, int to) {
    nodes_.push_back({-1, TypeKind::Arrow, false, true, from, to});
    return static_cast<int>(nodes_.size()) - 1;
  }

  int from_type(const TypePtr& t) {
    if (t->kind == TypeKind::Arrow)
      return arrow(from_type(t->from), from_type(t->to));
    return base(t->kind);
  }

  void unify(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    Node& na = nodes_[a];
    Node& nb = nodes_[b];
    if (!na.has_base && !na.is_arrow) {
      if (occurs(a, b))
        throw TypeError("type inference", "finite type", "cyclic type");
      na.parent = b;
      return;
    }
    if (!nb.has_base && !nb.is_arrow) {
      if (occurs(b, a))
        throw TypeError("type inference", "finite type", "cyclic type");
      nb.parent = a;
      return;
    }
    if (na.has_base && nb.has_base) {
      if (na.base != nb.base)
        throw TypeError("type inference", type_str(resolve(a)),
                        type_str(resolve(b)));
      na.parent = b;
      return;
    }
    if (na.is_arrow && nb.is_arrow) {
      int af = na.from, at = na.to, bf = nb.from, bt = nb.to;
      na.parent = b;
      unify(af, bf);
      unify(at, bt);
      return;
    }
    throw TypeError("type inference",
                    na.is_arrow ? "function type" : "base type",
                    nb.is_arrow ? "function type" : "base type");
  }

  TypePtr resolve(int i) {
    i = find(i);
    const Node& n = nodes_[i];
    if (n.has_base) {
      switch (n.base) {
        case TypeKind::Entity: return SemType::entity();
        case TypeKind::Event: return SemType::event();
        case TypeKind::Degree: return SemType::degree();
        case TypeKind::Truth: return SemType::truth();
        default: break;
      }
    }
    if (n.is_arrow) return SemType::arrow(resolve(n.from), resolve(n.to));
    return SemType::entity();
  }

private:
  struct Node {
    int parent;
    TypeKind base;
    bool has_base;
    bool is_arrow;
    int from, to;
  };

  int find(int i) {
    while (nodes_[i].parent >= 0) i = nodes_[i].parent;
    return i;
  }

  bool occurs(int var, int t) {
    t = find(t);
    if (t == var) return true;
    const Node& n = nodes_[t];
    if (n.is_arrow) return occurs(var, n.from) || occurs(var, n.to);
    return false;
  }

  std::vector<Node> nodes_;
};

// Built-in signatures for the fixed vocabulary of role functions, counting
// predicates, thresholds, and composition markers.
inline bool seeded_signature(const std::string& name, TypeInference& inf,
                             int& out) {
  auto E = [&] { return inf.base(TypeKind::Entity); };
  auto V = [&] { return inf.base(TypeKind::Event); };
  auto D = [&] { return inf.base(TypeKind::Degree); };
  auto T = [&] { return inf.base(TypeKind::Truth); };
  if (name == "subj" || name == "acc") {
    out = inf.arrow(V(), E());
    return true;
  }
  if (name == "many") {
    out = inf.arrow(E(), inf.arrow(D(), T()));
    return true;
  }
  if (name.rfind("th_", 0) == 0 || name.rfind("__thN_", 0) == 0 ||
      name == "%th" || name == "%thN" || name == "%n" || name == "%n1") {
    out = D();
    return true;
  }
  if (name == "_ev" || name == "_ev2" ||
      (name.size() >= 2 && name[0] == '_' && name[1] == 'e' &&
       name.find_first_not_of("0123456789", 2) == std::string::npos)) {
    out = V();
    return true;
  }
  if (name == "_dup") {
    out = inf.arrow(inf.arrow(E(), T()), inf.arrow(E(), T()));
    return true;
  }
  if (name == "_neg") {
    out = inf.arrow(T(), T());
    return true;
  }
  if (name == "_pack_ex" || name == "_pack_all" || name == "_pack_no" ||
      name == "_pack_cmore") {
    out = inf.arrow(inf.arrow(E(), T()), E());
    return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Parsing.

namespace detail {

enum class TokKind { Ident, Number, Sym, End };

struct Token {
  TokKind kind;
  std::string text;
  Rational num;
  size_t pos;
};

inline bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '%';
}
inline bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '%';
}

inline std::vector<Token> lex_terms(const std::string& src) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    size_t start = i;
    if (ident_start(c)) {
      size_t j = i;
      while (j < src.size() && ident_char(src[j])) ++j;
      out.push_back({TokKind::Ident, src.substr(i, j - i), Rational(), start});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
        ++j;
      if (j < src.size() && src[j] == '/' && j + 1 < src.size() &&
          std::isdigit(static_cast<unsigned char>(src[j + 1]))) {
        ++j;
        while (j < src.size() &&
               std::isdigit(static_cast<unsigned char>(src[j])))
          ++j;
      }
      std::string text = src.substr(i, j - i);
      out.push_back({TokKind::Number, text, Rational::parse(text), start});
      i = j;
      continue;
    }
    auto sym = [&](const std::string& s) {
      out.push_back({TokKind::Sym, s, Rational(), start});
      i += s.size();
    };
    if (src.compare(i, 3, "<->") == 0) { sym("<->"); continue; }
    if (src.compare(i, 2, "->") == 0) { sym("->"); continue; }
    if (src.compare(i, 2, "<=") == 0) { sym("<="); continue; }
    switch (c) {
      case '(': case ')': case ',': case '.': case '\\': case ':':
      case '&': case '|': case '-': case '=': case '<': case '>':
        sym(std::string(1, c));
        continue;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'",
                         static_cast<long>(i));
    }
  }
  out.push_back({TokKind::End, "", Rational(), src.size()});
  return out;
}

class TermParser {
public:
  explicit TermParser(const std::string& src) : toks_(lex_terms(src)) {}

  TermPtr parse() {
    TermPtr t = parse_iff();
    expect_end();
    return t;
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_++]; }

  bool at_sym(const std::string& s) const {
    return peek().kind == TokKind::Sym && peek().text == s;
  }
  bool eat_sym(const std::string& s) {
    if (!at_sym(s)) return false;
    ++pos_;
    return true;
  }
  void expect_sym(const std::string& s) {
    if (!eat_sym(s))
      throw ParseError("expected '" + s + "', found '" + peek().text + "'",
                       static_cast<long>(peek().pos));
  }
  void expect_end() {
    if (peek().kind != TokKind::End)
      throw ParseError("trailing input '" + peek().text + "'",
                       static_cast<long>(peek().pos));
  }

  bool at_keyword(const std::string& kw) const {
    return peek().kind == TokKind::Ident && peek().text == kw;
  }

  TypePtr parse_type_primary() {
    if (eat_sym("(")) {
      TypePtr t = parse_type_expr();
      expect_sym(")");
      return t;
    }
    if (peek().kind != TokKind::Ident)
      throw ParseError("expected type", static_cast<long>(peek().pos));
    std::string n = next().text;
    if (n == "E") return SemType::entity();
    if (n == "V") return SemType::event();
    if (n == "D") return SemType::degree();
    if (n == "T") return SemType::truth();
    throw ParseError("unknown base type '" + n + "'",
                     static_cast<long>(peek().pos));
  }

  TypePtr parse_type_expr() {
    TypePtr l = parse_type_primary();
    if (eat_sym(">")) return SemType::arrow(l, parse_type_expr());
    return l;
  }

  TermPtr parse_iff() {
    TermPtr l = parse_implies();
    if (eat_sym("<->")) return mk_iff(l, parse_iff());
    return l;
  }

  TermPtr parse_implies() {
    TermPtr l = parse_or();
    if (eat_sym("->")) return mk_implies(l, parse_implies());
    return l;
  }

  TermPtr parse_or() {
    std::vector<TermPtr> xs{parse_and()};
    while (eat_sym("|")) xs.push_back(parse_and());
    TermPtr out = xs.back();
    for (size_t i = xs.size() - 1; i-- > 0;) out = mk_or(xs[i], out);
    return out;
  }

  TermPtr parse_and() {
    std::vector<TermPtr> xs{parse_unary()};
    while (eat_sym("&")) xs.push_back(parse_unary());
    TermPtr out = xs.back();
    for (size_t i = xs.size() - 1; i-- > 0;) out = mk_and(xs[i], out);
    return out;
  }

  TermPtr parse_binder(TermKind kind) {
    if (peek().kind != TokKind::Ident)
      throw ParseError("expected binder name", static_cast<long>(peek().pos));
    std::string name = next().text;
    TypePtr ty;
    if (eat_sym(":"))
      ty = parse_type_expr();
    else
      ty = binder_convention_type(name);
    expect_sym(".");
    scopes_.push_back({name, ty});
    TermPtr body = parse_iff();
    scopes_.pop_back();
    return mk_quant(kind, name, ty, body);
  }

  TermPtr parse_unary() {
    if (eat_sym("-")) return mk_not(parse_unary());
    if (eat_sym("\\")) return parse_binder(TermKind::Abs);
    if (at_keyword("exists")) {
      ++pos_;
      return parse_binder(TermKind::Exists);
    }
    if (at_keyword("forall")) {
      ++pos_;
      return parse_binder(TermKind::Forall);
    }
    return parse_comparison();
  }

  TermPtr parse_comparison() {
    TermPtr l = parse_app();
    if (eat_sym("=")) return mk_eq(l, parse_app());
    if (eat_sym("<=")) return mk_leq(l, parse_app());
    if (eat_sym("<")) return mk_less(l, parse_app());
    return l;
  }

  TermPtr parse_app() {
    TermPtr head = parse_primary();
    while (at_sym("(")) {
      ++pos_;
      std::vector<TermPtr> args;
      if (!at_sym(")")) {
        args.push_back(parse_iff());
        while (eat_sym(",")) args.push_back(parse_iff());
      }
      expect_sym(")");
      for (const auto& a : args) head = mk_app(head, a);
    }
    return head;
  }

  TermPtr parse_primary() {
    if (peek().kind == TokKind::Number) {
      Token n = next();
      std::string unit;
      if (peek().kind == TokKind::Ident && peek().text != "exists" &&
          peek().text != "forall")
        unit = next().text;
      return mk_num(n.num, unit);
    }
    if (peek().kind == TokKind::Ident) {
      std::string name = next().text;
      for (size_t i = scopes_.size(); i-- > 0;)
        if (scopes_[i].first == name) return mk_var(name, scopes_[i].second);
      return mk_const(name, nullptr);
    }
    if (eat_sym("(")) {
      TermPtr t = parse_iff();
      expect_sym(")");
      return t;
    }
    throw ParseError("expected a term, found '" + peek().text + "'",
                     static_cast<long>(peek().pos));
  }

  std::vector<Token> toks_;
  size_t pos_ = 0;
  std::vector<std::pair<std::string, TypePtr>> scopes_;
};

struct InferCtx {
  TypeInference inf;
  std::map<std::string, int> consts;

  int const_node(const std::string& name) {
    auto it = consts.find(name);
    if (it != consts.end()) return it->second;
    int node;
    if (!seeded_signature(name, inf, node)) node = inf.fresh();
    consts.emplace(name, node);
    return node;
  }
};

inline int infer_types(const TermPtr& t, std::map<std::string, int>& env,
                       InferCtx& cx) {
  auto T = [&] { return cx.inf.base(TypeKind::Truth); };
  auto D = [&] { return cx.inf.base(TypeKind::Degree); };
  switch (t->kind) {
    case TermKind::Var: {
      auto it = env.find(t->name);
      if (it != env.end()) return it->second;
      return cx.inf.from_type(t->type);
    }
    case TermKind::Const:
      if (t->type) return cx.inf.from_type(t->type);
      return cx.const_node(t->name);
    case TermKind::Num:
      return D();
    case TermKind::Abs: {
      int bt = cx.inf.from_type(t->type);
      auto prev = env.find(t->name);
      int saved = prev == env.end() ? -1 : prev->second;
      env[t->name] = bt;
      int body = infer_types(t->a, env, cx);
      if (saved >= 0) env[t->name] = saved; else env.erase(t->name);
      return cx.inf.arrow(bt, body);
    }
    case TermKind::Exists:
    case TermKind::Forall: {
      int bt = cx.inf.from_type(t->type);
      auto prev = env.find(t->name);
      int saved = prev == env.end() ? -1 : prev->second;
      env[t->name] = bt;
      int body = infer_types(t->a, env, cx);
      if (saved >= 0) env[t->name] = saved; else env.erase(t->name);
      cx.inf.unify(body, T());
      return T();
    }
    case TermKind::App: {
      int f = infer_types(t->a, env, cx);
      int x = infer_types(t->b, env, cx);
      int r = cx.inf.fresh();
      cx.inf.unify(f, cx.inf.arrow(x, r));
      return r;
    }
    case TermKind::Not: {
      cx.inf.unify(infer_types(t->a, env, cx), T());
      return T();
    }
    case TermKind::And:
    case TermKind::Or:
    case TermKind::Implies:
    case TermKind::Iff: {
      cx.inf.unify(infer_types(t->a, env, cx), T());
      cx.inf.unify(infer_types(t->b, env, cx), T());
      return T();
    }
    case TermKind::Eq: {
      int l = infer_types(t->a, env, cx);
      int r = infer_types(t->b, env, cx);
      cx.inf.unify(l, r);
      return T();
    }
    case TermKind::Less:
    case TermKind::Leq: {
      cx.inf.unify(infer_types(t->a, env, cx), D());
      cx.inf.unify(infer_types(t->b, env, cx), D());
      return T();
    }
  }
  throw Error("unreachable term kind in inference");
}

inline TermPtr apply_const_types(const TermPtr& t, InferCtx& cx) {
  if (!t) return t;
  switch (t->kind) {
    case TermKind::Var:
    case TermKind::Num:
      return t;
    case TermKind::Const: {
      if (t->type) return t;
      auto it = cx.consts.find(t->name);
      TypePtr ty = it != cx.consts.end() ? cx.inf.resolve(it->second)
                                         : SemType::entity();
      return mk_const(t->name, ty);
    }
    default: break;
  }
  auto t2 = std::make_shared<Term>(*t);
  t2->a = apply_const_types(t->a, cx);
  t2->b = apply_const_types(t->b, cx);
  return t2;
}

}  // namespace detail

// Parses the concrete term syntax. Constants receive inferred types (Entity
// when unconstrained); binder types come from annotations or, failing that,
// from the leading letter of the name (e* event, d*/n*/m* degree, else
// entity).
inline TermPtr parse_term(const std::string& text) {
  detail::TermParser p(text);
  TermPtr raw = p.parse();
  detail::InferCtx cx;
  std::map<std::string, int> env;
  detail::infer_types(raw, env, cx);
  return detail::apply_const_types(raw, cx);
}

// Same, but the whole term is unified with `expected` before defaulting, so
// otherwise-unconstrained constants pick up types from the context the term
// will be used in.
inline TermPtr parse_term(const std::string& text, const TypePtr& expected) {
  detail::TermParser p(text);
  TermPtr raw = p.parse();
  detail::InferCtx cx;
  std::map<std::string, int> env;
  int root = detail::infer_types(raw, env, cx);
  cx.inf.unify(root, cx.inf.from_type(expected));
  return detail::apply_const_types(raw, cx);
}

inline Formula parse_formula(const std::string& text) {
  return Formula::make(parse_term(text, SemType::truth()));
}

}  // namespace ccgnli
