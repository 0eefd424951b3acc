#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ccgnli/prover.hpp"
#include "ccgnli/term.hpp"

namespace ccgnli {

// Typed first-order (TFF) export of a proof task, and a validator for the
// emitted subset of the format. Degrees map to the arithmetic sorts: slots
// of `many` count individuals and become $int, every other degree slot
// becomes $rat. Unit tags on numerals have no TFF counterpart and are
// dropped; unit consistency is the internal solver's concern.

enum class TffSort { Entity, Event, Int, Rat };

inline const char* tff_sort_str(TffSort s) {
  switch (s) {
    case TffSort::Entity: return "entity";
    case TffSort::Event: return "event";
    case TffSort::Int: return "$int";
    case TffSort::Rat: return "$rat";
  }
  return "?";
}

namespace detail {

inline bool tff_plain_word(const std::string& s) {
  if (s.empty() || !std::islower(static_cast<unsigned char>(s[0])))
    return false;
  for (char c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

inline std::string tff_name(const std::string& s) {
  if (tff_plain_word(s)) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\\' || c == '\'') out += '\\';
    out += c;
  }
  out += "'";
  return out;
}

inline std::string tff_var(const std::string& s) {
  std::string out = s;
  for (char& c : out) c = std::toupper(static_cast<unsigned char>(c));
  if (out.empty() || !std::isupper(static_cast<unsigned char>(out[0])))
    throw Error("variable name not exportable: " + s);
  return out;
}

// Degree-sort resolution. Every degree-typed variable or constant is a
// cell; cells linked by comparisons or equations share a sort. A cell
// occurring in a `many` slot needs $int, one in any other predicate slot
// needs $rat, and an unconstrained component defaults to $rat.
struct TffModel {
  std::map<std::string, std::vector<TypePtr>> preds;
  std::map<std::string, std::pair<std::vector<TypePtr>, TypePtr>> funs;
  std::map<std::string, TypePtr> consts;

  std::set<std::string> cells;
  std::vector<std::pair<std::string, std::string>> links;
  std::set<std::string> int_need, rat_need;
  std::map<std::string, TffSort> cell_sort;

  static std::string cell_key(const TermPtr& t) {
    if (t->kind == TermKind::Var) return "v:" + t->name;
    if (t->kind == TermKind::Const) return "c:" + t->name;
    return "";
  }

  TffSort degree_slot(const std::string& pred) const {
    return pred == "many" ? TffSort::Int : TffSort::Rat;
  }

  void note_cell(const TermPtr& t) {
    std::string k = cell_key(t);
    if (!k.empty()) cells.insert(k);
  }

  void mark(const TermPtr& t, TffSort s) {
    std::string k = cell_key(t);
    if (k.empty()) return;
    cells.insert(k);
    (s == TffSort::Int ? int_need : rat_need).insert(k);
  }

  void walk(const TermPtr& t) {
    if (!t) return;
    switch (t->kind) {
      case TermKind::App: {
        std::vector<TermPtr> args;
        TermPtr head = t;
        while (head->kind == TermKind::App) {
          args.push_back(head->b);
          head = head->a;
        }
        std::reverse(args.begin(), args.end());
        if (head->kind != TermKind::Const)
          throw Error("not first-order exportable: application head " +
                      term_str(head));
        std::vector<TypePtr> sig;
        for (const auto& a : args) sig.push_back(type_of(a));
        TypePtr res = type_of(t);
        if (res->kind == TypeKind::Arrow)
          throw Error("partially applied symbol not exportable: " +
                      head->name);
        declare(head->name, sig, res);
        for (size_t i = 0; i < args.size(); ++i) {
          if (sig[i]->kind == TypeKind::Degree)
            mark(args[i], res->kind == TypeKind::Truth
                              ? degree_slot(head->name)
                              : TffSort::Rat);
          walk(args[i]);
        }
        return;
      }
      case TermKind::Const:
        if (t->type->kind == TypeKind::Arrow)
          throw Error("unapplied predicate not exportable: " + t->name);
        declare(t->name, {}, t->type);
        if (t->type->kind == TypeKind::Degree) note_cell(t);
        return;
      case TermKind::Var:
        if (t->type->kind == TypeKind::Degree) note_cell(t);
        return;
      case TermKind::Num:
        return;
      case TermKind::Eq:
      case TermKind::Less:
      case TermKind::Leq: {
        walk(t->a);
        walk(t->b);
        if (type_of(t->a)->kind == TypeKind::Degree) {
          std::string ka = cell_key(t->a), kb = cell_key(t->b);
          if (!ka.empty() && !kb.empty()) links.emplace_back(ka, kb);
        }
        return;
      }
      case TermKind::Exists:
      case TermKind::Forall:
        if (t->type->kind == TypeKind::Degree) cells.insert("v:" + t->name);
        walk(t->a);
        return;
      case TermKind::Abs:
        throw Error("lambda not exportable: " + term_str(t));
      default:
        walk(t->a);
        walk(t->b);
        return;
    }
  }

  void declare(const std::string& name, const std::vector<TypePtr>& args,
               const TypePtr& res) {
    for (const auto& a : args)
      if (a->kind == TypeKind::Arrow)
        throw Error("higher-order argument not exportable: " + name);
    if (res->kind == TypeKind::Truth) {
      auto [it, fresh] = preds.emplace(name, args);
      if (consts.count(name) || funs.count(name) ||
          (!fresh && !same_sig(it->second, args)))
        throw Error("symbol used at two types: " + name);
    } else if (!args.empty()) {
      auto [it, fresh] = funs.emplace(name, std::make_pair(args, res));
      if (consts.count(name) || preds.count(name) ||
          (!fresh && (!same_sig(it->second.first, args) ||
                      !type_equal(it->second.second, res))))
        throw Error("symbol used at two types: " + name);
    } else {
      auto [it, fresh] = consts.emplace(name, res);
      if (preds.count(name) || funs.count(name) ||
          (!fresh && !type_equal(it->second, res)))
        throw Error("symbol used at two types: " + name);
    }
  }

  static bool same_sig(const std::vector<TypePtr>& a,
                       const std::vector<TypePtr>& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i)
      if (!type_equal(a[i], b[i])) return false;
    return true;
  }

  void resolve() {
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& [a, b] : links) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::set<std::string> done;
    for (const auto& seed : cells) {
      if (done.count(seed)) continue;
      std::vector<std::string> comp{seed};
      done.insert(seed);
      for (size_t i = 0; i < comp.size(); ++i)
        for (const auto& nb : adj[comp[i]])
          if (done.insert(nb).second) comp.push_back(nb);
      bool want_int = false, want_rat = false;
      for (const auto& c : comp) {
        want_int = want_int || int_need.count(c) > 0;
        want_rat = want_rat || rat_need.count(c) > 0;
      }
      if (want_int && want_rat)
        throw Error("degree term used at both $int and $rat: " + seed);
      for (const auto& c : comp)
        cell_sort[c] = want_int ? TffSort::Int : TffSort::Rat;
    }
  }

  TffSort sort_of_type(const TypePtr& ty, const std::string& cell) const {
    switch (ty->kind) {
      case TypeKind::Entity: return TffSort::Entity;
      case TypeKind::Event: return TffSort::Event;
      case TypeKind::Degree: {
        auto it = cell_sort.find(cell);
        return it == cell_sort.end() ? TffSort::Rat : it->second;
      }
      default:
        throw Error("no term sort for " + type_str(ty));
    }
  }

  TffSort term_sort(const TermPtr& t) const {
    if (t->kind == TermKind::Num)
      return t->value.is_integer() ? TffSort::Int : TffSort::Rat;
    TypePtr ty = type_of(t);
    if (ty->kind == TypeKind::Degree) {
      std::string k = cell_key(t);
      if (k.empty()) throw Error("degree expression not exportable");
      return sort_of_type(ty, k);
    }
    return sort_of_type(ty, "");
  }
};

class TffPrinter {
public:
  explicit TffPrinter(const TffModel& m) : m_(m) {}

  std::string formula(const TermPtr& t) const {
    switch (t->kind) {
      case TermKind::Not: return "~ " + wrap(t->a);
      case TermKind::And: return "( " + wrap(t->a) + " & " + wrap(t->b) + " )";
      case TermKind::Or: return "( " + wrap(t->a) + " | " + wrap(t->b) + " )";
      case TermKind::Implies:
        return "( " + wrap(t->a) + " => " + wrap(t->b) + " )";
      case TermKind::Iff:
        return "( " + wrap(t->a) + " <=> " + wrap(t->b) + " )";
      case TermKind::Exists:
      case TermKind::Forall: {
        std::string q = t->kind == TermKind::Forall ? "!" : "?";
        TffSort s = m_.sort_of_type(t->type, "v:" + t->name);
        return q + " [" + tff_var(t->name) + ": " + tff_sort_str(s) + "] : " +
               wrap(t->a);
      }
      case TermKind::Eq: {
        TffSort s = operand_sort(t);
        return "( " + term(t->a, s) + " = " + term(t->b, s) + " )";
      }
      case TermKind::Less:
      case TermKind::Leq: {
        TffSort s = operand_sort(t);
        const char* fn = t->kind == TermKind::Less ? "$less" : "$lesseq";
        return std::string(fn) + "(" + term(t->a, s) + ", " + term(t->b, s) +
               ")";
      }
      default:
        if (t->kind != TermKind::App && t->kind != TermKind::Const)
          throw Error("not a formula: " + term_str(t));
        return term(t, TffSort::Rat);
    }
  }

  std::string term(const TermPtr& t, TffSort want) const {
    switch (t->kind) {
      case TermKind::Var: return tff_var(t->name);
      case TermKind::Const: return tff_name(t->name);
      case TermKind::Num:
        if (want == TffSort::Int) {
          if (!t->value.is_integer())
            throw Error("non-integer numeral in $int slot: " +
                        t->value.str());
          return std::to_string(t->value.num());
        }
        return std::to_string(t->value.num()) + "/" +
               std::to_string(t->value.den());
      case TermKind::App: {
        std::vector<TermPtr> args;
        TermPtr head = t;
        while (head->kind == TermKind::App) {
          args.push_back(head->b);
          head = head->a;
        }
        std::reverse(args.begin(), args.end());
        return apply(head->name, args);
      }
      default:
        throw Error("not a term: " + term_str(t));
    }
  }

private:
  // Both comparison operands print at one sort; a variable or constant side
  // fixes it, two numerals agree on $int only when both are integers.
  TffSort operand_sort(const TermPtr& t) const {
    if (type_of(t->a)->kind != TypeKind::Degree) return m_.term_sort(t->a);
    for (const TermPtr& side : {t->a, t->b})
      if (side->kind != TermKind::Num) return m_.term_sort(side);
    return t->a->value.is_integer() && t->b->value.is_integer() ? TffSort::Int
                                                                : TffSort::Rat;
  }

  std::string apply(const std::string& name,
                    const std::vector<TermPtr>& args) const {
    std::vector<TypePtr> sig;
    if (auto it = m_.preds.find(name); it != m_.preds.end()) {
      sig = it->second;
    } else if (auto jt = m_.funs.find(name); jt != m_.funs.end()) {
      sig = jt->second.first;
    } else {
      throw Error("undeclared symbol: " + name);
    }
    std::string out = tff_name(name);
    if (args.empty()) return out;
    out += "(";
    for (size_t i = 0; i < args.size(); ++i) {
      if (i) out += ", ";
      TffSort want = sig[i]->kind == TypeKind::Degree
                         ? (m_.preds.count(name) ? m_.degree_slot(name)
                                                 : TffSort::Rat)
                         : m_.sort_of_type(sig[i], "");
      out += term(args[i], want);
    }
    out += ")";
    return out;
  }

  std::string wrap(const TermPtr& t) const { return formula(t); }

  const TffModel& m_;
};

inline std::string tff_arg_list(const TffModel& m,
                                const std::vector<TypePtr>& args,
                                TffSort degree_as) {
  std::vector<std::string> parts;
  for (const auto& a : args)
    parts.push_back(a->kind == TypeKind::Degree
                        ? tff_sort_str(degree_as)
                        : tff_sort_str(m.sort_of_type(a, "")));
  if (parts.size() == 1) return parts[0];
  std::string out = "(";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += " * ";
    out += parts[i];
  }
  return out + ")";
}

}  // namespace detail

inline std::string export_tptp(const ProofTask& task) {
  detail::TffModel m;
  std::vector<const Formula*> all;
  for (const auto& f : task.axioms) all.push_back(&f);
  for (const auto& f : task.premises) all.push_back(&f);
  all.push_back(&task.goal);
  for (const Formula* f : all) m.walk(f->term());
  m.resolve();
  detail::TffPrinter pr(m);

  std::ostringstream out;
  out << "% typed first-order entailment task with arithmetic\n";
  out << "% axioms: " << task.axioms.size()
      << ", premises: " << task.premises.size() << "\n\n";
  out << "tff(entity_type, type, entity: $tType).\n";
  out << "tff(event_type, type, event: $tType).\n";

  std::vector<std::string> decls;
  for (const auto& [name, args] : m.preds)
    decls.push_back(detail::tff_name(name) + ": " +
                    (args.empty()
                         ? "$o"
                         : detail::tff_arg_list(m, args, m.degree_slot(name)) +
                               " > $o"));
  for (const auto& [name, sig] : m.funs)
    decls.push_back(detail::tff_name(name) + ": " +
                    detail::tff_arg_list(m, sig.first, TffSort::Rat) + " > " +
                    tff_sort_str(m.sort_of_type(sig.second, "")));
  for (const auto& [name, ty] : m.consts)
    decls.push_back(detail::tff_name(name) + ": " +
                    tff_sort_str(m.sort_of_type(ty, "c:" + name)));
  std::sort(decls.begin(), decls.end());
  int dn = 0;
  for (const auto& d : decls)
    out << "tff(decl_" << ++dn << ", type, " << d << ").\n";
  out << "\n";

  int an = 0;
  for (const auto& f : task.axioms)
    out << "tff(ax_" << ++an << ", axiom, " << pr.formula(f.term()) << ").\n";
  int pn = 0;
  for (const auto& f : task.premises)
    out << "tff(p_" << ++pn << ", axiom, " << pr.formula(f.term()) << ").\n";
  out << "tff(goal, conjecture, " << pr.formula(task.goal.term()) << ").\n";
  return out.str();
}

// ---------------------------------------------------------------------------
// Validator. Checks a document against the typed first-order grammar subset
// the exporter emits: statement syntax, declaration shapes, connective
// arity and associativity, variable scoping, symbol arity, and sort
// agreement (including $int vs $rat on arithmetic atoms). Throws ParseError
// with a line number on the first violation.

namespace detail {

struct TffTok {
  enum Kind { Lower, Upper, Dollar, Num, Punct, End } kind;
  std::string text;  // Num keeps its spelling; '$int' literal vs '$rat'
  bool is_rat{};     // Num only: had a denominator
  int line{};
};

inline std::vector<TffTok> tff_lex(const std::string& s) {
  std::vector<TffTok> out;
  int line = 1;
  size_t i = 0;
  auto fail = [&](const std::string& msg) {
    throw ParseError("tptp:" + std::to_string(line) + ": " + msg);
  };
  while (i < s.size()) {
    char c = s[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '%') {
      while (i < s.size() && s[i] != '\n') ++i;
      continue;
    }
    if (c == '\'') {
      std::string t;
      ++i;
      while (i < s.size() && s[i] != '\'') {
        if (s[i] == '\\' && i + 1 < s.size()) ++i;
        if (s[i] == '\n') fail("newline in quoted name");
        t += s[i++];
      }
      if (i >= s.size()) fail("unterminated quoted name");
      ++i;
      if (t.empty()) fail("empty quoted name");
      out.push_back({TffTok::Lower, t, false, line});
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        ((c == '-' || c == '+') && i + 1 < s.size() &&
         std::isdigit(static_cast<unsigned char>(s[i + 1])))) {
      std::string t(1, c);
      ++i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
        t += s[i++];
      bool rat = false;
      if (i < s.size() && s[i] == '/') {
        rat = true;
        t += s[i++];
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i])))
          fail("malformed rational literal");
        if (s[i] == '0' && i + 1 < s.size() &&
            std::isdigit(static_cast<unsigned char>(s[i + 1])))
          fail("rational denominator with leading zero");
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
          t += s[i++];
      }
      out.push_back({TffTok::Num, t, rat, line});
      continue;
    }
    if (c == '$' || std::isalpha(static_cast<unsigned char>(c)) ||
        c == '_') {
      bool dollar = c == '$';
      std::string t(1, c);
      ++i;
      while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) ||
                              s[i] == '_'))
        t += s[i++];
      if (dollar) {
        out.push_back({TffTok::Dollar, t, false, line});
      } else if (std::isupper(static_cast<unsigned char>(t[0]))) {
        out.push_back({TffTok::Upper, t, false, line});
      } else if (std::islower(static_cast<unsigned char>(t[0]))) {
        out.push_back({TffTok::Lower, t, false, line});
      } else {
        fail("identifier must not start with underscore: " + t);
      }
      continue;
    }
    if (s.compare(i, 3, "<=>") == 0) {
      out.push_back({TffTok::Punct, "<=>", false, line});
      i += 3;
      continue;
    }
    if (s.compare(i, 2, "=>") == 0 || s.compare(i, 2, "!=") == 0) {
      out.push_back({TffTok::Punct, s.substr(i, 2), false, line});
      i += 2;
      continue;
    }
    if (std::string("()[],.:*!?~&|=>").find(c) != std::string::npos) {
      out.push_back({TffTok::Punct, std::string(1, c), false, line});
      ++i;
      continue;
    }
    fail(std::string("unexpected character '") + c + "'");
  }
  out.push_back({TffTok::End, "", false, line});
  return out;
}

class TffValidator {
public:
  explicit TffValidator(const std::string& text) : toks_(tff_lex(text)) {}

  void run() {
    collect_declarations();
    check_declarations();
    pos_ = 0;
    while (!at(TffTok::End)) statement(true);
  }

private:
  struct Sym {
    std::vector<std::string> args;
    std::string result;
  };

  std::vector<TffTok> toks_;
  size_t pos_ = 0;
  std::set<std::string> sorts_;
  std::map<std::string, Sym> symbols_;
  std::set<std::string> stmt_names_;
  std::vector<std::pair<Sym, int>> pending_;  // decl + line, checked later

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("tptp:" + std::to_string(cur().line) + ": " + msg);
  }
  const TffTok& cur() const { return toks_[pos_]; }
  bool at(TffTok::Kind k) const { return cur().kind == k; }
  bool at_punct(const std::string& p) const {
    return cur().kind == TffTok::Punct && cur().text == p;
  }
  void expect_punct(const std::string& p) {
    if (!at_punct(p)) fail("expected '" + p + "', got '" + cur().text + "'");
    ++pos_;
  }
  std::string take_lower(const std::string& what) {
    if (!at(TffTok::Lower)) fail("expected " + what);
    return toks_[pos_++].text;
  }

  void collect_declarations() {
    while (!at(TffTok::End)) statement(false);
  }

  void check_declarations() const {
    for (const auto& [d, line] : pending_) {
      for (const auto& a : d.args)
        if (a != "$int" && a != "$rat" && !sorts_.count(a))
          throw ParseError("tptp:" + std::to_string(line) +
                           ": undeclared sort '" + a + "'");
      if (d.result != "$o" && d.result != "$int" && d.result != "$rat" &&
          d.result != "$tType" && !sorts_.count(d.result))
        throw ParseError("tptp:" + std::to_string(line) +
                         ": undeclared sort '" + d.result + "'");
    }
  }

  void statement(bool deep) {
    if (take_lower("'tff'") != "tff") fail("statement must start with tff");
    expect_punct("(");
    if (!at(TffTok::Lower) && !at(TffTok::Num)) fail("expected statement name");
    std::string name = toks_[pos_++].text;
    if (!deep && !stmt_names_.insert(name).second)
      fail("duplicate statement name '" + name + "'");
    expect_punct(",");
    std::string role = take_lower("role");
    expect_punct(",");
    if (role == "type") {
      type_decl(deep);
    } else if (role == "axiom" || role == "hypothesis" || role == "lemma" ||
               role == "definition" || role == "theorem" ||
               role == "conjecture" || role == "negated_conjecture") {
      if (deep) {
        std::map<std::string, std::string> env;
        std::string s = formula(env);
        if (s != "$o") fail("statement body is a term, not a formula");
      } else {
        skip_body();
      }
    } else {
      fail("unknown role '" + role + "'");
    }
    expect_punct(")");
    expect_punct(".");
  }

  void skip_body() {
    int depth = 0;
    while (!at(TffTok::End)) {
      if (at_punct("(")) ++depth;
      if (at_punct(")")) {
        if (depth == 0) return;
        --depth;
      }
      ++pos_;
    }
    fail("unterminated statement");
  }

  std::string sort_token() {
    int line = cur().line;
    if (at(TffTok::Dollar)) {
      std::string d = toks_[pos_++].text;
      if (d != "$int" && d != "$rat" && d != "$o" && d != "$tType")
        throw ParseError("tptp:" + std::to_string(line) +
                         ": unknown defined sort '" + d + "'");
      return d;
    }
    return take_lower("sort name");
  }

  void type_decl(bool deep) {
    int line = cur().line;
    if (!at(TffTok::Lower)) fail("expected declared symbol name");
    std::string name = toks_[pos_++].text;
    expect_punct(":");
    Sym d;
    if (at(TffTok::Dollar) && cur().text == "$tType") {
      ++pos_;
      d.result = "$tType";
      if (!deep) {
        if (!sorts_.insert(name).second) fail("sort redeclared: " + name);
      }
      return;
    }
    if (at_punct("(")) {
      ++pos_;
      d.args.push_back(sort_token());
      while (at_punct("*")) {
        ++pos_;
        d.args.push_back(sort_token());
      }
      expect_punct(")");
      expect_punct(">");
      d.result = sort_token();
    } else {
      std::string first = sort_token();
      if (at_punct(">")) {
        ++pos_;
        d.args.push_back(first);
        d.result = sort_token();
      } else {
        d.result = first;
      }
    }
    for (const auto& a : d.args)
      if (a == "$o" || a == "$tType")
        throw ParseError("tptp:" + std::to_string(line) +
                         ": argument sort may not be '" + a + "'");
    if (d.result == "$tType")
      throw ParseError("tptp:" + std::to_string(line) +
                       ": arrow into $tType not allowed");
    if (!deep) {
      if (!symbols_.emplace(name, d).second)
        throw ParseError("tptp:" + std::to_string(line) +
                         ": symbol redeclared: " + name);
      pending_.emplace_back(d, line);
    }
  }

  // formula := unitary { & unitary }* | unitary { '|' unitary }*
  //          | unitary (=> | <=>) unitary
  std::string formula(std::map<std::string, std::string>& env) {
    std::string s = unitary(env);
    if (!at_punct("&") && !at_punct("|") && !at_punct("=>") &&
        !at_punct("<=>"))
      return s;
    if (s != "$o") fail("connective applied to a term");
    std::string op = cur().text;
    ++pos_;
    if (unitary_must_o(env) != "$o") fail("connective applied to a term");
    if (op == "&" || op == "|") {
      while (at_punct(op)) {
        ++pos_;
        unitary_must_o(env);
      }
    }
    if (at_punct("&") || at_punct("|") || at_punct("=>") || at_punct("<=>"))
      fail("mixed binary connectives need parentheses");
    return "$o";
  }

  std::string unitary_must_o(std::map<std::string, std::string>& env) {
    std::string s = unitary(env);
    if (s != "$o") fail("expected a formula operand");
    return s;
  }

  std::string unitary(std::map<std::string, std::string>& env) {
    if (at_punct("~")) {
      ++pos_;
      if (unitary(env) != "$o") fail("negation of a term");
      return "$o";
    }
    if (at_punct("!") || at_punct("?")) {
      ++pos_;
      expect_punct("[");
      std::vector<std::pair<std::string, std::string>> saved;
      while (true) {
        if (!at(TffTok::Upper)) fail("expected quantified variable");
        std::string v = toks_[pos_++].text;
        expect_punct(":");
        std::string s = sort_token();
        if (s == "$o" || s == "$tType")
          fail("cannot quantify over sort '" + s + "'");
        if (s != "$int" && s != "$rat" && !sorts_.count(s))
          fail("undeclared sort '" + s + "'");
        auto it = env.find(v);
        saved.emplace_back(v, it == env.end() ? "" : it->second);
        env[v] = s;
        if (at_punct(",")) {
          ++pos_;
          continue;
        }
        break;
      }
      expect_punct("]");
      expect_punct(":");
      if (unitary(env) != "$o") fail("quantified body is a term");
      for (auto it = saved.rbegin(); it != saved.rend(); ++it) {
        if (it->second.empty())
          env.erase(it->first);
        else
          env[it->first] = it->second;
      }
      return "$o";
    }
    if (at_punct("(")) {
      ++pos_;
      std::string s = formula(env);
      expect_punct(")");
      return maybe_equality(s, env);
    }
    std::string s = term(env);
    return maybe_equality(s, env);
  }

  // Parenthesized groups and plain terms may be followed by = or != to
  // form an equality atom.
  std::string maybe_equality(const std::string& lhs,
                             std::map<std::string, std::string>& env) {
    if (!at_punct("=") && !at_punct("!=")) return lhs;
    if (lhs == "$o") fail("equality over formulas");
    ++pos_;
    std::string rhs = term(env);
    if (rhs == "$o") fail("equality over formulas");
    if (lhs != rhs)
      fail("equality between sorts '" + lhs + "' and '" + rhs + "'");
    return "$o";
  }

  std::string term(std::map<std::string, std::string>& env) {
    if (at(TffTok::Upper)) {
      auto it = env.find(cur().text);
      if (it == env.end()) fail("unbound variable " + cur().text);
      ++pos_;
      return it->second;
    }
    if (at(TffTok::Num)) {
      bool rat = cur().is_rat;
      ++pos_;
      return rat ? "$rat" : "$int";
    }
    if (at(TffTok::Dollar)) {
      std::string d = toks_[pos_++].text;
      if (d == "$true" || d == "$false") return "$o";
      if (d == "$less" || d == "$lesseq") {
        expect_punct("(");
        std::string a = term(env);
        expect_punct(",");
        std::string b = term(env);
        expect_punct(")");
        if (a != b || (a != "$int" && a != "$rat"))
          fail(d + " needs two arguments of one numeric sort");
        return "$o";
      }
      fail("unsupported defined symbol '" + d + "'");
    }
    if (!at(TffTok::Lower)) fail("expected a term, got '" + cur().text + "'");
    std::string name = toks_[pos_++].text;
    auto it = symbols_.find(name);
    if (it == symbols_.end()) fail("undeclared symbol '" + name + "'");
    const Sym& d = it->second;
    if (!at_punct("(")) {
      if (!d.args.empty()) fail("symbol '" + name + "' needs arguments");
      return d.result;
    }
    ++pos_;
    std::vector<std::string> got;
    got.push_back(term(env));
    while (at_punct(",")) {
      ++pos_;
      got.push_back(term(env));
    }
    expect_punct(")");
    if (got.size() != d.args.size())
      fail("symbol '" + name + "' applied to " + std::to_string(got.size()) +
           " arguments, declared with " + std::to_string(d.args.size()));
    for (size_t i = 0; i < got.size(); ++i)
      if (got[i] != d.args[i])
        fail("argument " + std::to_string(i + 1) + " of '" + name +
             "' has sort '" + got[i] + "', declared '" + d.args[i] + "'");
    return d.result;
  }
};

}  // namespace detail

inline void validate_tptp(const std::string& text) {
  detail::TffValidator(text).run();
}

}  // namespace ccgnli
