#pragma once

// Finite-model enumeration oracle for the monadic fragment with degrees.
//
// Supported vocabulary: entity constants, degree constants, unary entity
// predicates, and entity*degree predicates. Degree predicates range over
// downward-closed sets of a finite chain, which is the intended semantics
// of gradable predicates (holding at a degree implies holding at every
// lower degree), so a model found here falsifies the prover's theory.
// Numeric literals must be integers inside the chain.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <ccgnli/term.hpp>

namespace testsupport {

struct OracleTask {
  std::vector<ccgnli::Formula> premises;
  ccgnli::Formula goal;
};

class ModelOracle {
public:
  explicit ModelOracle(int max_entities = 3, int degree_chain = 5)
      : max_entities_(max_entities), chain_(degree_chain) {}

  // A countermodel makes every premise true and the goal false. Returns a
  // printable description of the first one found.
  std::optional<std::string> countermodel(const OracleTask& task) const {
    Vocab v = scan(task);
    for (int n = 1; n <= max_entities_; ++n) {
      Model m;
      if (search(task, v, n, 0, m)) return describe(v, n, m);
    }
    return std::nullopt;
  }

  bool valid(const OracleTask& task) const {
    return !countermodel(task).has_value();
  }

private:
  struct Vocab {
    std::vector<std::string> upreds, dpreds, econsts, dconsts;
  };

  struct Model {
    std::map<std::string, std::uint32_t> upred;  // entity bitmask
    std::map<std::string, std::vector<int>> dpred;  // per-entity threshold
    std::map<std::string, int> econst, dconst;
  };

  int max_entities_;
  int chain_;

  static bool is_entity(const ccgnli::TypePtr& t) {
    return t && t->kind == ccgnli::TypeKind::Entity;
  }
  static bool is_degree(const ccgnli::TypePtr& t) {
    return t && t->kind == ccgnli::TypeKind::Degree;
  }
  // Numerals carry no stored type node; they are always degrees.
  static ccgnli::TypePtr arg_type(const ccgnli::TermPtr& t) {
    if (t->kind == ccgnli::TermKind::Num) return ccgnli::SemType::degree();
    return t->type;
  }

  void scan_term(const ccgnli::TermPtr& t, Vocab& v,
                 std::set<std::string>& seen) const {
    using ccgnli::TermKind;
    if (!t) return;
    if (t->kind == TermKind::App) {
      std::vector<ccgnli::TermPtr> args;
      ccgnli::TermPtr head = t;
      while (head->kind == TermKind::App) {
        args.insert(args.begin(), head->b);
        head = head->a;
      }
      if (head->kind != TermKind::Const)
        throw ccgnli::Error("oracle: non-constant predicate head");
      if (seen.insert(head->name).second) {
        if (args.size() == 1 && is_entity(arg_type(args[0])))
          v.upreds.push_back(head->name);
        else if (args.size() == 2 && is_entity(arg_type(args[0])) &&
                 is_degree(arg_type(args[1])))
          v.dpreds.push_back(head->name);
        else
          throw ccgnli::Error("oracle: unsupported predicate shape " +
                              head->name);
      }
      for (const auto& a : args) scan_term(a, v, seen);
      return;
    }
    if (t->kind == TermKind::Const) {
      if (seen.insert(t->name).second) {
        if (is_entity(t->type))
          v.econsts.push_back(t->name);
        else if (is_degree(t->type))
          v.dconsts.push_back(t->name);
        else
          throw ccgnli::Error("oracle: unsupported constant " + t->name);
      }
      return;
    }
    if (t->kind == TermKind::Num) {
      if (!t->value.is_integer() || t->value < ccgnli::Rational(0) ||
          !(t->value < ccgnli::Rational(chain_)))
        throw ccgnli::Error("oracle: numeral outside degree chain");
      return;
    }
    scan_term(t->a, v, seen);
    scan_term(t->b, v, seen);
  }

  Vocab scan(const OracleTask& task) const {
    Vocab v;
    std::set<std::string> seen;
    for (const auto& p : task.premises) scan_term(p.term(), v, seen);
    scan_term(task.goal.term(), v, seen);
    return v;
  }

  // Enumerates symbol interpretations depth-first; index walks the symbol
  // list in vocab order (upreds, dpreds, econsts, dconsts).
  bool search(const OracleTask& task, const Vocab& v, int n, std::size_t idx,
              Model& m) const {
    std::size_t nu = v.upreds.size(), nd = v.dpreds.size(),
                ne = v.econsts.size();
    if (idx < nu) {
      for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        m.upred[v.upreds[idx]] = mask;
        if (search(task, v, n, idx + 1, m)) return true;
      }
      return false;
    }
    if (idx < nu + nd) {
      std::vector<int> thr(n, 0);
      while (true) {
        m.dpred[v.dpreds[idx - nu]] = thr;
        if (search(task, v, n, idx + 1, m)) return true;
        int i = 0;
        while (i < n && thr[i] == chain_) thr[i++] = 0;
        if (i == n) return false;
        ++thr[i];
      }
    }
    if (idx < nu + nd + ne) {
      for (int e = 0; e < n; ++e) {
        m.econst[v.econsts[idx - nu - nd]] = e;
        if (search(task, v, n, idx + 1, m)) return true;
      }
      return false;
    }
    if (idx < nu + nd + ne + v.dconsts.size()) {
      for (int d = 0; d < chain_; ++d) {
        m.dconst[v.dconsts[idx - nu - nd - ne]] = d;
        if (search(task, v, n, idx + 1, m)) return true;
      }
      return false;
    }
    for (const auto& p : task.premises) {
      std::map<std::string, int> env;
      if (!eval(p.term(), m, n, env)) return false;
    }
    std::map<std::string, int> env;
    return !eval(task.goal.term(), m, n, env);
  }

  int eval_individual(const ccgnli::TermPtr& t, const Model& m,
                      const std::map<std::string, int>& env) const {
    using ccgnli::TermKind;
    switch (t->kind) {
      case TermKind::Var:
        return env.at(t->name);
      case TermKind::Const:
        return is_entity(t->type) ? m.econst.at(t->name)
                                  : m.dconst.at(t->name);
      case TermKind::Num:
        return static_cast<int>(t->value.num());
      default:
        throw ccgnli::Error("oracle: unsupported individual term");
    }
  }

  bool eval(const ccgnli::TermPtr& t, const Model& m, int n,
            std::map<std::string, int>& env) const {
    using ccgnli::TermKind;
    switch (t->kind) {
      case TermKind::Not:
        return !eval(t->a, m, n, env);
      case TermKind::And:
        return eval(t->a, m, n, env) && eval(t->b, m, n, env);
      case TermKind::Or:
        return eval(t->a, m, n, env) || eval(t->b, m, n, env);
      case TermKind::Implies:
        return !eval(t->a, m, n, env) || eval(t->b, m, n, env);
      case TermKind::Iff:
        return eval(t->a, m, n, env) == eval(t->b, m, n, env);
      case TermKind::Exists:
      case TermKind::Forall: {
        bool exists = t->kind == TermKind::Exists;
        int lim = is_entity(t->type) ? n : chain_;
        for (int i = 0; i < lim; ++i) {
          env[t->name] = i;
          bool r = eval(t->a, m, n, env);
          if (r == exists) {
            env.erase(t->name);
            return exists;
          }
        }
        env.erase(t->name);
        return !exists;
      }
      case TermKind::Eq:
        return eval_individual(t->a, m, env) == eval_individual(t->b, m, env);
      case TermKind::Less:
        return eval_individual(t->a, m, env) < eval_individual(t->b, m, env);
      case TermKind::Leq:
        return eval_individual(t->a, m, env) <= eval_individual(t->b, m, env);
      case TermKind::App: {
        std::vector<ccgnli::TermPtr> args;
        ccgnli::TermPtr head = t;
        while (head->kind == TermKind::App) {
          args.insert(args.begin(), head->b);
          head = head->a;
        }
        if (args.size() == 1) {
          int e = eval_individual(args[0], m, env);
          return (m.upred.at(head->name) >> e) & 1u;
        }
        int e = eval_individual(args[0], m, env);
        int d = eval_individual(args[1], m, env);
        return d < m.dpred.at(head->name)[e];
      }
      default:
        throw ccgnli::Error("oracle: unsupported formula node");
    }
  }

  std::string describe(const Vocab& v, int n, const Model& m) const {
    std::ostringstream os;
    os << "domain " << n;
    for (const auto& p : v.upreds) {
      os << " " << p << "={";
      for (int e = 0; e < n; ++e)
        if ((m.upred.at(p) >> e) & 1u) os << e << " ";
      os << "}";
    }
    for (const auto& p : v.dpreds) {
      os << " " << p << "=[";
      for (int e = 0; e < n; ++e) os << m.dpred.at(p)[e] << " ";
      os << "]";
    }
    for (const auto& [k, e] : m.econst) os << " " << k << "=" << e;
    for (const auto& [k, d] : m.dconst) os << " " << k << "=" << d;
    return os.str();
  }
};

}  // namespace testsupport
