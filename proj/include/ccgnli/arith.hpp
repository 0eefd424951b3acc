#pragma once

#include <map>
#include <string>
#include <vector>

#include "ccgnli/rational.hpp"
#include "ccgnli/util.hpp"

namespace ccgnli {

// Degree-order constraints: conjunctions of s < t, s <= t, s = t, s != t
// over degree variables and unit-tagged rational literals. Decided as
// difference constraints: every atom becomes x - y <= c with a strictness
// bit, literals anchor to one zero node per unit, and a negative cycle
// (or a zero-weight cycle containing a strict edge) means unsatisfiable.
// Variables marked integral get their bounds tightened to whole numbers
// before solving, so 10 < d forces 11 <= d.

struct ArithTerm {
  bool is_lit{};
  Rational value;     // literal only
  std::string unit;   // literal only; "" is a pure number
  std::string name;   // variable only
  bool integral{};    // variable ranges over whole counts
};

inline ArithTerm arith_lit(const Rational& v, const std::string& unit = "") {
  ArithTerm t;
  t.is_lit = true;
  t.value = v;
  t.unit = unit;
  return t;
}

inline ArithTerm arith_var(const std::string& name, bool integral = false) {
  ArithTerm t;
  t.name = name;
  t.integral = integral;
  return t;
}

enum class ArithOp { Lt, Le, Eq, Neq };

struct ArithAtom {
  ArithOp op{};
  ArithTerm lhs, rhs;
};

inline std::string arith_atom_str(const ArithAtom& a) {
  auto ts = [](const ArithTerm& t) {
    if (!t.is_lit) return t.name;
    return t.unit.empty() ? t.value.str() : t.value.str() + " " + t.unit;
  };
  const char* op = a.op == ArithOp::Lt   ? " < "
                   : a.op == ArithOp::Le ? " <= "
                   : a.op == ArithOp::Eq ? " = "
                                         : " != ";
  return ts(a.lhs) + op + ts(a.rhs);
}

namespace detail {

struct DiffEdge {
  int from{}, to{};  // constraint node[from] - node[to] <= weight
  Rational weight;
  bool strict{};
};

class DiffSolver {
public:
  // Returns false on an inconsistency among the non-Neq atoms.
  bool add(const ArithAtom& a) {
    switch (a.op) {
      case ArithOp::Lt: return constrain(a.lhs, a.rhs, true);
      case ArithOp::Le: return constrain(a.lhs, a.rhs, false);
      case ArithOp::Eq:
        return constrain(a.lhs, a.rhs, false) &&
               constrain(a.rhs, a.lhs, false);
      case ArithOp::Neq:
        throw Error("Neq atoms are split before reaching DiffSolver");
    }
    return true;
  }

  bool feasible() {
    size_t n = units_.size();
    // Distances are c - k*epsilon for an infinitesimal epsilon; each strict
    // edge contributes one epsilon, so a zero-weight cycle with a strict
    // edge keeps relaxing and the detection pass reports it.
    struct Dist {
      Rational c;
      long long eps{};
      bool tighter_than(const Dist& o) const {
        return c < o.c || (c == o.c && eps > o.eps);
      }
    };
    std::vector<Dist> dist(n);
    std::vector<DiffEdge> edges = edges_;
    for (auto& e : edges) tighten(e);
    auto relaxed = [&](const DiffEdge& e) {
      Dist cand{dist[e.to].c + e.weight, dist[e.to].eps + (e.strict ? 1 : 0)};
      if (!cand.tighter_than(dist[e.from])) return false;
      dist[e.from] = cand;
      return true;
    };
    for (size_t pass = 0; pass + 1 < n || pass == 0; ++pass) {
      bool changed = false;
      for (const auto& e : edges)
        if (relaxed(e)) changed = true;
      if (!changed) return true;
    }
    for (const auto& e : edges) {
      Dist cand{dist[e.to].c + e.weight, dist[e.to].eps + (e.strict ? 1 : 0)};
      if (cand.tighter_than(dist[e.from])) return false;  // still relaxing
    }
    return true;
  }

private:
  // x - y <= c, strict or not, from lhs OP rhs with OP in {<, <=}.
  bool constrain(const ArithTerm& lhs, const ArithTerm& rhs, bool strict) {
    if (lhs.is_lit && rhs.is_lit) {
      if (lhs.unit != rhs.unit)
        throw UnitMismatchError("cannot compare " + lhs.value.str() + " " +
                                lhs.unit + " with " + rhs.value.str() + " " +
                                rhs.unit);
      return strict ? lhs.value < rhs.value : lhs.value <= rhs.value;
    }
    DiffEdge e;
    e.strict = strict;
    if (lhs.is_lit) {
      // c <= x  becomes  zero - x <= -c
      e.from = zero_node(lhs.unit);
      e.to = node(rhs);
      e.weight = Rational(0) - lhs.value;
    } else if (rhs.is_lit) {
      // x <= c  becomes  x - zero <= c
      e.from = node(lhs);
      e.to = zero_node(rhs.unit);
      e.weight = rhs.value;
    } else {
      e.from = node(lhs);
      e.to = node(rhs);
      e.weight = Rational(0);
    }
    join(e.from, e.to);
    edges_.push_back(e);
    return true;
  }

  void tighten(DiffEdge& e) const {
    if (!integral_[e.from] || !integral_[e.to]) return;
    if (e.strict) {
      e.weight = Rational(e.weight.ceil() - 1);
      e.strict = false;
    } else {
      e.weight = Rational(e.weight.floor());
    }
  }

  int node(const ArithTerm& v) {
    auto it = vars_.find(v.name);
    if (it != vars_.end()) {
      if (v.integral) integral_[it->second] = true;
      return it->second;
    }
    int id = new_node(v.integral, "?");
    vars_.emplace(v.name, id);
    return id;
  }

  int zero_node(const std::string& unit) {
    auto it = zeros_.find(unit);
    if (it != zeros_.end()) return it->second;
    int id = new_node(unit.empty(), unit);
    zeros_.emplace(unit, id);
    return id;
  }

  int new_node(bool integral, std::string unit) {
    int id = static_cast<int>(units_.size());
    units_.push_back(std::move(unit));
    integral_.push_back(integral);
    parent_.push_back(id);
    return id;
  }

  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  // Union the components; two different concrete units in one component
  // would let incommensurable scales constrain each other.
  void join(int a, int b) {
    int ra = find(a), rb = find(b);
    if (ra == rb) return;
    const std::string &ua = units_[ra], &ub = units_[rb];
    if (ua != "?" && ub != "?" && ua != ub)
      throw UnitMismatchError("constraint links unit '" + ua +
                              "' with unit '" + ub + "'");
    parent_[ra] = rb;
    if (ub == "?" && ua != "?") units_[rb] = ua;
  }

  std::map<std::string, int> vars_;
  std::map<std::string, int> zeros_;
  std::vector<std::string> units_;  // per node: unit, or "?" for variables
  std::vector<bool> integral_;
  std::vector<int> parent_;
  std::vector<DiffEdge> edges_;
};

inline bool arith_sat_rec(const std::vector<ArithAtom>& fixed,
                          const std::vector<ArithAtom>& neqs, size_t k) {
  if (k == neqs.size()) {
    DiffSolver s;
    for (const auto& a : fixed)
      if (!s.add(a)) return false;
    return s.feasible();
  }
  ArithAtom lt{ArithOp::Lt, neqs[k].lhs, neqs[k].rhs};
  ArithAtom gt{ArithOp::Lt, neqs[k].rhs, neqs[k].lhs};
  auto with = [&](const ArithAtom& extra) {
    std::vector<ArithAtom> next = fixed;
    next.push_back(extra);
    return arith_sat_rec(next, neqs, k + 1);
  };
  return with(lt) || with(gt);
}

}  // namespace detail

// Satisfiability of a conjunction of degree-order atoms. Disequalities are
// split into the two strict orders, so each adds a factor of two; callers
// keep them scarce.
inline bool arith_satisfiable(const std::vector<ArithAtom>& atoms) {
  std::vector<ArithAtom> fixed, neqs;
  for (const auto& a : atoms)
    (a.op == ArithOp::Neq ? neqs : fixed).push_back(a);
  if (neqs.size() > 16)
    throw Error("too many disequalities for the degree solver");
  return detail::arith_sat_rec(fixed, neqs, 0);
}

}  // namespace ccgnli
