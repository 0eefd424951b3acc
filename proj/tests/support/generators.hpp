#pragma once

// Seeded random generators for prover and arithmetic stress tests. All
// randomness flows from the caller's engine, so suites stay reproducible.

#include <random>
#include <string>
#include <vector>

#include <ccgnli/arith.hpp>
#include <ccgnli/term.hpp>
#include <ccgnli/term_text.hpp>

namespace testsupport {

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int n) {
  return static_cast<int>(rng() % static_cast<unsigned>(n));
}

inline bool coin(Rng& rng) { return pick(rng, 2) == 0; }

// --- random monadic formulas with degrees -------------------------------

struct FormulaVocab {
  std::vector<std::string> upreds;   // entity -> truth
  std::vector<std::string> dpreds;   // entity -> degree -> truth
  std::vector<std::string> econsts;
  std::vector<std::string> dconsts;
  bool allow_entity_eq{false};
  int max_numeral{5};  // numerals drawn from [0, max_numeral)
};

inline FormulaVocab small_vocab(Rng& rng, bool with_degrees,
                                bool with_equality) {
  FormulaVocab v;
  v.upreds = {"p"};
  if (coin(rng)) v.upreds.push_back("q");
  if (with_degrees && coin(rng)) v.dpreds = {"g"};
  v.econsts = {"c1"};
  if (coin(rng)) v.econsts.push_back("c2");
  if (!v.dpreds.empty() && coin(rng)) v.dconsts = {"th_k1"};
  v.allow_entity_eq = with_equality;
  return v;
}

namespace detail {

struct GenState {
  std::vector<std::string> evars, dvars;
  int next_var{1};
};

inline ccgnli::TermPtr gen_entity(Rng& rng, const FormulaVocab& v,
                                  GenState& st) {
  if (!st.evars.empty() && (v.econsts.empty() || coin(rng)))
    return ccgnli::mk_var(st.evars[pick(rng, (int)st.evars.size())],
                          ccgnli::SemType::entity());
  return ccgnli::mk_const(v.econsts[pick(rng, (int)v.econsts.size())],
                          ccgnli::SemType::entity());
}

inline ccgnli::TermPtr gen_degree(Rng& rng, const FormulaVocab& v,
                                  GenState& st) {
  if (!st.dvars.empty() && coin(rng))
    return ccgnli::mk_var(st.dvars[pick(rng, (int)st.dvars.size())],
                          ccgnli::SemType::degree());
  if (!v.dconsts.empty() && coin(rng))
    return ccgnli::mk_const(v.dconsts[pick(rng, (int)v.dconsts.size())],
                            ccgnli::SemType::degree());
  return ccgnli::mk_num(ccgnli::Rational(pick(rng, v.max_numeral)));
}

inline ccgnli::TermPtr gen_atom(Rng& rng, const FormulaVocab& v,
                                GenState& st) {
  int kinds = 1 + (v.dpreds.empty() ? 0 : 2) + (v.allow_entity_eq ? 1 : 0);
  int k = pick(rng, kinds);
  if (k == 0) {
    const auto& p = v.upreds[pick(rng, (int)v.upreds.size())];
    auto ty = ccgnli::SemType::arrow(ccgnli::SemType::entity(),
                                     ccgnli::SemType::truth());
    return ccgnli::mk_app(ccgnli::mk_const(p, ty), gen_entity(rng, v, st));
  }
  if (!v.dpreds.empty() && k == 1) {
    const auto& p = v.dpreds[pick(rng, (int)v.dpreds.size())];
    auto ty = ccgnli::SemType::arrow(
        ccgnli::SemType::entity(),
        ccgnli::SemType::arrow(ccgnli::SemType::degree(),
                               ccgnli::SemType::truth()));
    return ccgnli::mk_app(
        ccgnli::mk_app(ccgnli::mk_const(p, ty), gen_entity(rng, v, st)),
        gen_degree(rng, v, st));
  }
  if (!v.dpreds.empty() && k == 2) {
    auto l = gen_degree(rng, v, st);
    auto r = gen_degree(rng, v, st);
    return coin(rng) ? ccgnli::mk_less(std::move(l), std::move(r))
                     : ccgnli::mk_leq(std::move(l), std::move(r));
  }
  return ccgnli::mk_eq(gen_entity(rng, v, st), gen_entity(rng, v, st));
}

inline ccgnli::TermPtr gen_formula(Rng& rng, const FormulaVocab& v,
                                   GenState& st, int depth) {
  if (depth <= 0) return gen_atom(rng, v, st);
  switch (pick(rng, 8)) {
    case 0:
      return gen_atom(rng, v, st);
    case 1:
      return ccgnli::mk_not(gen_formula(rng, v, st, depth - 1));
    case 2:
      return ccgnli::mk_and(gen_formula(rng, v, st, depth - 1),
                            gen_formula(rng, v, st, depth - 1));
    case 3:
      return ccgnli::mk_or(gen_formula(rng, v, st, depth - 1),
                           gen_formula(rng, v, st, depth - 1));
    case 4:
      return ccgnli::mk_implies(gen_formula(rng, v, st, depth - 1),
                                gen_formula(rng, v, st, depth - 1));
    case 5:
    case 6: {
      bool uni = pick(rng, 3) == 0;
      std::string x = "x" + std::to_string(st.next_var++);
      st.evars.push_back(x);
      auto body = gen_formula(rng, v, st, depth - 1);
      st.evars.pop_back();
      return uni ? ccgnli::mk_forall(x, ccgnli::SemType::entity(), body)
                 : ccgnli::mk_exists(x, ccgnli::SemType::entity(), body);
    }
    default: {
      if (v.dpreds.empty()) return gen_atom(rng, v, st);
      bool uni = pick(rng, 3) == 0;
      std::string d = "d" + std::to_string(st.next_var++);
      st.dvars.push_back(d);
      auto body = gen_formula(rng, v, st, depth - 1);
      st.dvars.pop_back();
      return uni ? ccgnli::mk_forall(d, ccgnli::SemType::degree(), body)
                 : ccgnli::mk_exists(d, ccgnli::SemType::degree(), body);
    }
  }
}

}  // namespace detail

inline ccgnli::Formula random_formula(Rng& rng, const FormulaVocab& v,
                                      int depth) {
  detail::GenState st;
  return ccgnli::Formula::make(detail::gen_formula(rng, v, st, depth));
}

// --- random difference-constraint systems -------------------------------

struct ArithCase {
  std::vector<ccgnli::ArithAtom> atoms;
  std::vector<std::string> vars;
};

inline ArithCase random_arith_case(Rng& rng, int max_vars, int max_atoms,
                                   bool allow_neq) {
  ArithCase c;
  int n = 2 + pick(rng, max_vars - 1);
  for (int i = 0; i < n; ++i) c.vars.push_back("v" + std::to_string(i));
  auto term = [&]() -> ccgnli::ArithTerm {
    if (pick(rng, 4) == 0) {
      // halves between -2 and 2
      return ccgnli::arith_lit(ccgnli::Rational(pick(rng, 9) - 4, 2));
    }
    return ccgnli::arith_var(c.vars[pick(rng, n)]);
  };
  int m = 1 + pick(rng, max_atoms);
  for (int i = 0; i < m; ++i) {
    ccgnli::ArithAtom a;
    int op = pick(rng, allow_neq ? 8 : 6);
    a.op = op < 3   ? ccgnli::ArithOp::Le
           : op < 5 ? ccgnli::ArithOp::Lt
           : op < 6 ? ccgnli::ArithOp::Eq
                    : ccgnli::ArithOp::Neq;
    a.lhs = term();
    a.rhs = term();
    c.atoms.push_back(a);
  }
  return c;
}

}  // namespace testsupport
