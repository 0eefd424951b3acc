#pragma once

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ccgnli/cky.hpp"
#include "ccgnli/compose.hpp"
#include "ccgnli/fuse.hpp"
#include "ccgnli/lexknow.hpp"
#include "ccgnli/problems.hpp"
#include "ccgnli/prover.hpp"
#include "ccgnli/rewrite.hpp"
#include "ccgnli/templates.hpp"

namespace ccgnli {

// End-to-end pipeline: token stream, parse or ingest, monotonicity feature
// rewriting, composition, lexical axiom synthesis, entailment decision.
// Stage failures never abort a run; they downgrade the verdict to unknown
// with the diagnostic kept in the trace.

struct Resources {
  Lexicon lexicon;
  TemplateBank templates;
  KnowledgeBase kb;
  ScaleResolver scales;

  void load_data_dir(const std::string& dir, const std::string& kb_path = "") {
    lexicon.load_dir(dir);
    templates.load(dir + "/templates.tsv");
    kb.load(kb_path.empty() ? dir + "/kb.tsv" : kb_path);
    scales = ScaleResolver(kb);
  }
};

struct RunConfig {
  bool use_lexical = true;
  bool binary_labels = false;
  bool event_coref = true;
  bool prove = true;  // off composes and builds the task without proving
  ProverBudget budget;
  bool record_trace = false;
};

struct SentenceTrace {
  std::string role;
  std::string text;
  std::string tree;
  std::string formula;
  std::string error;
};

struct RunResult {
  std::string id;
  Verdict verdict{Verdict::Unknown};
  bool pipeline_ok{};
  Decision decision;
  std::vector<Formula> premise_forms;
  Formula hypothesis_form;
  std::vector<SentenceTrace> sentences;
  std::vector<std::string> diagnostics;
  double seconds{};
};

namespace detail {

inline std::string surface_text(const Sentence& s) {
  if (!s.text.empty()) return s.text;
  std::string out;
  for (const auto& t : s.tokens) {
    if (!out.empty()) out += " ";
    out += t.surface;
  }
  return out;
}

inline std::optional<std::string> oov_token(const std::vector<ccgnli::Token>& ts,
                                            const Lexicon& lex) {
  for (const auto& t : ts) {
    if (t.fused_category || !t.attrs.template_key.empty()) continue;
    if (!lex.lookup(t.lemma, t.pos)) return t.surface;
  }
  return std::nullopt;
}

// Composes one sentence. Candidate parses are tried in chart order and the
// first that composes wins; the first failure is reported when none does.
inline std::optional<Formula> process_sentence(const Sentence& s,
                                               const std::string& role,
                                               const Resources& res,
                                               SentenceTrace& trace) {
  trace.role = role;
  trace.text = surface_text(s);
  try {
    if (s.has_derivation()) {
      TreePtr tree = ingest_derivation(s.derivation);
      tree = rewrite_monotonicity_features(tree, res.lexicon);
      trace.tree = tree_str(tree);
      Composer comp(res.templates, res.lexicon, res.scales);
      Formula f = comp.compose(tree);
      trace.formula = formula_str(f);
      return f;
    }
    std::vector<ccgnli::Token> fused = fuse_tokens(s.tokens, res.lexicon);
    if (auto oov = oov_token(fused, res.lexicon))
      throw OutOfVocabularyError(*oov);
    CkyParser parser(res.lexicon);
    std::vector<TreePtr> parses = parser.parse(fused);
    if (parses.empty()) throw CompositionError("no parse");
    std::string first_error;
    for (const auto& tree : parses) {
      try {
        TreePtr rt = rewrite_monotonicity_features(tree, res.lexicon);
        Composer comp(res.templates, res.lexicon, res.scales);
        Formula f = comp.compose(rt);
        trace.tree = tree_str(rt);
        trace.formula = formula_str(f);
        return f;
      } catch (const Error& e) {
        if (first_error.empty()) first_error = e.what();
      }
    }
    throw CompositionError(first_error.empty() ? "no composable parse"
                                               : first_error);
  } catch (const Error& e) {
    trace.error = e.what();
    return std::nullopt;
  } catch (const std::exception& e) {
    trace.error = std::string("internal: ") + e.what();
    return std::nullopt;
  }
}

}  // namespace detail

inline RunResult run_problem(const Problem& p, const Resources& res,
                             const RunConfig& cfg = {}) {
  auto t0 = std::chrono::steady_clock::now();
  RunResult r;
  r.id = p.id;
  r.pipeline_ok = true;

  for (size_t i = 0; i < p.premises.size(); ++i) {
    SentenceTrace tr;
    auto f = detail::process_sentence(
        p.premises[i], "premise " + std::to_string(i + 1), res, tr);
    if (f) {
      r.premise_forms.push_back(*f);
    } else {
      r.pipeline_ok = false;
      r.diagnostics.push_back(tr.role + ": " + tr.error);
    }
    r.sentences.push_back(std::move(tr));
  }
  {
    SentenceTrace tr;
    auto f = detail::process_sentence(p.hypothesis, "hypothesis", res, tr);
    if (f) {
      r.hypothesis_form = *f;
    } else {
      r.pipeline_ok = false;
      r.diagnostics.push_back(tr.role + ": " + tr.error);
    }
    r.sentences.push_back(std::move(tr));
  }

  if (r.pipeline_ok) {
    DecideOptions opt;
    opt.event_coref = cfg.event_coref;
    opt.binary_labels = cfg.binary_labels;
    opt.use_lexical = cfg.use_lexical;
    opt.prove = cfg.prove;
    opt.budget = cfg.budget;
    opt.record_trace = cfg.record_trace;
    try {
      r.decision =
          decide_entailment(r.premise_forms, r.hypothesis_form, res.kb, opt);
      r.verdict = r.decision.verdict;
    } catch (const std::exception& e) {
      r.pipeline_ok = false;
      r.diagnostics.push_back(std::string("decision: ") + e.what());
      r.verdict = Verdict::Unknown;
    }
  }

  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                            t0)
                  .count();
  return r;
}

// ---------------------------------------------------------------------------
// Evaluation.

struct ProblemOutcome {
  std::string id;
  Verdict gold{Verdict::Unknown};
  Verdict got{Verdict::Unknown};
  bool correct{};
  std::set<std::string> tags;
  RunResult run;
};

inline int verdict_index(Verdict v) {
  return v == Verdict::Yes ? 0 : (v == Verdict::No ? 1 : 2);
}

struct Report {
  std::vector<ProblemOutcome> outcomes;  // ordered by problem id
  int total{};
  int correct_n{};
  std::map<std::string, std::pair<int, int>> per_tag;  // correct, total
  long long confusion[3][3]{};                         // [gold][verdict]
  double seconds{};

  bool has_accuracy() const { return total > 0; }
  double accuracy() const {
    return total ? static_cast<double>(correct_n) / total : 0.0;
  }
  std::string accuracy_str() const {
    if (!has_accuracy()) return "n/a";
    std::ostringstream os;
    os.precision(4);
    os << std::fixed << accuracy();
    return os.str();
  }

  // Machine-readable line-delimited records, one per problem plus one
  // summary line.
  std::string jsonl() const {
    std::ostringstream os;
    for (const auto& o : outcomes) {
      nlohmann::json j;
      j["id"] = o.id;
      j["gold"] = verdict_str(o.gold);
      j["verdict"] = verdict_str(o.got);
      j["correct"] = o.correct;
      j["tags"] = std::vector<std::string>(o.tags.begin(), o.tags.end());
      j["seconds"] = o.run.seconds;
      if (!o.run.diagnostics.empty()) j["diagnostics"] = o.run.diagnostics;
      os << j.dump() << "\n";
    }
    nlohmann::json sum;
    sum["total"] = total;
    sum["correct"] = correct_n;
    sum["accuracy"] = has_accuracy() ? nlohmann::json(accuracy())
                                     : nlohmann::json("n/a");
    sum["seconds"] = seconds;
    nlohmann::json tagj;
    for (const auto& [tag, ct] : per_tag) {
      tagj[tag] = {{"correct", ct.first}, {"total", ct.second}};
    }
    sum["per_tag"] = tagj;
    os << sum.dump() << "\n";
    return os.str();
  }

  std::string table() const {
    std::ostringstream os;
    os << "id                    gold      verdict   ok  tags\n";
    os << "--------------------  --------  --------  --  ----\n";
    for (const auto& o : outcomes) {
      std::string tags;
      for (const auto& t : o.tags) {
        if (!tags.empty()) tags += ",";
        tags += t;
      }
      char line[256];
      std::snprintf(line, sizeof line, "%-20s  %-8s  %-8s  %-2s  %s\n",
                    o.id.c_str(), verdict_str(o.gold), verdict_str(o.got),
                    o.correct ? "ok" : "XX", tags.c_str());
      os << line;
    }
    os << "\naccuracy: " << correct_n << "/" << total << " = "
       << accuracy_str() << "\n";
    os << "\nper tag:\n";
    for (const auto& [tag, ct] : per_tag) {
      std::ostringstream acc;
      acc.precision(3);
      acc << std::fixed
          << (ct.second ? static_cast<double>(ct.first) / ct.second : 0.0);
      os << "  " << tag << ": " << ct.first << "/" << ct.second << " = "
         << (ct.second ? acc.str() : "n/a") << "\n";
    }
    static const char* labels[3] = {"yes", "no", "unknown"};
    os << "\nconfusion (rows gold, columns verdict):\n";
    os << "            yes       no        unknown\n";
    for (int g = 0; g < 3; ++g) {
      char line[128];
      std::snprintf(line, sizeof line, "  %-8s  %-8lld  %-8lld  %-8lld\n",
                    labels[g], confusion[g][0], confusion[g][1],
                    confusion[g][2]);
      os << line;
    }
    return os.str();
  }
};

inline Report evaluate(const std::vector<Problem>& problems,
                       const Resources& res, const RunConfig& cfg = {}) {
  auto t0 = std::chrono::steady_clock::now();
  Report rep;
  for (const auto& p : problems) {
    ProblemOutcome o;
    o.id = p.id;
    o.gold = p.gold;
    o.tags = p.tags;
    o.run = run_problem(p, res, cfg);
    o.got = o.run.verdict;
    o.correct = o.got == o.gold;
    ++rep.total;
    if (o.correct) ++rep.correct_n;
    for (const auto& tag : o.tags) {
      auto& ct = rep.per_tag[tag];
      if (o.correct) ++ct.first;
      ++ct.second;
    }
    ++rep.confusion[verdict_index(o.gold)][verdict_index(o.got)];
    rep.outcomes.push_back(std::move(o));
  }
  std::sort(rep.outcomes.begin(), rep.outcomes.end(),
            [](const ProblemOutcome& a, const ProblemOutcome& b) {
              return a.id < b.id;
            });
  rep.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return rep;
}

}  // namespace ccgnli
