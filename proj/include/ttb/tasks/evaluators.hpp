#pragma once

#include <set>
#include <string>

#include "ttb/graph/analysis.hpp"
#include "ttb/rdf/compare.hpp"
#include "ttb/rdf/iri_extract.hpp"
#include "ttb/rdf/repair.hpp"
#include "ttb/tasks/task.hpp"
#include "ttb/util/strings.hpp"

namespace ttb {
namespace eval_detail {

inline void put_prf(MetricSet& m, const ScoreTriple& s) {
  m["precision"] = s.precision;
  m["recall"] = s.recall;
  m["f1"] = s.f1;
}

/// A line is an IRI line when the extractor reads the whole trimmed line
/// back as a single IRI.
inline bool is_iri_line(std::string_view line) {
  std::vector<Iri> got = extract_iris(line);
  return got.size() == 1 && got[0].value == line;
}

inline bool only_iri_lines(const std::string& response) {
  bool any = false;
  for (const std::string& raw : split_lines(response)) {
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (!is_iri_line(line)) return false;
    any = true;
  }
  return any;
}

inline ScoreTriple iri_set_score(const std::vector<Iri>& found, const std::set<Iri>& expected) {
  std::set<Iri> cand(found.begin(), found.end());
  std::size_t overlap = 0;
  for (const Iri& iri : cand) {
    if (expected.count(iri)) ++overlap;
  }
  return compare_detail::from_counts(overlap, cand.size(), expected.size());
}

}  // namespace eval_detail

/// IRI-set precision/recall/F1 against the five path nodes, plus a strict
/// format flag: compliant answers contain nothing but IRI lines.
inline MetricSet evaluate_t1(const std::string& response, const TaskInstance& inst) {
  const auto& expected = std::get<std::set<Iri>>(inst.expected);
  MetricSet m;
  eval_detail::put_prf(m, eval_detail::iri_set_score(extract_iris(response), expected));
  m["output_compliance"] = eval_detail::only_iri_lines(response) ? 1.0 : 0.0;
  return m;
}

namespace eval_detail {

inline MetricSet graph_f1_metrics(const std::string& response, const Graph& reference) {
  RepairResult rr = repair_parse(response);
  MetricSet m;
  put_prf(m, triple_set_f1(rr.graph, reference));
  m["raw_parsable"] = rr.raw_parsable ? 1.0 : 0.0;
  return m;
}

}  // namespace eval_detail

/// Repair the response, then triple-set F1 against the intact document.
inline MetricSet evaluate_t2(const std::string& response, const TaskInstance& inst) {
  return eval_detail::graph_f1_metrics(response, std::get<Graph>(inst.expected));
}

/// Structure checks on a generated person graph. Strict parse, no repair:
/// the parsability of the raw answer is the first thing this task measures.
inline MetricSet evaluate_t3(const std::string& response, const TaskInstance& inst) {
  const int n = inst.n_persons.value();
  ParseResult pr = parse_turtle(response);
  Graph g = pr.ok ? std::move(pr.graph) : Graph{};

  const Iri person{std::string(vocab::foaf_person)};
  const Iri knows{std::string(vocab::foaf_knows)};
  std::set<Term> typed = instances_of(g, person);
  const auto count = static_cast<double>(typed.size());

  std::set<Term> participants;
  for (const Triple& t : g.triples) {
    if (!(t.predicate == knows)) continue;
    participants.insert(to_term(t.subject));
    participants.insert(t.object);
  }
  double coverage = 0.0;
  if (!participants.empty()) {
    std::size_t covered = 0;
    for (const Term& p : participants) {
      if (typed.count(p)) ++covered;
    }
    coverage = static_cast<double>(covered) / static_cast<double>(participants.size());
  }

  DegreeCensus census = degree_census(g, knows);
  double compliance = 0.0;
  if (!typed.empty()) {
    std::size_t ok = 0;
    for (const Term& p : typed) {
      auto it = census.out_degree.find(p);
      int deg = it == census.out_degree.end() ? 0 : it->second;
      if (deg >= 2 && deg <= n - 1) ++ok;
    }
    compliance = static_cast<double>(ok) / static_cast<double>(typed.size());
  }

  MetricSet m;
  m["raw_parsable"] = pr.ok ? 1.0 : 0.0;
  m["persons_relative_error"] = (count - n) / static_cast<double>(n);
  m["type_coverage"] = coverage;
  m["degree_compliance"] = compliance;
  return m;
}

/// Singleton IRI-set F1 against the designated person, plus an exact-match
/// compliance flag (the prompt demands the bare IRI and nothing else).
inline MetricSet evaluate_t4(const std::string& response, const TaskInstance& inst) {
  const Iri& expected = std::get<Iri>(inst.expected);
  MetricSet m;
  eval_detail::put_prf(m, eval_detail::iri_set_score(extract_iris(response), {expected}));
  m["output_compliance"] = trim(response) == expected.value ? 1.0 : 0.0;
  return m;
}

/// Same pipeline as the error-fixing task, against the factsheet reference.
inline MetricSet evaluate_t5(const std::string& response, const TaskInstance& inst) {
  return eval_detail::graph_f1_metrics(response, std::get<Graph>(inst.expected));
}

inline MetricSet evaluate(const TaskInstance& inst, const std::string& response) {
  switch (inst.task_id) {
    case TaskId::T1: return evaluate_t1(response, inst);
    case TaskId::T2: return evaluate_t2(response, inst);
    case TaskId::T3: return evaluate_t3(response, inst);
    case TaskId::T4: return evaluate_t4(response, inst);
    case TaskId::T5: return evaluate_t5(response, inst);
  }
  return {};
}

}  // namespace ttb
