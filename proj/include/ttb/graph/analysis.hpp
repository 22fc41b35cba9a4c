#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "ttb/rdf/term.hpp"

namespace ttb {

struct PathResult {
  std::vector<Term> nodes;  // endpoints inclusive, blank nodes included
  int length = 0;           // edge count
};

struct DegreeCensus {
  std::map<Term, int> in_degree;
  std::map<Term, int> out_degree;
  Iri predicate;
};

/// BFS over the undirected view of g. Triples with excluded predicates are
/// skipped and literals never become path nodes. Among equal-length paths
/// the result is pinned by expanding neighbors in canonical term order.
inline std::optional<PathResult> shortest_path(const Graph& g, const Iri& start, const Iri& end,
                                               const std::set<Iri>& excluded_predicates = {}) {
  std::map<Term, std::set<Term>> adj;
  for (const Triple& t : g.triples) {
    if (excluded_predicates.count(t.predicate)) continue;
    if (is_literal(t.object)) continue;
    Term s = to_term(t.subject);
    adj[s].insert(t.object);
    adj[t.object].insert(s);
  }
  Term src{start};
  Term dst{end};
  if (!adj.count(src) || !adj.count(dst)) return std::nullopt;
  std::map<Term, Term> parent;
  std::deque<Term> queue{src};
  std::set<Term> visited{src};
  while (!queue.empty()) {
    Term cur = queue.front();
    queue.pop_front();
    if (cur == dst) {
      std::vector<Term> nodes{cur};
      while (!(nodes.back() == src)) nodes.push_back(parent.at(nodes.back()));
      std::reverse(nodes.begin(), nodes.end());
      return PathResult{nodes, static_cast<int>(nodes.size()) - 1};
    }
    for (const Term& nb : adj[cur]) {  // std::set iteration = canonical order
      if (visited.insert(nb).second) {
        parent.emplace(nb, cur);
        queue.push_back(nb);
      }
    }
  }
  return std::nullopt;
}

inline DegreeCensus degree_census(const Graph& g, const Iri& predicate) {
  DegreeCensus c;
  c.predicate = predicate;
  for (const Triple& t : g.triples) {
    if (!(t.predicate == predicate)) continue;
    c.out_degree[to_term(t.subject)] += 1;
    c.in_degree[t.object] += 1;
  }
  return c;
}

/// Node with the highest in-degree; `unique` reports whether the maximum is
/// attained once. Ties resolve to the canonically smallest node. Requires a
/// non-empty census.
inline std::pair<Term, bool> unique_max_in_degree(const DegreeCensus& census) {
  const Term* best = nullptr;
  int best_deg = -1;
  bool unique = true;
  for (const auto& [node, deg] : census.in_degree) {  // ascending canonical order
    if (deg > best_deg) {
      best = &node;
      best_deg = deg;
      unique = true;
    } else if (deg == best_deg) {
      unique = false;
    }
  }
  return {*best, unique};
}

inline std::set<Term> instances_of(const Graph& g, const Iri& cls) {
  std::set<Term> out;
  const Iri type{std::string(vocab::rdf_type)};
  for (const Triple& t : g.triples) {
    if (t.predicate == type && t.object == Term{cls}) out.insert(to_term(t.subject));
  }
  return out;
}

}  // namespace ttb
