#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ttb/rdf/term.hpp"

namespace ttb {
namespace canon_detail {

/// Deterministic blank-node labeling by color refinement plus
/// individualization. Colors start uniform and are refined by the multiset
/// of incident triple signatures (label-free renderings with the focus node
/// starred and other blank nodes shown as their color). When refinement
/// leaves ties, every individualization of the first tied class is explored
/// and the lexicographically smallest certificate wins, so isomorphic
/// graphs land on identical labelings. A leaf budget caps the search;
/// symmetric graphs hit automorphisms long before it.
class Canonicalizer {
 public:
  Canonicalizer(const Graph& g, int leaf_budget) : budget_(leaf_budget < 1 ? 1 : leaf_budget) {
    for (const Triple& t : g.triples) {
      note_bnode(to_term(t.subject));
      note_bnode(t.object);
    }
    int k = 0;
    for (auto& [label, idx] : index_of_) idx = k++;
    incident_.resize(static_cast<std::size_t>(k));
    int ti = 0;
    for (const Triple& t : g.triples) {
      triples_.push_back(&t);
      int s = bnode_index(to_term(t.subject));
      int o = bnode_index(t.object);
      if (s >= 0) incident_[static_cast<std::size_t>(s)].push_back(ti);
      if (o >= 0 && o != s) incident_[static_cast<std::size_t>(o)].push_back(ti);
      ++ti;
    }
  }

  int bnode_count() const { return static_cast<int>(index_of_.size()); }
  const std::map<std::string, int>& index_of() const { return index_of_; }

  /// Canonical rank per blank-node index.
  std::vector<int> run() {
    std::vector<int> colors(static_cast<std::size_t>(bnode_count()), 0);
    refine(colors);
    if (is_discrete(colors)) return colors;
    search(colors);
    return best_ranks_;
  }

 private:
  int budget_;
  std::map<std::string, int> index_of_;
  std::vector<const Triple*> triples_;
  std::vector<std::vector<int>> incident_;
  int leaves_ = 0;
  std::string best_cert_;
  std::vector<int> best_ranks_;

  void note_bnode(const Term& t) {
    if (const auto* b = std::get_if<BlankNode>(&t)) index_of_.emplace(b->label, 0);
  }

  int bnode_index(const Term& t) const {
    if (const auto* b = std::get_if<BlankNode>(&t)) return index_of_.at(b->label);
    return -1;
  }

  std::string sig_part(const Term& t, int focus, const std::vector<int>& colors) const {
    if (const auto* b = std::get_if<BlankNode>(&t)) {
      int i = index_of_.at(b->label);
      if (i == focus) return "*";
      return "?" + std::to_string(colors[static_cast<std::size_t>(i)]);
    }
    return render_term(t);
  }

  std::string triple_sig(const Triple& t, int focus, const std::vector<int>& colors) const {
    return sig_part(to_term(t.subject), focus, colors) + " <" + t.predicate.value + "> " +
           sig_part(t.object, focus, colors);
  }

  /// One signature round: new color = rank of (old color, sorted incident
  /// signatures). Ranks preserve the old order, so partitions only ever
  /// split; fixpoint when the color vector stops changing.
  void refine(std::vector<int>& colors) const {
    int k = bnode_count();
    while (true) {
      std::vector<std::pair<int, std::vector<std::string>>> keys(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) {
        std::vector<std::string> sigs;
        sigs.reserve(incident_[static_cast<std::size_t>(i)].size());
        for (int ti : incident_[static_cast<std::size_t>(i)]) {
          sigs.push_back(triple_sig(*triples_[static_cast<std::size_t>(ti)], i, colors));
        }
        std::sort(sigs.begin(), sigs.end());
        keys[static_cast<std::size_t>(i)] = {colors[static_cast<std::size_t>(i)], std::move(sigs)};
      }
      std::vector<std::pair<int, std::vector<std::string>>> sorted = keys;
      std::sort(sorted.begin(), sorted.end());
      sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
      std::vector<int> next(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) {
        auto it = std::lower_bound(sorted.begin(), sorted.end(), keys[static_cast<std::size_t>(i)]);
        next[static_cast<std::size_t>(i)] = static_cast<int>(it - sorted.begin());
      }
      if (next == colors) return;
      colors = std::move(next);
    }
  }

  static int class_count(std::vector<int> colors) {
    std::sort(colors.begin(), colors.end());
    colors.erase(std::unique(colors.begin(), colors.end()), colors.end());
    return static_cast<int>(colors.size());
  }

  bool is_discrete(const std::vector<int>& colors) const {
    return class_count(colors) == bnode_count();
  }

  std::string certificate(const std::vector<int>& ranks) const {
    std::vector<std::string> lines;
    lines.reserve(triples_.size());
    auto part = [&](const Term& term) {
      if (const auto* b = std::get_if<BlankNode>(&term)) {
        return "_:c" + std::to_string(ranks[static_cast<std::size_t>(index_of_.at(b->label))]);
      }
      return render_term(term);
    };
    for (const Triple* t : triples_) {
      lines.push_back(part(to_term(t->subject)) + " <" + t->predicate.value + "> " +
                      part(t->object));
    }
    std::sort(lines.begin(), lines.end());
    std::string out;
    for (const std::string& l : lines) {
      out += l;
      out += '\n';
    }
    return out;
  }

  void search(std::vector<int> colors) {
    refine(colors);
    if (leaves_ >= budget_) return;
    if (is_discrete(colors)) {
      ++leaves_;
      std::string cert = certificate(colors);
      if (best_cert_.empty() || cert < best_cert_) {
        best_cert_ = std::move(cert);
        best_ranks_ = std::move(colors);
      }
      return;
    }
    int k = bnode_count();
    int target = -1;
    for (int c = 0; c < k && target < 0; ++c) {
      if (std::count(colors.begin(), colors.end(), c) >= 2) target = c;
    }
    for (int i = 0; i < k; ++i) {
      if (colors[static_cast<std::size_t>(i)] != target) continue;
      std::vector<int> child = colors;
      child[static_cast<std::size_t>(i)] = k;  // fresh color outside 0..k-1
      search(std::move(child));
      if (leaves_ >= budget_) return;
    }
  }
};

}  // namespace canon_detail

/// Relabel blank nodes with canonical "c<rank>" labels so that isomorphic
/// graphs compare equal as plain triple sets (exact within the search
/// budget; see Canonicalizer).
inline Graph canonicalize_blank_nodes(const Graph& g, int leaf_budget = 10000) {
  canon_detail::Canonicalizer canon(g, leaf_budget);
  if (canon.bnode_count() == 0) return g;
  std::vector<int> ranks = canon.run();
  std::map<std::string, std::string> rename;
  for (const auto& [label, idx] : canon.index_of()) {
    rename[label] = "c" + std::to_string(ranks[static_cast<std::size_t>(idx)]);
  }
  Graph out;
  out.prefixes = g.prefixes;
  auto map_term = [&](const Term& t) -> Term {
    if (const auto* b = std::get_if<BlankNode>(&t)) return BlankNode{rename.at(b->label)};
    return t;
  };
  for (const Triple& t : g.triples) {
    Term s = map_term(to_term(t.subject));
    out.add(Triple{*as_subject(s), t.predicate, map_term(t.object)});
  }
  return out;
}

}  // namespace ttb
