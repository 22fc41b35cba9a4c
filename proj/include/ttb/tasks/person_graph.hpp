#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "ttb/rdf/term.hpp"
#include "ttb/util/rng.hpp"

namespace ttb {

struct PersonGraphSpec {
  int n = 0;
  int extra_links = 1;  // 1 or 2
  std::uint64_t seed = 0;
};

inline constexpr std::string_view kPersonNamespace = "https://example.org/";

/// "p" + zero-padded index. Width is fixed for a given n (at least 3
/// digits) so every person costs the same number of bytes — the size
/// calibration depends on that.
inline std::string person_iri(int index, int n) {
  int width = 3;
  for (long long v = n - 1; v >= 1000; v /= 10) ++width;
  std::string digits = std::to_string(index);
  std::string out(kPersonNamespace);
  out += 'p';
  out.append(static_cast<std::size_t>(width) - std::min<std::size_t>(width, digits.size()), '0');
  out += digits;
  return out;
}

/// A doubled ring (i knows i+1 and i+2, mod n) plus `extra_links` knowers
/// pointed at one seeded person. The ring gives every node in-degree
/// exactly 2, so the designated person is the unique in-degree maximum at
/// 2 + extra_links.
struct PersonGraph {
  Graph graph;
  Iri designated;
  int n = 0;
  int extra_links = 0;
  std::vector<int> subject_order;          // shuffled person indices for serialization
  std::vector<std::vector<int>> knows;     // knows[i] = sorted target indices
};

inline PersonGraph generate_person_graph(const PersonGraphSpec& spec) {
  if (spec.n < 4) {
    throw std::invalid_argument("person graph needs n >= 4, got " + std::to_string(spec.n));
  }
  if (spec.extra_links != 1 && spec.extra_links != 2) {
    throw std::invalid_argument("extra_links must be 1 or 2");
  }
  // Ring knowers of d are d-1 and d-2; extras must come from the n-3
  // remaining persons (excluding d itself).
  if (spec.n - 3 < spec.extra_links) {
    throw std::invalid_argument("n too small to supply " + std::to_string(spec.extra_links) +
                                " extra distinct knowers");
  }
  const int n = spec.n;
  SplitMix64 rng(spec.seed);

  int d = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
  std::vector<int> candidates;
  for (int j = 0; j < n; ++j) {
    if (j == d || j == (d - 1 + n) % n || j == (d - 2 + n) % n) continue;
    candidates.push_back(j);
  }
  rng.shuffle(candidates);
  candidates.resize(static_cast<std::size_t>(spec.extra_links));

  PersonGraph pg;
  pg.n = n;
  pg.extra_links = spec.extra_links;
  pg.designated = Iri{person_iri(d, n)};
  pg.knows.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    pg.knows[static_cast<std::size_t>(i)] = {(i + 1) % n, (i + 2) % n};
  }
  for (int j : candidates) pg.knows[static_cast<std::size_t>(j)].push_back(d);
  for (auto& targets : pg.knows) std::sort(targets.begin(), targets.end());

  pg.subject_order.resize(static_cast<std::size_t>(n));
  std::iota(pg.subject_order.begin(), pg.subject_order.end(), 0);
  rng.shuffle(pg.subject_order);

  pg.graph.prefixes["foaf"] = std::string(vocab::foaf_ns);
  const Iri type{std::string(vocab::rdf_type)};
  const Iri person{std::string(vocab::foaf_person)};
  const Iri knows{std::string(vocab::foaf_knows)};
  for (int i = 0; i < n; ++i) {
    Iri subject{person_iri(i, n)};
    pg.graph.add(Triple{subject, type, person});
    for (int t : pg.knows[static_cast<std::size_t>(i)]) {
      pg.graph.add(Triple{subject, knows, Iri{person_iri(t, n)}});
    }
  }
  return pg;
}

/// Prompt serialization. Subjects follow the seeded shuffle, not canonical
/// order, so the designated person's position carries no signal.
inline std::string serialize_person_graph(const PersonGraph& pg) {
  std::string out = "@prefix foaf: <";
  out += vocab::foaf_ns;
  out += "> .\n\n";
  for (int i : pg.subject_order) {
    out += "<" + person_iri(i, pg.n) + "> a foaf:Person ;\n  foaf:knows ";
    const auto& targets = pg.knows[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < targets.size(); ++k) {
      if (k > 0) out += ", ";
      out += "<" + person_iri(targets[k], pg.n) + ">";
    }
    out += " .\n";
  }
  return out;
}

}  // namespace ttb
