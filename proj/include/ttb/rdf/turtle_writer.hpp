#pragma once

#include <string>
#include <string_view>

#include "ttb/rdf/term.hpp"

namespace ttb {
namespace writer_detail {

inline bool safe_local_char(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
         c == '-' || c == '.';
}

/// Conservative PN_LOCAL check: ASCII names only, no escapes, dots interior.
inline bool is_safe_local(std::string_view s) {
  if (s.empty()) return true;
  for (unsigned char c : s) {
    if (!safe_local_char(c)) return false;
  }
  return s.front() != '-' && s.front() != '.' && s.back() != '.';
}

inline bool matches_integer(std::string_view s) {
  std::size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
  }
  return true;
}

inline bool matches_decimal(std::string_view s) {
  std::size_t i = (!s.empty() && (s[0] == '+' || s[0] == '-')) ? 1 : 0;
  std::size_t dot = s.find('.', i);
  if (dot == std::string_view::npos || dot + 1 >= s.size()) return false;
  for (std::size_t k = i; k < dot; ++k) {
    if (s[k] < '0' || s[k] > '9') return false;
  }
  for (std::size_t k = dot + 1; k < s.size(); ++k) {
    if (s[k] < '0' || s[k] > '9') return false;
  }
  return true;
}

inline bool matches_double(std::string_view s) {
  std::size_t e = s.find_first_of("eE");
  if (e == std::string_view::npos || e == 0 || e + 1 >= s.size()) return false;
  std::string_view mant = s.substr(0, e);
  std::string_view exp = s.substr(e + 1);
  if (!exp.empty() && (exp[0] == '+' || exp[0] == '-')) exp.remove_prefix(1);
  if (exp.empty()) return false;
  for (char c : exp) {
    if (c < '0' || c > '9') return false;
  }
  if (matches_integer(mant) || matches_decimal(mant)) return true;
  // "1.e0" style: digits then bare dot
  if (mant.size() >= 2 && mant.back() == '.') return matches_integer(mant.substr(0, mant.size() - 1));
  return false;
}

inline std::string format_iri(const std::string& iri, const Graph& g) {
  std::string_view best_label;
  std::size_t best_len = 0;
  bool found = false;
  for (const auto& [label, ns] : g.prefixes) {
    if (ns.size() >= best_len && iri.size() >= ns.size() && iri.compare(0, ns.size(), ns) == 0 &&
        is_safe_local(std::string_view(iri).substr(ns.size()))) {
      // >= keeps the lexicographically later label on equal-length ties,
      // which doesn't matter for correctness, only determinism.
      best_label = label;
      best_len = ns.size();
      found = true;
    }
  }
  if (found) return std::string(best_label) + ":" + iri.substr(best_len);
  return "<" + detail::escape_iri(iri) + ">";
}

inline std::string format_literal(const Literal& lit, const Graph& g) {
  if (lit.language.empty()) {
    if (lit.datatype == vocab::xsd_integer && matches_integer(lit.lexical)) return lit.lexical;
    if (lit.datatype == vocab::xsd_decimal && matches_decimal(lit.lexical)) return lit.lexical;
    if (lit.datatype == vocab::xsd_double && matches_double(lit.lexical)) return lit.lexical;
    if (lit.datatype == vocab::xsd_boolean && (lit.lexical == "true" || lit.lexical == "false")) {
      return lit.lexical;
    }
  }
  std::string out = "\"" + detail::escape_string_literal(lit.lexical) + "\"";
  if (!lit.language.empty()) return out + "@" + lit.language;
  if (lit.datatype != vocab::xsd_string) out += "^^" + format_iri(lit.datatype, g);
  return out;
}

inline std::string format_term(const Term& t, const Graph& g) {
  if (const auto* i = std::get_if<Iri>(&t)) return format_iri(i->value, g);
  if (const auto* b = std::get_if<BlankNode>(&t)) return "_:" + b->label;
  return format_literal(std::get<Literal>(t), g);
}

inline std::string format_predicate(const Iri& p, const Graph& g) {
  if (p.value == vocab::rdf_type) return "a";
  return format_iri(p.value, g);
}

}  // namespace writer_detail

/// Deterministic Turtle serialization: prefixes sorted by label, one
/// statement per subject in canonical term order, predicates grouped with
/// ";" and objects with ",". Output re-parses to an isomorphic graph.
inline std::string serialize_turtle(const Graph& g) {
  std::string out;
  for (const auto& [label, ns] : g.prefixes) {
    out += "@prefix " + label + ": <" + detail::escape_iri(ns) + "> .\n";
  }
  if (!g.prefixes.empty() && !g.triples.empty()) out += "\n";
  const Triple* prev = nullptr;
  for (const Triple& t : g.triples) {
    if (prev == nullptr || !(prev->subject == t.subject)) {
      if (prev != nullptr) out += " .\n";
      out += writer_detail::format_term(to_term(t.subject), g) + " " +
             writer_detail::format_predicate(t.predicate, g) + " ";
    } else if (!(prev->predicate == t.predicate)) {
      out += " ;\n  " + writer_detail::format_predicate(t.predicate, g) + " ";
    } else {
      out += ", ";
    }
    out += writer_detail::format_term(t.object, g);
    prev = &t;
  }
  if (prev != nullptr) out += " .\n";
  return out;
}

}  // namespace ttb
