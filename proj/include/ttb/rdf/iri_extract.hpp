#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ttb/rdf/term.hpp"

namespace ttb {
namespace iri_detail {

inline bool is_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
inline bool is_scheme_char(char c) {
  return is_alpha(c) || (c >= '0' && c <= '9') || c == '+' || c == '-' || c == '.';
}
inline bool is_hard_delim(char c) {
  return c == '<' || c == '>' || c == '"' || c == '\'';
}
inline bool is_ws(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }
inline bool is_sentence_punct(char c) {
  return c == '.' || c == ',' || c == ';' || c == ':' || c == '!' || c == '?';
}

/// True when the token begins with "<scheme>://".
inline bool starts_with_scheme(std::string_view tok) {
  if (tok.empty() || !is_alpha(tok[0])) return false;
  std::size_t i = 1;
  while (i < tok.size() && is_scheme_char(tok[i])) ++i;
  return tok.compare(i, 3, "://") == 0;
}

}  // namespace iri_detail

/// Pull absolute IRIs out of free text: whitespace/angle-bracket/quote
/// delimited tokens that begin with a scheme and "://", with trailing
/// sentence punctuation stripped (so "<https://x/p1>." yields the bare
/// IRI). Duplicates are dropped, first-occurrence order kept. Stripping
/// punctuation unconditionally keeps the function idempotent on its own
/// newline-joined output.
inline std::vector<Iri> extract_iris(std::string_view text) {
  using namespace iri_detail;
  std::vector<Iri> out;
  std::set<std::string> seen;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (is_ws(text[i]) || is_hard_delim(text[i])) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < n && !is_ws(text[i]) && !is_hard_delim(text[i])) ++i;
    std::string_view tok = text.substr(start, i - start);
    while (!tok.empty() && is_sentence_punct(tok.back())) tok.remove_suffix(1);
    if (!starts_with_scheme(tok)) continue;
    std::string iri(tok);
    if (seen.insert(iri).second) out.push_back(Iri{std::move(iri)});
  }
  return out;
}

}  // namespace ttb
