#pragma once

#include <compare>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>

namespace ttb {

namespace vocab {
inline constexpr std::string_view rdf_ns = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view rdf_type = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view rdf_first = "http://www.w3.org/1999/02/22-rdf-syntax-ns#first";
inline constexpr std::string_view rdf_rest = "http://www.w3.org/1999/02/22-rdf-syntax-ns#rest";
inline constexpr std::string_view rdf_nil = "http://www.w3.org/1999/02/22-rdf-syntax-ns#nil";
inline constexpr std::string_view rdf_lang_string =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
inline constexpr std::string_view xsd_ns = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view xsd_string = "http://www.w3.org/2001/XMLSchema#string";
inline constexpr std::string_view xsd_integer = "http://www.w3.org/2001/XMLSchema#integer";
inline constexpr std::string_view xsd_decimal = "http://www.w3.org/2001/XMLSchema#decimal";
inline constexpr std::string_view xsd_double = "http://www.w3.org/2001/XMLSchema#double";
inline constexpr std::string_view xsd_boolean = "http://www.w3.org/2001/XMLSchema#boolean";
inline constexpr std::string_view foaf_ns = "http://xmlns.com/foaf/0.1/";
inline constexpr std::string_view foaf_person = "http://xmlns.com/foaf/0.1/Person";
inline constexpr std::string_view foaf_knows = "http://xmlns.com/foaf/0.1/knows";
}  // namespace vocab

/// Absolute IRI after prefix/base resolution, stored without angle brackets.
struct Iri {
  std::string value;
  auto operator<=>(const Iri&) const = default;
};

/// Node with graph-local identity only. Labels never carry meaning across
/// graphs; compare via canonicalization or bijection search.
struct BlankNode {
  std::string label;
  auto operator<=>(const BlankNode&) const = default;
};

/// `language` is non-empty only for rdf:langString values; plain literals
/// carry xsd:string.
struct Literal {
  std::string lexical;
  std::string datatype{vocab::xsd_string};
  std::string language;

  static Literal plain(std::string lex) { return Literal{std::move(lex), std::string(vocab::xsd_string), ""}; }
  static Literal lang(std::string lex, std::string tag) {
    return Literal{std::move(lex), std::string(vocab::rdf_lang_string), std::move(tag)};
  }
  static Literal typed(std::string lex, std::string dt) {
    return Literal{std::move(lex), std::move(dt), ""};
  }
  auto operator<=>(const Literal&) const = default;
};

// The variant order doubles as the canonical term order: IRIs, then blank
// nodes, then literals; ties resolved by field comparison.
using Term = std::variant<Iri, BlankNode, Literal>;
using SubjectTerm = std::variant<Iri, BlankNode>;

inline Term to_term(const SubjectTerm& s) {
  if (const auto* i = std::get_if<Iri>(&s)) return *i;
  return std::get<BlankNode>(s);
}

inline std::optional<SubjectTerm> as_subject(const Term& t) {
  if (const auto* i = std::get_if<Iri>(&t)) return SubjectTerm(*i);
  if (const auto* b = std::get_if<BlankNode>(&t)) return SubjectTerm(*b);
  return std::nullopt;
}

inline bool is_iri(const Term& t) { return std::holds_alternative<Iri>(t); }
inline bool is_blank(const Term& t) { return std::holds_alternative<BlankNode>(t); }
inline bool is_literal(const Term& t) { return std::holds_alternative<Literal>(t); }

struct Triple {
  SubjectTerm subject;
  Iri predicate;
  Term object;
  auto operator<=>(const Triple&) const = default;
};

namespace detail {

inline std::string escape_string_literal(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      case '\b': out += "\\b"; break;
      case '\f': out += "\\f"; break;
      default:
        if (c < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04X", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  return out;
}

inline std::string escape_iri(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (unsigned char c : s) {
    if (c <= 0x20 || c == '<' || c == '>' || c == '"' || c == '{' || c == '}' || c == '|' ||
        c == '^' || c == '`' || c == '\\') {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04X", c);
      out += buf;
    } else {
      out += static_cast<char>(c);
    }
  }
  return out;
}

}  // namespace detail

/// N-Triples style rendering, used for diagnostics and structural
/// signatures.
inline std::string render_term(const Term& t) {
  if (const auto* i = std::get_if<Iri>(&t)) return "<" + detail::escape_iri(i->value) + ">";
  if (const auto* b = std::get_if<BlankNode>(&t)) return "_:" + b->label;
  const auto& lit = std::get<Literal>(t);
  std::string out = "\"" + detail::escape_string_literal(lit.lexical) + "\"";
  if (!lit.language.empty()) {
    out += "@" + lit.language;
  } else if (lit.datatype != vocab::xsd_string) {
    out += "^^<" + detail::escape_iri(lit.datatype) + ">";
  }
  return out;
}

inline std::string render_subject(const SubjectTerm& s) { return render_term(to_term(s)); }

inline std::string render_triple(const Triple& t) {
  return render_subject(t.subject) + " <" + detail::escape_iri(t.predicate.value) + "> " +
         render_term(t.object) + " .";
}

/// Triple set plus the prefix declarations seen while parsing. Set storage
/// keeps the no-duplicate-triples invariant.
struct Graph {
  std::set<Triple> triples;
  std::map<std::string, std::string> prefixes;  // label -> namespace IRI

  void add(Triple t) { triples.insert(std::move(t)); }
  bool contains(const Triple& t) const { return triples.count(t) != 0; }
  std::size_t size() const { return triples.size(); }
  bool empty() const { return triples.empty(); }
};

}  // namespace ttb
