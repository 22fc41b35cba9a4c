#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ttb/rdf/term.hpp"

namespace ttb {

/// First syntax error found in a document. Line/column are 1-based and
/// always point inside the input (end-of-input errors are reported at the
/// last consumed token so the repair loop has a real line to act on).
struct ParseError {
  std::string message;
  int line = 1;
  int column = 1;
};

struct ParseResult {
  bool ok = false;
  Graph graph;
  ParseError error;
};

namespace turtle_detail {

struct ParseAbort {
  ParseError err;
};

[[noreturn]] inline void fail(std::string msg, int line, int col) {
  throw ParseAbort{ParseError{std::move(msg), line, col}};
}

inline bool is_digit_ch(char c) { return c >= '0' && c <= '9'; }
inline bool is_hex_ch(char c) {
  return is_digit_ch(c) || (c >= 'a' && c <= 'f') || (c >= 'A' && c <= 'F');
}
inline bool is_alpha_ch(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }
// Multibyte UTF-8 is accepted wholesale in names; full PN_CHARS_BASE range
// checks buy nothing for this workload.
inline bool is_pn_chars_base(unsigned char c) { return is_alpha_ch(static_cast<char>(c)) || c >= 0x80; }
inline bool is_pn_chars_u(unsigned char c) { return is_pn_chars_base(c) || c == '_'; }
inline bool is_pn_chars(unsigned char c) {
  return is_pn_chars_u(c) || c == '-' || is_digit_ch(static_cast<char>(c));
}
inline bool is_local_esc(char c) {
  return std::string_view("_~.-!$&'()*+,;=/?#@%").find(c) != std::string_view::npos;
}

inline void utf8_append(std::string& out, uint32_t cp) {
  if (cp <= 0x7F) {
    out += static_cast<char>(cp);
  } else if (cp <= 0x7FF) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp <= 0xFFFF) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

enum class Tok {
  Eof,
  Dot,
  Semicolon,
  Comma,
  LBracket,
  RBracket,
  LParen,
  RParen,
  IriRef,
  PName,
  BlankLabel,
  StringLit,
  Caret2,
  IntegerLit,
  DecimalLit,
  DoubleLit,
  Name,
  AtWord
};

struct Token {
  Tok kind = Tok::Eof;
  std::string text;  // payload: IRI body, string value, number lexeme, name, prefix label
  std::string aux;   // PName only: local part
  int line = 1;
  int col = 1;
};

inline std::string token_desc(const Token& t) {
  switch (t.kind) {
    case Tok::Eof: return "end of input";
    case Tok::Dot: return "'.'";
    case Tok::Semicolon: return "';'";
    case Tok::Comma: return "','";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::IriRef: return "IRI <" + t.text + ">";
    case Tok::PName: return "'" + t.text + ":" + t.aux + "'";
    case Tok::BlankLabel: return "blank node _:" + (t.text.empty() ? t.text : t.text.substr(1));
    case Tok::StringLit: return "string literal";
    case Tok::Caret2: return "'^^'";
    case Tok::IntegerLit:
    case Tok::DecimalLit:
    case Tok::DoubleLit: return "number '" + t.text + "'";
    case Tok::Name: return "'" + t.text + "'";
    case Tok::AtWord: return "'@" + t.text + "'";
  }
  return "token";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : s_(text) {
    if (s_.size() >= 3 && s_.compare(0, 3, "\xEF\xBB\xBF") == 0) {
      pos_ = 3;
    }
  }

  Token next() {
    skip_trivia();
    Token t;
    t.line = line_;
    t.col = col_;
    if (eof()) return t;
    char c = cur();
    switch (c) {
      case ';': bump(); t.kind = Tok::Semicolon; return t;
      case ',': bump(); t.kind = Tok::Comma; return t;
      case '[': bump(); t.kind = Tok::LBracket; return t;
      case ']': bump(); t.kind = Tok::RBracket; return t;
      case '(': bump(); t.kind = Tok::LParen; return t;
      case ')': bump(); t.kind = Tok::RParen; return t;
      case '<': return lex_iriref(t);
      case '"':
      case '\'': return lex_string(t, c);
      case '@': return lex_at(t);
      case '_': return lex_blank(t);
      case '^':
        bump();
        if (!eof() && cur() == '^') {
          bump();
          t.kind = Tok::Caret2;
          return t;
        }
        fail("expected '^^'", t.line, t.col);
      case '.':
        if (is_digit_ch(peek(1))) return lex_number(t);
        bump();
        t.kind = Tok::Dot;
        return t;
      default: break;
    }
    if (is_digit_ch(c) || c == '+' || c == '-') return lex_number(t);
    if (is_pn_chars_base(static_cast<unsigned char>(c)) || c == ':') return lex_pname_or_name(t);
    fail(std::string("unexpected character '") + c + "'", t.line, t.col);
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  bool eof() const { return pos_ >= s_.size(); }
  char cur() const { return s_[pos_]; }
  char peek(std::size_t k) const { return pos_ + k < s_.size() ? s_[pos_ + k] : '\0'; }
  void bump() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_trivia() {
    while (!eof()) {
      char c = cur();
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        bump();
      } else if (c == '#') {
        while (!eof() && cur() != '\n') bump();
      } else {
        break;
      }
    }
  }

  uint32_t read_hex_escape(int digits, const Token& t) {
    uint32_t cp = 0;
    for (int i = 0; i < digits; ++i) {
      if (eof() || !is_hex_ch(cur())) fail("invalid \\u escape sequence", t.line, t.col);
      char h = cur();
      uint32_t v = is_digit_ch(h) ? static_cast<uint32_t>(h - '0')
                                  : static_cast<uint32_t>((h | 0x20) - 'a' + 10);
      cp = cp * 16 + v;
      bump();
    }
    return cp;
  }

  Token lex_iriref(Token t) {
    bump();  // '<'
    std::string out;
    while (true) {
      if (eof()) fail("unterminated IRI reference", t.line, t.col);
      char c = cur();
      if (c == '>') {
        bump();
        break;
      }
      if (static_cast<unsigned char>(c) <= 0x20) {
        fail("invalid character inside IRI reference", t.line, t.col);
      }
      if (c == '\\') {
        bump();
        if (eof()) fail("unterminated IRI reference", t.line, t.col);
        char e = cur();
        if (e == 'u') {
          bump();
          utf8_append(out, read_hex_escape(4, t));
        } else if (e == 'U') {
          bump();
          utf8_append(out, read_hex_escape(8, t));
        } else {
          fail("invalid escape in IRI reference", t.line, t.col);
        }
        continue;
      }
      out += c;
      bump();
    }
    t.kind = Tok::IriRef;
    t.text = std::move(out);
    return t;
  }

  void append_string_escape(std::string& out, const Token& t) {
    bump();  // backslash
    if (eof()) fail("unterminated string literal", t.line, t.col);
    char e = cur();
    switch (e) {
      case 't': out += '\t'; bump(); return;
      case 'b': out += '\b'; bump(); return;
      case 'n': out += '\n'; bump(); return;
      case 'r': out += '\r'; bump(); return;
      case 'f': out += '\f'; bump(); return;
      case '"': out += '"'; bump(); return;
      case '\'': out += '\''; bump(); return;
      case '\\': out += '\\'; bump(); return;
      case 'u': bump(); utf8_append(out, read_hex_escape(4, t)); return;
      case 'U': bump(); utf8_append(out, read_hex_escape(8, t)); return;
      default: fail("invalid escape sequence in string literal", t.line, t.col);
    }
  }

  Token lex_string(Token t, char q) {
    std::string out;
    bool long_form = peek(1) == q && peek(2) == q;
    if (long_form) {
      bump();
      bump();
      bump();
      while (true) {
        if (eof()) fail("unterminated string literal", t.line, t.col);
        char c = cur();
        if (c == q) {
          int run = 0;
          while (!eof() && cur() == q) {
            ++run;
            bump();
          }
          if (run >= 3) {
            out.append(static_cast<std::size_t>(run - 3), q);
            break;
          }
          out.append(static_cast<std::size_t>(run), q);
          continue;
        }
        if (c == '\\') {
          append_string_escape(out, t);
          continue;
        }
        out += c;
        bump();
      }
    } else {
      bump();
      while (true) {
        if (eof() || cur() == '\n' || cur() == '\r') {
          fail("unterminated string literal", t.line, t.col);
        }
        char c = cur();
        if (c == q) {
          bump();
          break;
        }
        if (c == '\\') {
          append_string_escape(out, t);
          continue;
        }
        out += c;
        bump();
      }
    }
    t.kind = Tok::StringLit;
    t.text = std::move(out);
    return t;
  }

  Token lex_at(Token t) {
    bump();  // '@'
    std::string word;
    while (!eof() && is_alpha_ch(cur())) {
      word += cur();
      bump();
    }
    if (word.empty()) fail("expected directive or language tag after '@'", t.line, t.col);
    while (!eof() && cur() == '-' && (is_alpha_ch(peek(1)) || is_digit_ch(peek(1)))) {
      word += cur();
      bump();
      while (!eof() && (is_alpha_ch(cur()) || is_digit_ch(cur()))) {
        word += cur();
        bump();
      }
    }
    t.kind = Tok::AtWord;
    t.text = std::move(word);
    return t;
  }

  // Consumes (PN_CHARS | '.')* with the trailing-dot backoff the grammar
  // requires: a dot run is taken only when more name characters follow.
  template <typename MoreFn>
  void consume_name_tail(std::string& out, MoreFn more) {
    while (!eof()) {
      char c = cur();
      if (more(c)) {
        out += c;
        bump();
        continue;
      }
      if (c == '.') {
        std::size_t j = pos_;
        while (j < s_.size() && s_[j] == '.') ++j;
        if (j < s_.size() && more(s_[j])) {
          while (pos_ < j) {
            out += '.';
            bump();
          }
          continue;
        }
      }
      break;
    }
  }

  Token lex_blank(Token t) {
    bump();  // '_'
    if (eof() || cur() != ':') fail("expected ':' in blank node label", t.line, t.col);
    bump();
    if (eof() || !(is_pn_chars_u(static_cast<unsigned char>(cur())) || is_digit_ch(cur()))) {
      fail("invalid blank node label", t.line, t.col);
    }
    std::string label;
    label += cur();
    bump();
    consume_name_tail(label, [](char c) { return is_pn_chars(static_cast<unsigned char>(c)); });
    t.kind = Tok::BlankLabel;
    // User labels get a "u" namespace so generated anonymous ("a…") and
    // canonical ("c…") labels can never collide with them.
    t.text = "u" + label;
    return t;
  }

  Token lex_number(Token t) {
    std::size_t start = pos_;
    if (cur() == '+' || cur() == '-') bump();
    bool has_int = false;
    while (!eof() && is_digit_ch(cur())) {
      has_int = true;
      bump();
    }
    bool has_frac = false;
    if (!eof() && cur() == '.' && is_digit_ch(peek(1))) {
      bump();
      while (!eof() && is_digit_ch(cur())) {
        has_frac = true;
        bump();
      }
    } else if (has_int && !eof() && cur() == '.') {
      // "1.e3" is a valid double: the fraction may be empty when an exponent
      // follows. Otherwise the dot stays put (it ends the statement).
      std::size_t j = pos_ + 1;
      if (j < s_.size() && (s_[j] == 'e' || s_[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < s_.size() && (s_[k] == '+' || s_[k] == '-')) ++k;
        if (k < s_.size() && is_digit_ch(s_[k])) bump();
      }
    }
    if (!has_int && !has_frac) fail("invalid numeric literal", t.line, t.col);
    bool has_exp = false;
    if (!eof() && (cur() == 'e' || cur() == 'E')) {
      std::size_t j = pos_ + 1;
      if (j < s_.size() && (s_[j] == '+' || s_[j] == '-')) ++j;
      if (j < s_.size() && is_digit_ch(s_[j])) {
        has_exp = true;
        bump();  // e
        if (cur() == '+' || cur() == '-') bump();
        while (!eof() && is_digit_ch(cur())) bump();
      }
    }
    t.kind = has_exp ? Tok::DoubleLit : (has_frac ? Tok::DecimalLit : Tok::IntegerLit);
    t.text = std::string(s_.substr(start, pos_ - start));
    return t;
  }

  Token lex_pname_or_name(Token t) {
    std::string word;
    if (cur() != ':') {
      word += cur();
      bump();
      consume_name_tail(word, [](char c) { return is_pn_chars(static_cast<unsigned char>(c)); });
    }
    if (eof() || cur() != ':') {
      t.kind = Tok::Name;
      t.text = std::move(word);
      return t;
    }
    bump();  // ':'
    std::string local;
    bool first = true;
    auto more = [](char c) {
      return is_pn_chars(static_cast<unsigned char>(c)) || c == ':' || c == '%' || c == '\\';
    };
    while (!eof()) {
      char c = cur();
      if (c == '%') {
        if (!is_hex_ch(peek(1)) || !is_hex_ch(peek(2))) {
          fail("invalid percent escape in prefixed name", t.line, t.col);
        }
        local += c;
        bump();
        local += cur();
        bump();
        local += cur();
        bump();
      } else if (c == '\\') {
        if (!is_local_esc(peek(1))) fail("invalid escape in prefixed name", t.line, t.col);
        bump();
        local += cur();
        bump();
      } else if (is_pn_chars_u(static_cast<unsigned char>(c)) || c == ':' || is_digit_ch(c) ||
                 (!first && is_pn_chars(static_cast<unsigned char>(c)))) {
        local += c;
        bump();
      } else if (c == '.' && !first) {
        std::size_t j = pos_;
        while (j < s_.size() && s_[j] == '.') ++j;
        if (j < s_.size() && more(s_[j])) {
          while (pos_ < j) {
            local += '.';
            bump();
          }
        } else {
          break;
        }
      } else {
        break;
      }
      first = false;
    }
    t.kind = Tok::PName;
    t.text = std::move(word);
    t.aux = std::move(local);
    return t;
  }
};

/// RFC 3986 dot-segment removal, enough for @base resolution.
inline std::string remove_dot_segments(std::string_view path) {
  std::string out;
  std::string in(path);
  while (!in.empty()) {
    if (in.rfind("../", 0) == 0) {
      in.erase(0, 3);
    } else if (in.rfind("./", 0) == 0) {
      in.erase(0, 2);
    } else if (in.rfind("/./", 0) == 0) {
      in.erase(0, 2);
    } else if (in == "/.") {
      in = "/";
    } else if (in.rfind("/../", 0) == 0 || in == "/..") {
      in = (in == "/..") ? "/" : in.substr(3);
      auto slash = out.find_last_of('/');
      out.erase(slash == std::string::npos ? 0 : slash);
    } else if (in == "." || in == "..") {
      in.clear();
    } else {
      std::size_t from = in.find('/', 1);
      out += in.substr(0, from);
      in.erase(0, from == std::string::npos ? in.size() : from);
    }
  }
  return out;
}

inline bool has_scheme(std::string_view iri) {
  if (iri.empty() || !is_alpha_ch(iri[0])) return false;
  for (std::size_t i = 1; i < iri.size(); ++i) {
    char c = iri[i];
    if (c == ':') return true;
    if (!(is_alpha_ch(c) || is_digit_ch(c) || c == '+' || c == '-' || c == '.')) return false;
  }
  return false;
}

/// Resolve `ref` against `base`. With no base (or an absolute ref) the
/// reference is returned untouched.
inline std::string resolve_iri(const std::string& ref, const std::string& base) {
  if (base.empty() || has_scheme(ref)) return ref;
  std::size_t scheme_end = base.find(':');
  if (scheme_end == std::string::npos) return ref;
  std::string scheme = base.substr(0, scheme_end);
  std::string_view rest(base);
  rest.remove_prefix(scheme_end + 1);
  std::string_view authority;
  std::string_view path = rest;
  if (rest.rfind("//", 0) == 0) {
    rest.remove_prefix(2);
    std::size_t pe = rest.find_first_of("/?#");
    authority = rest.substr(0, pe == std::string_view::npos ? rest.size() : pe);
    path = pe == std::string_view::npos ? std::string_view("") : rest.substr(pe);
  }
  std::size_t cut = path.find_first_of("?#");
  if (cut != std::string_view::npos) path = path.substr(0, cut);

  auto with_authority = [&](const std::string& p) {
    std::string out = scheme + ":";
    if (!authority.empty() || base.compare(scheme_end + 1, 2, "//") == 0) {
      out += "//";
      out += authority;
    }
    out += p;
    return out;
  };

  if (ref.rfind("//", 0) == 0) return scheme + ":" + ref;
  if (!ref.empty() && ref[0] == '#') return with_authority(std::string(path)) + ref;
  if (!ref.empty() && ref[0] == '?') return with_authority(std::string(path)) + ref;
  if (!ref.empty() && ref[0] == '/') return with_authority(remove_dot_segments(ref));
  std::string dir(path);
  std::size_t slash = dir.find_last_of('/');
  dir = slash == std::string::npos ? std::string(authority.empty() ? "" : "/")
                                   : dir.substr(0, slash + 1);
  std::size_t frag = ref.find_first_of("?#");
  std::string refpath = ref.substr(0, frag == std::string::npos ? ref.size() : frag);
  std::string tail = frag == std::string::npos ? "" : ref.substr(frag);
  return with_authority(remove_dot_segments(dir + refpath)) + tail;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {
    cur_ = lex_.next();
    last_ = cur_;
  }

  Graph parse_document() {
    while (cur_.kind != Tok::Eof) statement();
    return std::move(g_);
  }

 private:
  Lexer lex_;
  Token cur_;
  Token last_;
  Graph g_;
  std::string base_;
  int anon_ = 0;

  void advance() {
    last_ = cur_;
    cur_ = lex_.next();
  }

  [[noreturn]] void err_here(const std::string& expected) {
    if (cur_.kind == Tok::Eof) {
      fail(expected + ", found end of input", last_.line, last_.col);
    }
    fail(expected + ", found " + token_desc(cur_), cur_.line, cur_.col);
  }

  void expect(Tok k, const char* what) {
    if (cur_.kind != k) err_here(std::string("expected ") + what);
    advance();
  }

  bool name_is(std::string_view word) const {
    if (cur_.kind != Tok::Name || cur_.text.size() != word.size()) return false;
    for (std::size_t i = 0; i < word.size(); ++i) {
      if ((cur_.text[i] | 0x20) != (word[i] | 0x20)) return false;
    }
    return true;
  }

  void statement() {
    if (cur_.kind == Tok::AtWord) {
      if (cur_.text == "prefix") {
        advance();
        prefix_body();
        expect(Tok::Dot, "'.' after @prefix directive");
        return;
      }
      if (cur_.text == "base") {
        advance();
        base_body();
        expect(Tok::Dot, "'.' after @base directive");
        return;
      }
      err_here("expected '@prefix' or '@base'");
    }
    if (name_is("prefix")) {
      advance();
      prefix_body();
      return;
    }
    if (name_is("base")) {
      advance();
      base_body();
      return;
    }
    triples();
    expect(Tok::Dot, "'.' at end of statement");
  }

  void prefix_body() {
    if (cur_.kind != Tok::PName || !cur_.aux.empty()) {
      err_here("expected prefix label ending in ':'");
    }
    std::string label = cur_.text;
    advance();
    if (cur_.kind != Tok::IriRef) err_here("expected namespace IRI");
    g_.prefixes[label] = resolve_iri(cur_.text, base_);
    advance();
  }

  void base_body() {
    if (cur_.kind != Tok::IriRef) err_here("expected base IRI");
    base_ = resolve_iri(cur_.text, base_);
    advance();
  }

  BlankNode fresh_anon() { return BlankNode{"a" + std::to_string(anon_++)}; }

  Iri expand_pname() {
    auto it = g_.prefixes.find(cur_.text);
    if (it == g_.prefixes.end()) {
      fail("undefined prefix '" + cur_.text + ":'", cur_.line, cur_.col);
    }
    Iri out{it->second + cur_.aux};
    advance();
    return out;
  }

  void triples() {
    if (cur_.kind == Tok::LBracket) {
      advance();
      if (cur_.kind == Tok::RBracket) {
        advance();
        SubjectTerm subj = fresh_anon();
        predicate_object_list(subj);
        return;
      }
      SubjectTerm subj = fresh_anon();
      predicate_object_list(subj);
      expect(Tok::RBracket, "']'");
      if (cur_.kind != Tok::Dot) predicate_object_list(subj);
      return;
    }
    SubjectTerm subj = parse_subject();
    predicate_object_list(subj);
  }

  SubjectTerm parse_subject() {
    switch (cur_.kind) {
      case Tok::IriRef: {
        Iri s{resolve_iri(cur_.text, base_)};
        advance();
        return s;
      }
      case Tok::PName: return expand_pname();
      case Tok::BlankLabel: {
        BlankNode b{cur_.text};
        advance();
        return b;
      }
      case Tok::LParen: {
        Term head = parse_collection();
        return *as_subject(head);
      }
      default: err_here("expected subject");
    }
  }

  bool at_verb_start() const {
    return cur_.kind == Tok::IriRef || cur_.kind == Tok::PName ||
           (cur_.kind == Tok::Name && cur_.text == "a");
  }

  void predicate_object_list(const SubjectTerm& subj) {
    verb_object_list(subj);
    while (cur_.kind == Tok::Semicolon) {
      advance();
      if (at_verb_start()) verb_object_list(subj);
    }
  }

  void verb_object_list(const SubjectTerm& subj) {
    Iri pred = parse_verb();
    add_object(subj, pred);
    while (cur_.kind == Tok::Comma) {
      advance();
      add_object(subj, pred);
    }
  }

  Iri parse_verb() {
    if (cur_.kind == Tok::Name && cur_.text == "a") {
      advance();
      return Iri{std::string(vocab::rdf_type)};
    }
    if (cur_.kind == Tok::IriRef) {
      Iri p{resolve_iri(cur_.text, base_)};
      advance();
      return p;
    }
    if (cur_.kind == Tok::PName) return expand_pname();
    err_here("expected predicate");
  }

  void add_object(const SubjectTerm& subj, const Iri& pred) {
    Term obj = parse_object();
    g_.add(Triple{subj, pred, std::move(obj)});
  }

  Term parse_object() {
    switch (cur_.kind) {
      case Tok::IriRef: {
        Iri o{resolve_iri(cur_.text, base_)};
        advance();
        return o;
      }
      case Tok::PName: return expand_pname();
      case Tok::BlankLabel: {
        BlankNode b{cur_.text};
        advance();
        return b;
      }
      case Tok::LBracket: {
        advance();
        BlankNode b = fresh_anon();
        if (cur_.kind == Tok::RBracket) {
          advance();
          return b;
        }
        predicate_object_list(b);
        expect(Tok::RBracket, "']'");
        return b;
      }
      case Tok::LParen: return parse_collection();
      case Tok::StringLit: {
        std::string lex = cur_.text;
        advance();
        if (cur_.kind == Tok::AtWord) {
          Literal lit = Literal::lang(std::move(lex), cur_.text);
          advance();
          return lit;
        }
        if (cur_.kind == Tok::Caret2) {
          advance();
          if (cur_.kind == Tok::IriRef) {
            Literal lit = Literal::typed(std::move(lex), resolve_iri(cur_.text, base_));
            advance();
            return lit;
          }
          if (cur_.kind == Tok::PName) {
            Iri dt = expand_pname();
            return Literal::typed(std::move(lex), std::move(dt.value));
          }
          err_here("expected datatype IRI after '^^'");
        }
        return Literal::plain(std::move(lex));
      }
      case Tok::IntegerLit: {
        Literal lit = Literal::typed(cur_.text, std::string(vocab::xsd_integer));
        advance();
        return lit;
      }
      case Tok::DecimalLit: {
        Literal lit = Literal::typed(cur_.text, std::string(vocab::xsd_decimal));
        advance();
        return lit;
      }
      case Tok::DoubleLit: {
        Literal lit = Literal::typed(cur_.text, std::string(vocab::xsd_double));
        advance();
        return lit;
      }
      case Tok::Name:
        if (cur_.text == "true" || cur_.text == "false") {
          Literal lit = Literal::typed(cur_.text, std::string(vocab::xsd_boolean));
          advance();
          return lit;
        }
        err_here("expected object");
      default: err_here("expected object");
    }
  }

  Term parse_collection() {
    advance();  // '('
    std::vector<Term> items;
    while (cur_.kind != Tok::RParen) {
      if (cur_.kind == Tok::Eof) err_here("expected ')'");
      items.push_back(parse_object());
    }
    advance();  // ')'
    if (items.empty()) return Iri{std::string(vocab::rdf_nil)};
    std::vector<BlankNode> cells;
    cells.reserve(items.size());
    for (std::size_t i = 0; i < items.size(); ++i) cells.push_back(fresh_anon());
    for (std::size_t i = 0; i < items.size(); ++i) {
      g_.add(Triple{cells[i], Iri{std::string(vocab::rdf_first)}, items[i]});
      Term rest = (i + 1 < items.size()) ? Term(cells[i + 1])
                                         : Term(Iri{std::string(vocab::rdf_nil)});
      g_.add(Triple{cells[i], Iri{std::string(vocab::rdf_rest)}, std::move(rest)});
    }
    return cells.front();
  }
};

}  // namespace turtle_detail

/// Parse a Turtle document. Reports only the first syntax error; the repair
/// loop depends on that (it removes one line per failed attempt).
inline ParseResult parse_turtle(std::string_view text) {
  ParseResult res;
  try {
    turtle_detail::Parser p(text);
    res.graph = p.parse_document();
    res.ok = true;
  } catch (const turtle_detail::ParseAbort& a) {
    res.error = a.err;
  }
  return res;
}

}  // namespace ttb
