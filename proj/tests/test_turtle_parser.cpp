#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "ttb/rdf/turtle_parser.hpp"
#include "ttb/tasks/assets.hpp"

using namespace ttb;

namespace {

Graph parse_ok(const std::string& text) {
  ParseResult r = parse_turtle(text);
  INFO(r.error.message << " at " << r.error.line << ":" << r.error.column);
  REQUIRE(r.ok);
  return r.graph;
}

ParseError parse_fail(const std::string& text) {
  ParseResult r = parse_turtle(text);
  REQUIRE_FALSE(r.ok);
  return r.error;
}

const Iri kP{"http://e/p"};
const Iri kS{"http://e/s"};

}  // namespace

TEST_CASE("organization listing parses to 29 triples under 6 prefixes") {
  const TaskAssets& assets = default_assets();
  ParseResult r = parse_turtle(assets.org_kg_text);
  REQUIRE(r.ok);
  CHECK(r.graph.size() == 29);
  CHECK(r.graph.prefixes.size() == 6);
}

TEST_CASE("empty and comment-only documents parse to empty graphs") {
  CHECK(parse_ok("").empty());
  CHECK(parse_ok("   \n\t\n").empty());
  CHECK(parse_ok("# just a comment\n# another\n").empty());
  Graph g = parse_ok("@prefix ex: <http://example.org/> .");
  CHECK(g.empty());
  CHECK(g.prefixes.at("ex") == "http://example.org/");
}

TEST_CASE("basic triple with prefixed names") {
  Graph g = parse_ok("@prefix : <http://e/> .\n:s :p :o .");
  REQUIRE(g.size() == 1);
  CHECK(g.contains({kS, kP, Iri{"http://e/o"}}));
}

TEST_CASE("SPARQL-style PREFIX and BASE are case-insensitive and undotted") {
  Graph g = parse_ok("PreFix : <http://e/>\nbAsE <http://b/>\n:s :p <x> .");
  CHECK(g.contains({kS, kP, Iri{"http://b/x"}}));
}

TEST_CASE("at-style directives require the trailing dot") {
  auto err = parse_fail("@prefix : <http://e/>\n:s :p :o .");
  CHECK(err.line == 2);  // the name after the missing dot is where it derails
}

TEST_CASE("prefix redefinition: last definition wins") {
  Graph g = parse_ok("@prefix : <http://a/> .\n:x :y :z .\n@prefix : <http://b/> .\n:x :y :z .");
  CHECK(g.size() == 2);
  CHECK(g.contains({Iri{"http://a/x"}, Iri{"http://a/y"}, Iri{"http://a/z"}}));
  CHECK(g.contains({Iri{"http://b/x"}, Iri{"http://b/y"}, Iri{"http://b/z"}}));
}

TEST_CASE("a expands to rdf:type") {
  Graph g = parse_ok("@prefix : <http://e/> .\n:s a :C .");
  CHECK(g.contains({kS, Iri{std::string(vocab::rdf_type)}, Iri{"http://e/C"}}));
}

TEST_CASE("predicate-object and object lists") {
  Graph g = parse_ok("@prefix : <http://e/> .\n:s :p :o1 , :o2 ; :q :o3 .");
  CHECK(g.size() == 3);
  CHECK(g.contains({kS, kP, Iri{"http://e/o1"}}));
  CHECK(g.contains({kS, kP, Iri{"http://e/o2"}}));
  CHECK(g.contains({kS, Iri{"http://e/q"}, Iri{"http://e/o3"}}));
}

TEST_CASE("duplicate triples collapse into the set") {
  Graph g = parse_ok("@prefix : <http://e/> .\n:s :p :o .\n:s :p :o .");
  CHECK(g.size() == 1);
}

TEST_CASE("string literal escapes") {
  Graph g = parse_ok("@prefix : <http://e/> .\n:s :p \"a\\nb\\t\\\"q\\\\\" .");
  REQUIRE(g.size() == 1);
  const auto& lit = std::get<Literal>(g.triples.begin()->object);
  CHECK(lit.lexical == "a\nb\t\"q\\");
}

TEST_CASE("unicode escapes in strings and IRIs") {
  Graph g = parse_ok("@prefix : <http://e/> .\n:s :p \"\\u0041\\U0001F600\" .");
  const auto& lit = std::get<Literal>(g.triples.begin()->object);
  CHECK(lit.lexical == "A\xF0\x9F\x98\x80");
  Graph g2 = parse_ok("@prefix : <http://e/> .\n:s2 <http://e/\\u0070> \"x\" .");
  CHECK(g2.triples.begin()->predicate.value == "http://e/p");
}

TEST_CASE("single-quoted and long strings") {
  Graph g = parse_ok("@prefix : <http://e/> .\n:s :p 'sq' , '''long\nline''' , \"\"\"a\"\"b\"\"\" .");
  REQUIRE(g.size() == 3);
  std::set<std::string> lexicals;
  for (const auto& t : g.triples) lexicals.insert(std::get<Literal>(t.object).lexical);
  CHECK(lexicals == std::set<std::string>{"sq", "long\nline", "a\"\"b"});
}

TEST_CASE("language tags and typed literals") {
  Graph g = parse_ok(
      "@prefix xsd: <http://www.w3.org/2001/XMLSchema#> .\n"
      "@prefix : <http://e/> .\n"
      ":s :p \"chat\"@en , \"chat\"@fr-BE , \"42\"^^xsd:byte .");
  CHECK(g.contains({kS, kP, Literal::lang("chat", "en")}));
  CHECK(g.contains({kS, kP, Literal::lang("chat", "fr-BE")}));
  CHECK(g.contains({kS, kP, Literal::typed("42", "http://www.w3.org/2001/XMLSchema#byte")}));
}

TEST_CASE("numeric literal shorthand keeps the exact lexical form") {
  Graph g = parse_ok("@prefix : <http://e/> .\n:s :p 7 , -3 , 4.20 , .5 , 1.e3 , 2E-4 .");
  CHECK(g.contains({kS, kP, Literal::typed("7", std::string(vocab::xsd_integer))}));
  CHECK(g.contains({kS, kP, Literal::typed("-3", std::string(vocab::xsd_integer))}));
  CHECK(g.contains({kS, kP, Literal::typed("4.20", std::string(vocab::xsd_decimal))}));
  CHECK(g.contains({kS, kP, Literal::typed(".5", std::string(vocab::xsd_decimal))}));
  CHECK(g.contains({kS, kP, Literal::typed("1.e3", std::string(vocab::xsd_double))}));
  CHECK(g.contains({kS, kP, Literal::typed("2E-4", std::string(vocab::xsd_double))}));
}

TEST_CASE("bare integer followed by statement dot") {
  Graph g = parse_ok("@prefix : <http://e/> .\n:s :p 1.");
  CHECK(g.contains({kS, kP, Literal::typed("1", std::string(vocab::xsd_integer))}));
}

TEST_CASE("booleans must be lowercase") {
  Graph g = parse_ok("@prefix : <http://e/> .\n:s :p true , false .");
  CHECK(g.contains({kS, kP, Literal::typed("true", std::string(vocab::xsd_boolean))}));
  CHECK(g.contains({kS, kP, Literal::typed("false", std::string(vocab::xsd_boolean))}));
  auto err = parse_fail("@prefix : <http://e/> .\n:s :p TRUE .");
  CHECK(err.line == 2);
}

TEST_CASE("labeled blank nodes keep one identity per label") {
  Graph g = parse_ok("@prefix : <http://e/> .\n_:x :p :o .\n:s :q _:x .");
  REQUIRE(g.size() == 2);
  const BlankNode* b1 = nullptr;
  for (const auto& t : g.triples)
    if (const auto* b = std::get_if<BlankNode>(&t.subject)) b1 = b;
  REQUIRE(b1 != nullptr);
  bool found = false;
  for (const auto& t : g.triples) {
    if (const auto* b2 = std::get_if<BlankNode>(&t.object)) {
      CHECK(b2->label == b1->label);
      found = true;
    }
  }
  CHECK(found);
}

TEST_CASE("blank node property lists as subject and object") {
  Graph g = parse_ok("@prefix : <http://e/> .\n[ :p :o ] :q [ :r :t ] .");
  CHECK(g.size() == 3);
  Graph g2 = parse_ok("@prefix : <http://e/> .\n[] :p :o .");
  CHECK(g2.size() == 1);
  // a subject property list may also stand alone as a statement
  Graph g3 = parse_ok("@prefix : <http://e/> .\n[ :p :o ] .");
  CHECK(g3.size() == 1);
}

TEST_CASE("anonymous blank nodes are distinct") {
  Graph g = parse_ok("@prefix : <http://e/> .\n[] :p :o .\n[] :p :o .");
  CHECK(g.size() == 2);
}

TEST_CASE("collections expand to rdf:first/rest chains") {
  Graph g = parse_ok("@prefix : <http://e/> .\n:s :p ( :x :y ) .");
  // 1 link from :s + first/rest per element = 5 triples
  CHECK(g.size() == 5);
  int firsts = 0, rests = 0, nils = 0;
  for (const auto& t : g.triples) {
    if (t.predicate.value == vocab::rdf_first) ++firsts;
    if (t.predicate.value == vocab::rdf_rest) {
      ++rests;
      if (const auto* i = std::get_if<Iri>(&t.object); i && i->value == vocab::rdf_nil) ++nils;
    }
  }
  CHECK(firsts == 2);
  CHECK(rests == 2);
  CHECK(nils == 1);
  Graph g2 = parse_ok("@prefix : <http://e/> .\n:s :p () .");
  CHECK(g2.contains({kS, kP, Iri{std::string(vocab::rdf_nil)}}));
}

TEST_CASE("pname local names: interior dots, percent encoding, escapes") {
  Graph g = parse_ok("@prefix : <http://e/> .\n:a.b :p :o%41 , :o\\~x .");
  CHECK(g.contains({Iri{"http://e/a.b"}, kP, Iri{"http://e/o%41"}}));
  CHECK(g.contains({Iri{"http://e/a.b"}, kP, Iri{"http://e/o~x"}}));
}

TEST_CASE("pname trailing dot backs off to the statement terminator") {
  Graph g = parse_ok("@prefix : <http://e/> .\n:s :p :o.");
  CHECK(g.contains({kS, kP, Iri{"http://e/o"}}));
}

TEST_CASE("base resolution follows RFC 3986 merging") {
  Graph g = parse_ok(
      "@base <http://example.org/dir/page> .\n"
      "<x> <./y> <../z> .\n"
      "<#f> <http://abs/p> </rooted> .");
  CHECK(g.contains({Iri{"http://example.org/dir/x"}, Iri{"http://example.org/dir/y"},
                    Iri{"http://example.org/z"}}));
  CHECK(g.contains({Iri{"http://example.org/dir/page#f"}, Iri{"http://abs/p"},
                    Iri{"http://example.org/rooted"}}));
}

TEST_CASE("relative IRIs without a base pass through") {
  Graph g = parse_ok("<s> <p> <o> .");
  CHECK(g.contains({Iri{"s"}, Iri{"p"}, Iri{"o"}}));
}

TEST_CASE("a UTF-8 byte order mark is tolerated") {
  Graph g = parse_ok("\xEF\xBB\xBF@prefix : <http://e/> .\n:s :p :o .");
  CHECK(g.size() == 1);
}

TEST_CASE("first error wins: missing final dot reports the EOF line") {
  auto err = parse_fail("PREFIX : <http://x/>\n:a :b :c");
  CHECK(err.line == 2);
  CHECK(err.column >= 1);
}

TEST_CASE("undefined prefix is reported at its usage position") {
  auto err = parse_fail("@prefix ex: <http://e/> .\nex:s ex:p foo:o .");
  CHECK(err.line == 2);
  CHECK(err.message.find("foo") != std::string::npos);
}

TEST_CASE("unterminated IRI reports the opening angle bracket") {
  auto err = parse_fail("@prefix : <http://e/> .\n:s :p <http://x");
  CHECK(err.line == 2);
  CHECK(err.column == 7);
}

TEST_CASE("unterminated short string reports the opening quote") {
  auto err = parse_fail("@prefix : <http://e/> .\n:s :p \"abc");
  CHECK(err.line == 2);
  CHECK(err.column == 7);
}

TEST_CASE("raw newline inside a short string is unterminated") {
  auto err = parse_fail("@prefix : <http://e/> .\n:s :p \"ab\ncd\" .");
  CHECK(err.line == 2);
  CHECK(err.column == 7);
}

TEST_CASE("undefined empty prefix is an error at the first use") {
  auto err = parse_fail(":s :p :o .");
  CHECK(err.line == 1);
  CHECK(err.column == 1);
}

TEST_CASE("long strings may span lines and later errors use real lines") {
  auto err = parse_fail(
      "@prefix : <http://e/> .\n"
      ":s :p \"\"\"a\n"
      "b\n"
      "c\"\"\" .\n"
      ":x :y zzz .");
  CHECK(err.line == 5);
}

TEST_CASE("error lines never exceed the line count of the input") {
  for (const std::string text :
       {std::string(":s :p"), std::string(":s"), std::string("@prefix"),
        std::string("@prefix : <http://e/> .\n:s :p [ :q :r"),
        std::string(":s :p (")}) {
    ParseResult r = parse_turtle(text);
    REQUIRE_FALSE(r.ok);
    int lines = static_cast<int>(split_lines(text).size());
    CHECK(r.error.line >= 1);
    CHECK(r.error.line <= lines);
    CHECK(r.error.column >= 1);
  }
}

TEST_CASE("assorted malformed documents fail cleanly") {
  const std::string pre = "@prefix : <http://e/> . ";
  CHECK(parse_fail(pre + ":s :p :o ,, :q .").line == 1);
  CHECK(parse_fail(pre + ":s :p .").line == 1);
  CHECK(parse_fail(pre + ":s .").line == 1);
  CHECK(parse_fail("@prefix : .").line == 1);
  CHECK(parse_fail("@unknown <http://e/> .").line == 1);
  CHECK(parse_fail(pre + ":s :p \"x\"^^ .").line == 1);
  CHECK(parse_fail(pre + ":s :p \"x\"@ .").line == 1);
  CHECK(parse_fail("<http://e/s> <http://e/p> <http://e/o> . extra").line == 1);
  CHECK(parse_fail(pre + ":s :p :o . )").line == 1);
}

TEST_CASE("bad unicode escapes are rejected") {
  const std::string pre = "@prefix : <http://e/> . ";
  CHECK_FALSE(parse_turtle(pre + ":s :p \"\\uZZZZ\" .").ok);
  CHECK_FALSE(parse_turtle(pre + ":s :p \"\\q\" .").ok);
  CHECK_FALSE(parse_turtle("<http://e/\\n> <http://e/p> \"x\" .").ok);
}

TEST_CASE("nested structures parse") {
  Graph g = parse_ok(
      "@prefix : <http://e/> .\n"
      ":s :p [ :q ( :a [ :r :t ] ) ] .");
  CHECK(g.size() == 7);
}
