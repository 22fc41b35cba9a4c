#pragma once

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "ttb/rdf/turtle_parser.hpp"
#include "ttb/util/strings.hpp"

namespace ttb {

/// Data directory resolution: environment override, then the compiled-in
/// default (set by the build to the source-tree data/ directory).
inline std::string default_data_dir() {
  if (const char* env = std::getenv("TTB_DATA_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
#ifdef TTB_DEFAULT_DATA_DIR
  return TTB_DEFAULT_DATA_DIR;
#else
  return "data";
#endif
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Prompt texts and fixed documents backing the task suite. Prompt files
/// are stored without trailing newlines; generators join prompt and
/// document with a blank line.
struct TaskAssets {
  std::string prompt_t1;
  std::string prompt_t2;
  std::string prompt_t3_template;  // {n} and {max_connections} placeholders
  std::string prompt_t4;
  std::string prompt_t5;
  std::string org_kg_text;
  Graph org_kg;
  std::string factsheet;
  std::string printer_reference_text;
  Graph printer_reference;
};

inline TaskAssets load_assets(const std::string& dir) {
  TaskAssets a;
  a.prompt_t1 = read_text_file(dir + "/prompts/t1.txt");
  a.prompt_t2 = read_text_file(dir + "/prompts/t2.txt");
  a.prompt_t3_template = read_text_file(dir + "/prompts/t3.txt");
  a.prompt_t4 = read_text_file(dir + "/prompts/t4.txt");
  a.prompt_t5 = read_text_file(dir + "/prompts/t5.txt");

  a.org_kg_text = read_text_file(dir + "/org_kg.ttl");
  ParseResult kg = parse_turtle(a.org_kg_text);
  if (!kg.ok) {
    throw std::runtime_error(dir + "/org_kg.ttl does not parse: line " +
                             std::to_string(kg.error.line) + ": " + kg.error.message);
  }
  if (kg.graph.empty()) throw std::runtime_error(dir + "/org_kg.ttl holds no triples");
  a.org_kg = std::move(kg.graph);

  a.factsheet = read_text_file(dir + "/printer_factsheet.txt");
  if (is_blank(a.factsheet)) throw std::runtime_error(dir + "/printer_factsheet.txt is empty");

  a.printer_reference_text = read_text_file(dir + "/printer_reference.ttl");
  ParseResult ref = parse_turtle(a.printer_reference_text);
  if (!ref.ok) {
    throw std::runtime_error(dir + "/printer_reference.ttl does not parse: line " +
                             std::to_string(ref.error.line) + ": " + ref.error.message);
  }
  if (ref.graph.empty()) throw std::runtime_error(dir + "/printer_reference.ttl holds no triples");
  a.printer_reference = std::move(ref.graph);
  return a;
}

inline const TaskAssets& default_assets() {
  static const TaskAssets assets = load_assets(default_data_dir());
  return assets;
}

}  // namespace ttb
