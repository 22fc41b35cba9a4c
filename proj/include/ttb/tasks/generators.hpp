#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include "ttb/graph/analysis.hpp"
#include "ttb/rdf/turtle_writer.hpp"
#include "ttb/tasks/assets.hpp"
#include "ttb/tasks/calibrate.hpp"
#include "ttb/tasks/person_graph.hpp"
#include "ttb/tasks/task.hpp"
#include "ttb/util/strings.hpp"

namespace ttb {

/// The two seeded defects for the error-fixing task: the statement period
/// at the end of line 9 disappears and line 16 loses its first semicolon.
inline std::string corrupt_org_listing(const std::string& text) {
  std::vector<std::string> lines = split_lines(text);
  if (lines.size() < 16) throw std::logic_error("organizational document is too short to corrupt");
  std::string& l9 = lines[8];
  std::size_t dot = l9.rfind('.');
  if (dot == std::string::npos) throw std::logic_error("line 9 has no period to remove");
  l9.erase(dot, 1);
  std::string& l16 = lines[15];
  std::size_t semi = l16.find(';');
  if (semi == std::string::npos) throw std::logic_error("line 16 has no semicolon to remove");
  l16.erase(semi, 1);
  return join_lines(lines);
}

inline std::string join_prompt(const std::string& prompt, const std::string& document) {
  return prompt + "\n\n" + document;
}

inline TaskInstance generate_t1(const TaskAssets& assets = default_assets()) {
  TaskInstance inst;
  inst.task_id = TaskId::T1;
  inst.prompt = join_prompt(assets.prompt_t1, assets.org_kg_text);
  auto ns = assets.org_kg.prefixes.find("");
  if (ns == assets.org_kg.prefixes.end()) {
    throw std::runtime_error("organizational graph lacks the default prefix");
  }
  Iri start{ns->second + "anne"};
  Iri end{ns->second + "bob"};
  auto path = shortest_path(assets.org_kg, start, end, {Iri{std::string(vocab::rdf_type)}});
  if (!path) throw std::runtime_error("organizational graph has no anne-bob connection");
  std::set<Iri> expected;
  for (const Term& node : path->nodes) {
    if (const auto* iri = std::get_if<Iri>(&node)) expected.insert(*iri);
  }
  inst.expected = std::move(expected);
  return inst;
}

inline TaskInstance generate_t2(const TaskAssets& assets = default_assets()) {
  TaskInstance inst;
  inst.task_id = TaskId::T2;
  inst.prompt = join_prompt(assets.prompt_t2, corrupt_org_listing(assets.org_kg_text));
  inst.expected = assets.org_kg;
  return inst;
}

inline TaskInstance generate_t3(long long byte_limit, std::uint64_t seed,
                                const TaskAssets& assets = default_assets()) {
  int n = calibrate_size(TaskId::T3, byte_limit);
  TaskInstance inst;
  inst.task_id = TaskId::T3;
  inst.byte_limit = byte_limit;
  inst.n_persons = n;
  inst.seed = seed;
  std::string prompt = assets.prompt_t3_template;
  replace_all(prompt, "{n}", std::to_string(n));
  replace_all(prompt, "{max_connections}", std::to_string(n - 1));
  inst.prompt = std::move(prompt);
  inst.expected = static_cast<long long>(n);
  return inst;
}

inline int t4_extra_links(int n) { return n < 10 ? 1 : 2; }

inline TaskInstance generate_t4(long long byte_limit, std::uint64_t seed,
                                const TaskAssets& assets = default_assets()) {
  int n = calibrate_size(TaskId::T4, byte_limit);
  PersonGraph pg = generate_person_graph({n, t4_extra_links(n), seed});
  TaskInstance inst;
  inst.task_id = TaskId::T4;
  inst.byte_limit = byte_limit;
  inst.n_persons = n;
  inst.seed = seed;
  inst.prompt = join_prompt(assets.prompt_t4, serialize_person_graph(pg));
  inst.expected = pg.designated;
  return inst;
}

inline TaskInstance generate_t5(const std::string& factsheet_text, const Graph& reference_graph,
                                const TaskAssets& assets = default_assets()) {
  if (is_blank(factsheet_text)) throw std::invalid_argument("factsheet text is empty");
  if (reference_graph.empty()) throw std::invalid_argument("reference graph is empty");
  TaskInstance inst;
  inst.task_id = TaskId::T5;
  inst.prompt = join_prompt(assets.prompt_t5, factsheet_text);
  inst.expected = reference_graph;
  return inst;
}

inline TaskInstance generate_t5(const TaskAssets& assets = default_assets()) {
  return generate_t5(assets.factsheet, assets.printer_reference, assets);
}

/// Uniform entry point used by the runner and CLI. Scalable tasks require
/// a byte limit; fixed tasks reject one.
inline TaskInstance generate_task(TaskId task, std::optional<long long> byte_limit,
                                  std::uint64_t seed, const TaskAssets& assets = default_assets()) {
  if (is_scalable(task)) {
    if (!byte_limit) {
      throw std::invalid_argument("task " + to_string(task) + " requires a byte limit");
    }
  } else if (byte_limit) {
    throw std::invalid_argument("task " + to_string(task) + " takes no byte limit");
  }
  switch (task) {
    case TaskId::T1: {
      TaskInstance inst = generate_t1(assets);
      inst.seed = seed;
      return inst;
    }
    case TaskId::T2: {
      TaskInstance inst = generate_t2(assets);
      inst.seed = seed;
      return inst;
    }
    case TaskId::T3: return generate_t3(*byte_limit, seed, assets);
    case TaskId::T4: return generate_t4(*byte_limit, seed, assets);
    case TaskId::T5: {
      TaskInstance inst = generate_t5(assets);
      inst.seed = seed;
      return inst;
    }
  }
  throw std::logic_error("unreachable task id");
}

/// A response that earns the maximal score on every metric of its task.
/// Drives the ideal mock model and the closed-loop checks.
inline std::string ideal_answer(const TaskInstance& inst,
                                const TaskAssets& assets = default_assets()) {
  switch (inst.task_id) {
    case TaskId::T1: {
      const auto& iris = std::get<std::set<Iri>>(inst.expected);
      std::string out;
      for (const Iri& iri : iris) {
        if (!out.empty()) out += '\n';
        out += iri.value;
      }
      return out;
    }
    case TaskId::T2: return assets.org_kg_text;
    case TaskId::T3: {
      int n = inst.n_persons.value();
      PersonGraph pg = generate_person_graph({n, t4_extra_links(n), inst.seed});
      return serialize_person_graph(pg);
    }
    case TaskId::T4: return std::get<Iri>(inst.expected).value;
    case TaskId::T5: return serialize_turtle(std::get<Graph>(inst.expected));
  }
  throw std::logic_error("unreachable task id");
}

}  // namespace ttb
