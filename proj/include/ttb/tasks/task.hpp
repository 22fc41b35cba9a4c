#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "ttb/rdf/term.hpp"

namespace ttb {

enum class TaskId { T1, T2, T3, T4, T5 };

inline std::string to_string(TaskId t) {
  switch (t) {
    case TaskId::T1: return "T1";
    case TaskId::T2: return "T2";
    case TaskId::T3: return "T3";
    case TaskId::T4: return "T4";
    case TaskId::T5: return "T5";
  }
  return "T?";
}

inline std::optional<TaskId> task_from_string(std::string_view s) {
  if (s == "T1" || s == "t1") return TaskId::T1;
  if (s == "T2" || s == "t2") return TaskId::T2;
  if (s == "T3" || s == "t3") return TaskId::T3;
  if (s == "T4" || s == "t4") return TaskId::T4;
  if (s == "T5" || s == "t5") return TaskId::T5;
  return std::nullopt;
}

/// T3 and T4 scale with a byte limit; the others ship fixed documents.
inline bool is_scalable(TaskId t) { return t == TaskId::T3 || t == TaskId::T4; }

inline const std::set<TaskId>& all_tasks() {
  static const std::set<TaskId> ids{TaskId::T1, TaskId::T2, TaskId::T3, TaskId::T4, TaskId::T5};
  return ids;
}

/// What a perfect answer is scored against. Which alternative is active
/// matches the task: T1 an IRI set, T2/T5 a reference graph, T3 the person
/// count, T4 the designated person.
using ExpectedPayload =
    std::variant<std::monostate, std::set<Iri>, Graph, long long, Iri>;

struct TaskInstance {
  TaskId task_id = TaskId::T1;
  std::optional<long long> byte_limit;
  std::optional<int> n_persons;
  std::uint64_t seed = 0;
  std::string prompt;
  ExpectedPayload expected;
};

/// Named scalar scores; keys depend on the task (precision/recall/f1,
/// raw_parsable, persons_relative_error, type_coverage, degree_compliance,
/// output_compliance).
using MetricSet = std::map<std::string, double>;

}  // namespace ttb
