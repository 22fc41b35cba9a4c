#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "ttb/rdf/turtle_parser.hpp"
#include "ttb/util/strings.hpp"

namespace ttb {

struct RepairResult {
  Graph graph;
  std::vector<int> removed_lines;  // 1-based, in removal order
  int iterations = 0;
  bool raw_parsable = false;
};

/// Iterative parsing failure heuristic: parse, blank the line reported as
/// the error source (keeping line numbering stable), retry until the
/// document parses or nothing is left. Total: every iteration blanks one
/// non-blank line, so it runs at most #non-blank-lines times.
inline RepairResult repair_parse(std::string_view text) {
  std::vector<std::string> lines = split_lines(text);
  RepairResult r;
  while (true) {
    ParseResult p = parse_turtle(join_lines(lines));
    if (p.ok) {
      r.graph = std::move(p.graph);
      r.raw_parsable = r.removed_lines.empty();
      r.iterations = static_cast<int>(r.removed_lines.size());
      return r;
    }
    int line = p.error.line;
    bool actionable =
        line >= 1 && line <= static_cast<int>(lines.size()) && !is_blank(lines[line - 1]);
    if (!actionable) {
      // Defensive: error lines always point at real content, but if a
      // report ever went astray, drop the last remaining content line so
      // progress is still guaranteed.
      line = 0;
      for (int i = static_cast<int>(lines.size()); i >= 1; --i) {
        if (!is_blank(lines[i - 1])) {
          line = i;
          break;
        }
      }
      if (line == 0) {
        r.graph = Graph{};
        r.raw_parsable = false;
        r.iterations = static_cast<int>(r.removed_lines.size());
        return r;
      }
    }
    lines[line - 1].clear();
    r.removed_lines.push_back(line);
  }
}

}  // namespace ttb
