#pragma once

#include <stdexcept>
#include <string>

#include "ttb/tasks/task.hpp"

namespace ttb {

/// Byte limit → problem size. Roughly 100 bytes per person; T4 spends four
/// persons' worth of budget on the question text and in-degree padding, so
/// its size sits 4 below T3 at the same limit.
inline int calibrate_size(TaskId task, long long byte_limit) {
  if (!is_scalable(task)) {
    throw std::invalid_argument("task " + to_string(task) +
                                " has a fixed document; it takes no byte limit");
  }
  if (byte_limit < 1000) {
    throw std::invalid_argument("byte_limit must be at least 1000, got " +
                                std::to_string(byte_limit));
  }
  long long n = byte_limit / 100;
  if (task == TaskId::T4) n -= 4;
  return static_cast<int>(n);
}

}  // namespace ttb
