#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <vector>

namespace melonica {

/// Runs fn(0..tasks-1) on up to `jobs` threads and returns the results in
/// task order, so the output never depends on the job count.
template <typename Fn>
auto parallel_tasks(std::size_t tasks, int jobs, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
  using Result = decltype(fn(std::size_t{}));
  std::vector<Result> results(tasks);
  if (jobs <= 1 || tasks <= 1) {
    for (std::size_t t = 0; t < tasks; ++t) results[t] = fn(t);
    return results;
  }
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(jobs), tasks);
  std::vector<std::future<void>> pending;
  for (std::size_t w = 0; w < workers; ++w) {
    pending.push_back(std::async(std::launch::async, [&, w] {
      for (std::size_t t = w; t < tasks; t += workers) results[t] = fn(t);
    }));
  }
  for (auto& f : pending) f.get();
  return results;
}

}  // namespace melonica
