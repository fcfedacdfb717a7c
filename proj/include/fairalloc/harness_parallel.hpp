// Copyright 2026 The fairalloc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace fairalloc::harness {

template <class T>
std::vector<T> run_parallel(const std::vector<std::function<T()>>& tasks, int jobs) {
  std::vector<std::optional<T>> slots(tasks.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        slots[i] = tasks[i]();
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const auto n = static_cast<std::size_t>(std::max(1, jobs));
  if (n == 1 || tasks.size() < 2) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t k = 0; k < std::min(n, tasks.size()); ++k) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<T> out;
  out.reserve(slots.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace fairalloc::harness
