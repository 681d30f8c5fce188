#pragma once

// A tiny fork-join helper. Work items write only to their own output slot,
// so results do not depend on scheduling.

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace kleincert {

class ExecutionContext {
 public:
  explicit ExecutionContext(unsigned jobs = 1) : jobs_(std::max(1u, jobs)) {}
  unsigned jobs() const noexcept { return jobs_; }

  /// Calls fn(i) for i in [0, n); the first exception is rethrown.
  template <class Fn>
  void parallel_for(std::size_t n, Fn&& fn) const {
    if (jobs_ == 1 || n < 2) {
      for (std::size_t i = 0; i < n; ++i) fn(i);
      return;
    }
    const std::size_t workers = std::min<std::size_t>(jobs_, n);
    std::exception_ptr error;
    std::mutex m;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < n; i += workers) fn(i);
        } catch (...) {
          std::lock_guard lock(m);
          if (!error) error = std::current_exception();
        }
      });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
  }

 private:
  unsigned jobs_;
};

}  // namespace kleincert
