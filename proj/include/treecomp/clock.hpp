#pragma once

#include <chrono>
#include <optional>

#include "treecomp/lp.hpp"

namespace treecomp {

/// Elapsed-time source. In virtual mode, time advances by a fixed quantum
/// per LP solve (read off the context's counter), which makes every
/// time-limit code path deterministic in tests.
class Stopwatch {
 public:
  Stopwatch(const LpContext& ctx, bool virtual_clock, double seconds_per_lp = 1e-3)
      : virtual_(virtual_clock && ctx.counter != nullptr),
        counter_(ctx.counter),
        per_lp_(seconds_per_lp),
        start_real_(std::chrono::steady_clock::now()) {
    if (virtual_) start_ticks_ = counter_->solves.load(std::memory_order_relaxed);
  }

  double elapsed_s() const {
    if (virtual_) {
      const long long now = counter_->solves.load(std::memory_order_relaxed);
      return static_cast<double>(now - start_ticks_) * per_lp_;
    }
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_real_).count();
  }

 private:
  bool virtual_;
  std::shared_ptr<LpCounter> counter_;
  double per_lp_;
  long long start_ticks_ = 0;
  std::chrono::steady_clock::time_point start_real_;
};

struct Budget {
  std::optional<double> limit_s;
  const Stopwatch* watch = nullptr;

  bool exhausted() const { return limit_s && watch && watch->elapsed_s() > *limit_s; }
  std::optional<double> remaining_s() const {
    if (!limit_s || !watch) return std::nullopt;
    return *limit_s - watch->elapsed_s();
  }
};

}  // namespace treecomp
