#include "mmaas/engine.hpp"

#include <cmath>
#include <cstdio>

namespace mmaas {

void EventQueue::schedule(double time_ms, std::string label, std::function<void()> fn) {
  if (time_ms < now_)
    throw EngineAssertion("scheduling in the past: " + std::to_string(time_ms) + " < " +
                          std::to_string(now_) + " (" + label + ")");
  queue_.push(Entry{time_ms, next_seq_++, std::move(label), std::move(fn)});
}

void EventQueue::run_until(double t_end_ms) {
  while (!queue_.empty() && queue_.top().time <= t_end_ms) {
    Entry e = queue_.top();
    queue_.pop();
    now_ = e.time;
    char line[96];
    std::snprintf(line, sizeof line, "%.3f|%llu|", e.time, static_cast<unsigned long long>(e.seq));
    trace_.push_back(line + e.label);
    e.fn();
  }
  now_ = t_end_ms;
}

}  // namespace mmaas
