#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <string>
#include <vector>

#include "mmaas/errors.hpp"

namespace mmaas {

// Deterministic single-threaded event queue. Events fire in (time, seq)
// lexicographic order; seq is the insertion counter, so equal-time events run
// in scheduling order. Each executed event appends "time|seq|label" to the
// trace, which replay tests compare byte for byte.
class EventQueue {
 public:
  void schedule(double time_ms, std::string label, std::function<void()> fn);
  // Runs every event with time <= t_end_ms, then advances now to t_end_ms.
  void run_until(double t_end_ms);
  double now() const { return now_; }
  const std::vector<std::string>& trace() const { return trace_; }

 private:
  struct Entry {
    double time;
    std::uint64_t seq;
    std::string label;
    std::function<void()> fn;
    bool operator>(const Entry& o) const {
      if (time != o.time) return time > o.time;
      return seq > o.seq;
    }
  };
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue_;
  std::uint64_t next_seq_ = 0;
  double now_ = 0;
  std::vector<std::string> trace_;
};

}  // namespace mmaas
