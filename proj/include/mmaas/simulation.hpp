#pragma once

#include <string>
#include <vector>

#include "mmaas/metrics.hpp"
#include "mmaas/scenario.hpp"

namespace mmaas {

struct RunOutput {
  MetricsReport report;
  std::string message_csv;  // time_ms,tx_id,kind,src,dst
  std::string rule_csv;     // time_ms,tx_id,rule_kind,subject_id,detail
  std::string load_csv;     // time_ms,entity_id,load_fraction
  std::vector<std::string> event_trace;
};

// Executes the scenario to its horizon in the given mode. Deterministic:
// equal (scenario, mode) inputs produce byte-identical logs and reports.
RunOutput run(const Scenario& scenario, Mode mode);

}  // namespace mmaas
