#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mmaas/errors.hpp"
#include "mmaas/topology.hpp"

namespace mmaas {

struct FlowReport {
  double disruption_ms = 0;
  int switches = 0;
  std::vector<NodeId> final_path;
};

struct MetricsReport {
  std::string scenario_hash;
  std::string mode;
  std::uint64_t seed = 0;
  double horizon_ms = 0;

  int messages_total = 0;
  std::map<std::string, int> messages_by_kind;
  int transactions_total = 0;
  std::map<std::string, int> transactions_by_reason;
  double cp_latency_mean_ms = 0;
  double cp_latency_p95_ms = 0;

  int handovers_intra = 0;  // trigger APs shared a BBU domain
  int handovers_inter = 0;
  int local_handovers = 0;  // resolved at the BBU pool, no controller messages

  std::map<FlowId, FlowReport> flows;
  double total_disruption_ms = 0;

  std::map<MnId, double> instance_ms;
  double instance_total_ms = 0;

  double residual_overload_ms = 0;
  int selection_fallbacks = 0;
  int decisions = 0;
  double anchor_path_fraction = 0;  // share of observed path versions through the anchor gateway
};

std::string report_to_json(const MetricsReport& r);
MetricsReport report_from_json(const std::string& text);
std::string report_to_csv(const MetricsReport& r);

struct ComparisonRow {
  std::string metric;
  double a = 0, b = 0;
};

struct Comparison {
  std::string scenario_hash;
  std::string mode_a, mode_b;
  std::vector<ComparisonRow> rows;
};

// Throws ScenarioMismatch when the reports come from different scenarios.
Comparison compare(const MetricsReport& a, const MetricsReport& b);
std::string comparison_to_text(const Comparison& c);
std::string comparison_to_json(const Comparison& c);

}  // namespace mmaas
