#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmaas/mobility.hpp"
#include "mmaas/params.hpp"
#include "mmaas/selection.hpp"
#include "mmaas/topology.hpp"

namespace mmaas {

struct NodeSpec {
  MnId id;
  DeviceClass device = DeviceClass::Handset;
  double speed_kmh = 0;
  Position pos{};
  std::vector<Position> waypoints;
  std::vector<ApId> attach;  // explicit initial attachment; empty = placement decides
  std::string policy_id;     // empty = built-in default
};

struct FlowSpec {
  FlowId id;
  MnId mn;
  FlowDelayClass delay_class = FlowDelayClass::DelayTolerant;
  double rate_mbps = 0;
  double birth_ms = 0;
  std::optional<double> end_ms;
};

struct Scenario {
  TopologySpec topology;
  std::vector<NodeSpec> nodes;
  std::vector<FlowSpec> flows;
  std::map<std::string, PolicyVector> policies;
  PolicyVector network_policy;  // used by the negotiated scheme
  SimParams params;
  std::string hash_hex;  // content digest of the source text
  std::string name;
};

// Line-oriented sections: [topology] [nodes] [flows] [policies] [params],
// '#' comments, whitespace-separated key=value fields. Unknown directives and
// keys are rejected with the offending line number. Throws ParseError for
// malformed input and ValidationError for semantic violations.
Scenario parse_scenario_text(const std::string& text, const std::string& name);
Scenario parse_scenario_file(const std::string& path);

// Cross-checks ids, coverage of explicit attachments, flow timing, and builds
// the topology once to surface its validation errors. Throws on violation.
void validate_scenario(const Scenario& s);

std::string fnv1a_hex(const std::string& bytes);

}  // namespace mmaas
