#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mmaas/mobility.hpp"
#include "mmaas/params.hpp"
#include "mmaas/resources.hpp"
#include "mmaas/selection.hpp"
#include "mmaas/topology.hpp"

namespace mmaas {

enum class RuleKind { PlacePlanes, InstallForwarding, SwitchPath, OptimizeRoute, TransferFlow, AdmitFlow };

const char* rule_kind_name(RuleKind k);

struct Rule {
  RuleKind kind;
  bool radio_affecting = false;
  std::string subject;  // flow id, or mn id for PlacePlanes and per-MN switches

  ApId cp_ap, dp_ap;               // PlacePlanes
  NodeId from_ar, to_ar;           // InstallForwarding
  ApId source_ap, target_ap;       // TransferFlow
  std::vector<NodeId> new_path;    // AP-prefixed path the flow ends up on
  std::vector<FlowId> flows;       // per-MN legacy switch: flows it re-paths
  double activate_delay_ms = 0;    // OptimizeRoute: delay after the detour installs

  std::vector<NodeId> affected_ars;  // distinct ARs whose tables this rule touches
};

struct Solution {
  std::vector<Rule> rules;
  std::vector<NodeId> install_targets;     // distinct affected ARs, sorted
  std::optional<NodeId> resource_target;   // access-network node, set iff any rule is radio-affecting
};

// Everything decide() may look at. Pure: equal inputs give equal solutions.
struct DecideInput {
  const NetworkTopology* topo = nullptr;
  const SimParams* params = nullptr;
  Mode mode = Mode::Mmaas;

  TriggerReason reason = TriggerReason::RadioSignal;
  MnId mn;
  ApId from_ap, to_ap;    // radio
  ApId overloaded_ap;     // load
  FlowId new_flow;        // new-flow

  // Radio context captured at the break (old slot layout and per-flow paths
  // as they were before the move).
  std::vector<AttachmentSlot> old_slots, new_slots;
  std::map<FlowId, std::vector<NodeId>> old_paths;

  const std::map<MnId, MobileNode>* nodes = nullptr;
  const std::map<FlowId, Flow>* flows = nullptr;
  const LoadTable* loads = nullptr;
};

Solution decide(const DecideInput& in);

// Profile-driven plane placement over the current coverage, best = highest
// rssi with ties to the lowest ap id. Returns one dual slot, or a macro CP
// slot plus a small-cell DP slot for pedestrians seeing both kinds.
std::vector<AttachmentSlot> place_planes(MobilityProfile profile,
                                         const std::vector<CoverageEntry>& coverage,
                                         const NetworkTopology& topo, PlacementStrategy strategy);

// Cell kinds a slot may hand over to, given placement policy and coverage.
// Empty optional: any kind.
std::optional<CellKind> eligible_kind(MobilityProfile profile, PlacementStrategy strategy,
                                      bool slot_is_data, bool macro_covered, bool small_covered);

// Minimum-latency data-plane path from an AR to the egress (no AP prefix).
std::vector<NodeId> optimize_route(const NetworkTopology& topo, const NodeId& from_ar);

// Path a flow takes from its serving AP: direct in MMaaS mode, pinned through
// the anchor gateway in legacy mode.
std::vector<NodeId> flow_path(const NetworkTopology& topo, Mode mode, const ApId& serving_ap);

// Forwarding detour for a delay-sensitive flow: new AP, tunnel new_ar->old_ar,
// then the old path's tail.
std::vector<NodeId> forwarding_detour(const NetworkTopology& topo, const ApId& new_ap,
                                      const NodeId& old_ar, const std::vector<NodeId>& old_path);

// Greedy offload of an overloaded AP: delay-tolerant flows first, each class
// ascending by rate, moved to the least-loaded other AP in the owning MN's
// attachment set until load <= theta. Flows whose owner lacks multi-
// connectivity (or is Static in MMaaS mode) stay put.
std::vector<Rule> plan_rebalance(const ApId& overloaded_ap, double theta, Mode mode,
                                 const NetworkTopology& topo, const LoadTable& loads,
                                 const std::map<FlowId, Flow>& flows,
                                 const std::map<MnId, MobileNode>& nodes);

std::vector<NodeId> ars_on(const std::vector<NodeId>& path, const NetworkTopology& topo);

}  // namespace mmaas
