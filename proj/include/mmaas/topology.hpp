#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mmaas/errors.hpp"

namespace mmaas {

// Node ids are scenario-declared names. APs live outside the link graph
// (their uplink is the fronthaul to parent_ar); everything else is a graph node.
using NodeId = std::string;
using ApId = std::string;
using MnId = std::string;
using FlowId = std::string;

enum class CellKind { MacroCell, SmallCell };
enum class NodeKind { AccessRouter, BbuPool, Controller, MmApp, Gateway, Egress };

const char* cell_kind_name(CellKind k);
const char* node_kind_name(NodeKind k);

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(const Position& a, const Position& b);

struct AccessPoint {
  ApId id;
  CellKind kind = CellKind::MacroCell;
  std::string rat;  // free-form radio-tech tag
  Position position;
  double radius_m = 0.0;
  double capacity_mbps = 0.0;
  std::optional<NodeId> bbu_domain;  // absent = legacy RAN deployment
  NodeId parent_ar;
  // Static per-AP inputs for the policy-vector axes.
  double operator_preference = 0.0;
  double cost = 0.0;
};

struct BbuDomain {
  NodeId id;
  std::set<ApId> ap_ids;
};

struct Link {
  NodeId a;
  NodeId b;
  double latency_ms = 0.0;
  std::string id;
};

struct RadioConfig {
  double rssi_at_center = 0.0;
  double path_loss_slope = 30.0;
};

struct CoverageEntry {
  ApId ap;
  double rssi;
};

// Declaration-ordered construction input; build_topology validates and freezes it.
struct TopologySpec {
  std::vector<AccessPoint> aps;
  std::vector<NodeId> bbu_domains;
  std::vector<NodeId> access_routers;
  std::vector<Link> links;
  NodeId controller;
  NodeId mm_app;
  NodeId egress;
  std::optional<NodeId> anchor_gateway;  // required only for legacy-mode runs
  RadioConfig radio;
  std::uint64_t rng_seed = 0;
};

// Immutable after construction; safely shareable by concurrent readers.
class NetworkTopology {
 public:
  const std::map<ApId, AccessPoint>& aps() const { return aps_; }
  const std::map<NodeId, BbuDomain>& bbu_domains() const { return bbu_domains_; }
  const std::vector<NodeId>& access_routers() const { return access_routers_; }
  const std::vector<Link>& links() const { return links_; }
  const NodeId& controller() const { return controller_; }
  const NodeId& mm_app() const { return mm_app_; }
  const NodeId& egress() const { return egress_; }
  const std::optional<NodeId>& anchor_gateway() const { return anchor_gateway_; }
  const RadioConfig& radio() const { return radio_; }
  std::uint64_t rng_seed() const { return rng_seed_; }

  bool has_node(const NodeId& id) const;
  NodeKind node_kind(const NodeId& id) const;  // throws UnknownEntity
  const AccessPoint& ap(const ApId& id) const;  // throws UnknownAp

  // All APs whose disk contains `pos`, sorted by ap id. rssi falls linearly
  // with relative distance: rssi_at_center - slope * (d / radius).
  std::vector<CoverageEntry> coverage_at(Position pos) const;

  // False iff both APs belong to the same BBU domain. A legacy-RAN AP
  // (no domain) always makes the pair inter-domain.
  bool is_inter_domain(const ApId& from, const ApId& to) const;

  // Minimum-latency path cost over the full link graph; symmetric.
  double control_path_latency(const NodeId& a, const NodeId& b) const;

  // Minimum-latency node sequence restricted to data-plane nodes
  // (ARs, gateway, egress). Ties broken by lexicographic node-id sequence.
  // `excluded` nodes may not appear as intermediates or endpoints.
  std::vector<NodeId> data_path(const NodeId& from, const NodeId& to,
                                const std::set<NodeId>& excluded = {}) const;

  // Sum of link latencies over consecutive graph-node pairs; a leading AP id
  // contributes nothing (fronthaul hop is latency-free in this model).
  double path_latency(const std::vector<NodeId>& path) const;

  // Control endpoint of an AP's access network: its BBU node, or its parent AR
  // for legacy-RAN APs.
  NodeId access_network_node(const ApId& ap) const;

 private:
  friend NetworkTopology build_topology(const TopologySpec& spec);

  std::map<ApId, AccessPoint> aps_;
  std::map<NodeId, BbuDomain> bbu_domains_;
  std::vector<NodeId> access_routers_;
  std::vector<Link> links_;
  NodeId controller_;
  NodeId mm_app_;
  NodeId egress_;
  std::optional<NodeId> anchor_gateway_;
  RadioConfig radio_;
  std::uint64_t rng_seed_ = 0;

  std::map<NodeId, NodeKind> node_kinds_;
  // adjacency: node -> sorted (neighbor, latency)
  std::map<NodeId, std::vector<std::pair<NodeId, double>>> adjacency_;

  std::vector<std::pair<NodeId, double>> neighbors(const NodeId& n) const;
};

// Validates all type invariants. Throws SimError with the offending id on
// DuplicateId, DuplicateMembership, NonPositiveLatency, DisconnectedControlGraph.
NetworkTopology build_topology(const TopologySpec& spec);

}  // namespace mmaas
