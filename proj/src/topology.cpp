#include "mmaas/topology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mmaas {

const char* err_name(Err e) {
  switch (e) {
    case Err::DisconnectedControlGraph: return "DisconnectedControlGraph";
    case Err::DuplicateId: return "DuplicateId";
    case Err::DuplicateMembership: return "DuplicateMembership";
    case Err::NonPositiveLatency: return "NonPositiveLatency";
    case Err::UnknownAp: return "UnknownAp";
    case Err::UnknownEntity: return "UnknownEntity";
    case Err::Unreachable: return "Unreachable";
    case Err::NegativeSpeed: return "NegativeSpeed";
    case Err::NotIntraDomain: return "NotIntraDomain";
    case Err::FlowNotActive: return "FlowNotActive";
    case Err::NoAttachment: return "NoAttachment";
    case Err::AllCandidatesFiltered: return "AllCandidatesFiltered";
    case Err::InstanceRefusedStatic: return "InstanceRefusedStatic";
    case Err::ParseError: return "ParseError";
    case Err::ValidationError: return "ValidationError";
    case Err::ScenarioMismatch: return "ScenarioMismatch";
    case Err::IoError: return "IoError";
  }
  return "SimError";
}

const char* cell_kind_name(CellKind k) {
  return k == CellKind::MacroCell ? "macro" : "small";
}

const char* node_kind_name(NodeKind k) {
  switch (k) {
    case NodeKind::AccessRouter: return "ar";
    case NodeKind::BbuPool: return "bbu";
    case NodeKind::Controller: return "controller";
    case NodeKind::MmApp: return "mmapp";
    case NodeKind::Gateway: return "gateway";
    case NodeKind::Egress: return "egress";
  }
  return "node";
}

double distance(const Position& a, const Position& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

bool NetworkTopology::has_node(const NodeId& id) const {
  return node_kinds_.count(id) > 0;
}

NodeKind NetworkTopology::node_kind(const NodeId& id) const {
  auto it = node_kinds_.find(id);
  if (it == node_kinds_.end()) throw SimError(Err::UnknownEntity, "no such node '" + id + "'");
  return it->second;
}

const AccessPoint& NetworkTopology::ap(const ApId& id) const {
  auto it = aps_.find(id);
  if (it == aps_.end()) throw SimError(Err::UnknownAp, "no such ap '" + id + "'");
  return it->second;
}

std::vector<CoverageEntry> NetworkTopology::coverage_at(Position pos) const {
  std::vector<CoverageEntry> out;
  for (const auto& [id, ap] : aps_) {
    const double d = distance(pos, ap.position);
    if (d <= ap.radius_m) {
      out.push_back({id, radio_.rssi_at_center - radio_.path_loss_slope * (d / ap.radius_m)});
    }
  }
  return out;  // map iteration keeps ap-id order
}

bool NetworkTopology::is_inter_domain(const ApId& from, const ApId& to) const {
  const AccessPoint& a = ap(from);
  const AccessPoint& b = ap(to);
  if (!a.bbu_domain || !b.bbu_domain) return true;
  return *a.bbu_domain != *b.bbu_domain;
}

std::vector<std::pair<NodeId, double>> NetworkTopology::neighbors(const NodeId& n) const {
  auto it = adjacency_.find(n);
  if (it == adjacency_.end()) return {};
  return it->second;
}

namespace {

// Best (cost, path) per node via relaxation to fixpoint. Graphs are small;
// exactness of the lexicographic tie-break matters more than speed here.
struct Label {
  double cost = std::numeric_limits<double>::infinity();
  std::vector<NodeId> path;
};

bool better(double cost, const std::vector<NodeId>& path, const Label& l) {
  if (cost < l.cost - 1e-12) return true;
  if (cost > l.cost + 1e-12) return false;
  return path < l.path;
}

}  // namespace

double NetworkTopology::control_path_latency(const NodeId& a, const NodeId& b) const {
  if (!has_node(a)) throw SimError(Err::UnknownEntity, "no such node '" + a + "'");
  if (!has_node(b)) throw SimError(Err::UnknownEntity, "no such node '" + b + "'");
  if (a == b) return 0.0;

  std::map<NodeId, double> dist;
  dist[a] = 0.0;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [node, d] : std::map<NodeId, double>(dist)) {
      for (const auto& [next, lat] : neighbors(node)) {
        const double nd = d + lat;
        auto it = dist.find(next);
        if (it == dist.end() || nd < it->second - 1e-12) {
          dist[next] = nd;
          changed = true;
        }
      }
    }
  }
  auto it = dist.find(b);
  if (it == dist.end())
    throw SimError(Err::Unreachable, "no path between '" + a + "' and '" + b + "'");
  return it->second;
}

std::vector<NodeId> NetworkTopology::data_path(const NodeId& from, const NodeId& to,
                                               const std::set<NodeId>& excluded) const {
  auto data_plane = [&](const NodeId& n) {
    const NodeKind k = node_kind(n);
    return k == NodeKind::AccessRouter || k == NodeKind::Gateway || k == NodeKind::Egress;
  };
  if (!has_node(from) || !data_plane(from))
    throw SimError(Err::UnknownEntity, "data path source '" + from + "' is not a data-plane node");
  if (!has_node(to) || !data_plane(to))
    throw SimError(Err::UnknownEntity, "data path target '" + to + "' is not a data-plane node");
  if (excluded.count(from) || excluded.count(to))
    throw SimError(Err::Unreachable, "data path endpoint '" +
                                         (excluded.count(from) ? from : to) + "' is excluded");
  if (from == to) return {from};

  std::map<NodeId, Label> best;
  best[from] = {0.0, {from}};
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [node, label] : std::map<NodeId, Label>(best)) {
      for (const auto& [next, lat] : neighbors(node)) {
        if (!data_plane(next) || excluded.count(next)) continue;
        if (std::find(label.path.begin(), label.path.end(), next) != label.path.end()) continue;
        std::vector<NodeId> path = label.path;
        path.push_back(next);
        const double cost = label.cost + lat;
        auto it = best.find(next);
        if (it == best.end() || better(cost, path, it->second)) {
          best[next] = {cost, std::move(path)};
          changed = true;
        }
      }
    }
  }
  auto it = best.find(to);
  if (it == best.end())
    throw SimError(Err::Unreachable, "no data path from '" + from + "' to '" + to + "'");
  return it->second.path;
}

double NetworkTopology::path_latency(const std::vector<NodeId>& path) const {
  double total = 0.0;
  const NodeId* prev = nullptr;
  for (const NodeId& n : path) {
    if (!has_node(n)) continue;  // AP prefix
    if (prev) {
      bool found = false;
      for (const auto& [next, lat] : neighbors(*prev)) {
        if (next == n) {
          total += lat;
          found = true;
          break;
        }
      }
      if (!found)
        throw EngineAssertion("path step '" + *prev + "' -> '" + n + "' is not a link");
    }
    prev = &n;
  }
  return total;
}

NodeId NetworkTopology::access_network_node(const ApId& ap_id) const {
  const AccessPoint& a = ap(ap_id);
  if (a.bbu_domain) return *a.bbu_domain;
  return a.parent_ar;
}

NetworkTopology build_topology(const TopologySpec& spec) {
  NetworkTopology t;
  t.radio_ = spec.radio;
  t.rng_seed_ = spec.rng_seed;

  auto claim = [&t](const NodeId& id, NodeKind kind) {
    if (id.empty()) throw SimError(Err::ValidationError, std::string(node_kind_name(kind)) + " with empty id");
    if (!t.node_kinds_.emplace(id, kind).second)
      throw SimError(Err::DuplicateId, "node id '" + id + "' declared twice");
  };

  if (spec.controller.empty()) throw SimError(Err::ValidationError, "no controller declared");
  if (spec.mm_app.empty()) throw SimError(Err::ValidationError, "no mmapp declared");
  if (spec.egress.empty()) throw SimError(Err::ValidationError, "no egress declared");

  claim(spec.controller, NodeKind::Controller);
  claim(spec.mm_app, NodeKind::MmApp);
  claim(spec.egress, NodeKind::Egress);
  if (spec.anchor_gateway) claim(*spec.anchor_gateway, NodeKind::Gateway);
  for (const NodeId& ar : spec.access_routers) claim(ar, NodeKind::AccessRouter);
  for (const NodeId& bbu : spec.bbu_domains) claim(bbu, NodeKind::BbuPool);

  t.controller_ = spec.controller;
  t.mm_app_ = spec.mm_app;
  t.egress_ = spec.egress;
  t.anchor_gateway_ = spec.anchor_gateway;
  t.access_routers_ = spec.access_routers;
  for (const NodeId& bbu : spec.bbu_domains) t.bbu_domains_[bbu] = BbuDomain{bbu, {}};

  double max_small_radius = 0.0;
  double min_macro_radius = std::numeric_limits<double>::infinity();
  for (const AccessPoint& ap : spec.aps) {
    if (ap.id.empty()) throw SimError(Err::ValidationError, "ap with empty id");
    if (t.node_kinds_.count(ap.id) || t.aps_.count(ap.id))
      throw SimError(Err::DuplicateId, "ap id '" + ap.id + "' collides with another id");
    if (ap.radius_m <= 0)
      throw SimError(Err::ValidationError, "ap '" + ap.id + "' has non-positive radius");
    if (ap.capacity_mbps <= 0)
      throw SimError(Err::ValidationError, "ap '" + ap.id + "' has non-positive capacity");
    if (ap.parent_ar.empty() ||
        std::find(spec.access_routers.begin(), spec.access_routers.end(), ap.parent_ar) ==
            spec.access_routers.end())
      throw SimError(Err::ValidationError,
                     "ap '" + ap.id + "' references unknown ar '" + ap.parent_ar + "'");
    if (ap.bbu_domain) {
      auto dom = t.bbu_domains_.find(*ap.bbu_domain);
      if (dom == t.bbu_domains_.end())
        throw SimError(Err::ValidationError,
                       "ap '" + ap.id + "' references unknown bbu domain '" + *ap.bbu_domain + "'");
      if (!dom->second.ap_ids.insert(ap.id).second)
        throw SimError(Err::DuplicateMembership, "ap '" + ap.id + "' listed twice in domain");
    }
    if (ap.kind == CellKind::SmallCell) max_small_radius = std::max(max_small_radius, ap.radius_m);
    else min_macro_radius = std::min(min_macro_radius, ap.radius_m);
    t.aps_[ap.id] = ap;
  }
  if (min_macro_radius <= max_small_radius)
    throw SimError(Err::ValidationError, "macro radius must exceed every small-cell radius");
  for (const auto& [id, dom] : t.bbu_domains_) {
    if (dom.ap_ids.empty())
      throw SimError(Err::ValidationError, "bbu domain '" + id + "' has no member aps");
  }
  // every AP may appear in at most one domain: enforced structurally, an AP
  // carries a single optional bbu_domain and duplicate ap blocks are rejected.

  for (const NodeId& ar : spec.access_routers) {
    bool has_ap = std::any_of(spec.aps.begin(), spec.aps.end(),
                              [&](const AccessPoint& a) { return a.parent_ar == ar; });
    if (!has_ap)
      throw SimError(Err::ValidationError, "ar '" + ar + "' has no attached ap");
  }

  std::set<std::pair<NodeId, NodeId>> seen_links;
  int link_no = 0;
  for (const Link& l : spec.links) {
    ++link_no;
    if (!t.node_kinds_.count(l.a))
      throw SimError(Err::ValidationError, "link endpoint '" + l.a + "' is not a node");
    if (!t.node_kinds_.count(l.b))
      throw SimError(Err::ValidationError, "link endpoint '" + l.b + "' is not a node");
    if (l.a == l.b) throw SimError(Err::ValidationError, "self-link on '" + l.a + "'");
    if (l.latency_ms <= 0)
      throw SimError(Err::NonPositiveLatency,
                     "link '" + l.a + "'-'" + l.b + "' latency must be > 0");
    auto key = std::minmax(l.a, l.b);
    if (!seen_links.insert({key.first, key.second}).second)
      throw SimError(Err::DuplicateId, "duplicate link '" + l.a + "'-'" + l.b + "'");
    Link stored = l;
    if (stored.id.empty()) stored.id = "L" + std::to_string(link_no);
    t.links_.push_back(stored);
    t.adjacency_[l.a].push_back({l.b, l.latency_ms});
    t.adjacency_[l.b].push_back({l.a, l.latency_ms});
  }
  for (auto& [node, adj] : t.adjacency_) std::sort(adj.begin(), adj.end());

  // control graph connectivity: controller must reach every AR, every BBU
  // domain, and the MM app (the NBI).
  auto reachable_from_controller = [&t](const NodeId& target) {
    try {
      t.control_path_latency(t.controller_, target);
      return true;
    } catch (const SimError&) {
      return false;
    }
  };
  if (!reachable_from_controller(t.mm_app_))
    throw SimError(Err::DisconnectedControlGraph, "controller cannot reach mm app '" + t.mm_app_ + "'");
  bool nbi_link = false;
  for (const auto& [next, lat] : t.neighbors(t.controller_)) {
    (void)lat;
    if (next == t.mm_app_) nbi_link = true;
  }
  if (!nbi_link)
    throw SimError(Err::DisconnectedControlGraph,
                   "controller '" + t.controller_ + "' has no direct NBI link to '" + t.mm_app_ + "'");
  for (const NodeId& ar : t.access_routers_) {
    if (!reachable_from_controller(ar))
      throw SimError(Err::DisconnectedControlGraph, "controller cannot reach ar '" + ar + "'");
  }
  for (const auto& [id, dom] : t.bbu_domains_) {
    (void)dom;
    if (!reachable_from_controller(id))
      throw SimError(Err::DisconnectedControlGraph, "controller cannot reach bbu domain '" + id + "'");
  }
  return t;
}

}  // namespace mmaas
