#include "mmaas/mmapp.hpp"

#include <algorithm>

namespace mmaas {

const char* rule_kind_name(RuleKind k) {
  switch (k) {
    case RuleKind::PlacePlanes: return "PlacePlanes";
    case RuleKind::InstallForwarding: return "InstallForwarding";
    case RuleKind::SwitchPath: return "SwitchPath";
    case RuleKind::OptimizeRoute: return "OptimizeRoute";
    case RuleKind::TransferFlow: return "TransferFlow";
    case RuleKind::AdmitFlow: return "AdmitFlow";
  }
  throw EngineAssertion("rule_kind_name: bad kind");
}

std::vector<NodeId> ars_on(const std::vector<NodeId>& path, const NetworkTopology& topo) {
  std::vector<NodeId> out;
  for (const auto& n : path)
    if (topo.has_node(n) && topo.node_kind(n) == NodeKind::AccessRouter &&
        std::find(out.begin(), out.end(), n) == out.end())
      out.push_back(n);
  return out;
}

static const CoverageEntry* best_entry(const std::vector<CoverageEntry>& coverage,
                                       std::optional<CellKind> kind, const NetworkTopology& topo) {
  const CoverageEntry* best = nullptr;
  for (const auto& e : coverage) {
    if (kind && topo.ap(e.ap).kind != *kind) continue;
    if (!best || e.rssi > best->rssi || (e.rssi == best->rssi && e.ap < best->ap)) best = &e;
  }
  return best;
}

std::vector<AttachmentSlot> place_planes(MobilityProfile profile,
                                         const std::vector<CoverageEntry>& coverage,
                                         const NetworkTopology& topo, PlacementStrategy strategy) {
  if (coverage.empty()) return {};
  const CoverageEntry* macro = best_entry(coverage, CellKind::MacroCell, topo);
  const CoverageEntry* small = best_entry(coverage, CellKind::SmallCell, topo);
  const CoverageEntry* any = best_entry(coverage, std::nullopt, topo);

  auto single = [](const CoverageEntry* e) {
    return std::vector<AttachmentSlot>{AttachmentSlot{e->ap, true, true}};
  };

  switch (strategy) {
    case PlacementStrategy::MacroOnly: return single(macro ? macro : any);
    case PlacementStrategy::SmallOnly: return single(small ? small : any);
    case PlacementStrategy::Profile: break;
  }
  switch (profile) {
    case MobilityProfile::Static: return single(any);
    case MobilityProfile::HighSpeed:
    case MobilityProfile::Vehicular: return single(macro ? macro : any);
    case MobilityProfile::Pedestrian:
      if (macro && small && macro->ap != small->ap)
        return {AttachmentSlot{macro->ap, true, false}, AttachmentSlot{small->ap, false, true}};
      return single(any);
  }
  throw EngineAssertion("place_planes: bad profile");
}

std::optional<CellKind> eligible_kind(MobilityProfile profile, PlacementStrategy strategy,
                                      bool slot_is_data, bool macro_covered, bool small_covered) {
  switch (strategy) {
    case PlacementStrategy::MacroOnly:
      return macro_covered ? std::optional(CellKind::MacroCell) : std::nullopt;
    case PlacementStrategy::SmallOnly:
      return small_covered ? std::optional(CellKind::SmallCell) : std::nullopt;
    case PlacementStrategy::Profile: break;
  }
  switch (profile) {
    case MobilityProfile::HighSpeed:
    case MobilityProfile::Vehicular:
      return macro_covered ? std::optional(CellKind::MacroCell) : std::nullopt;
    case MobilityProfile::Pedestrian:
      if (slot_is_data) return small_covered ? std::optional(CellKind::SmallCell) : std::nullopt;
      return macro_covered ? std::optional(CellKind::MacroCell) : std::nullopt;
    case MobilityProfile::Static: return std::nullopt;
  }
  throw EngineAssertion("eligible_kind: bad profile");
}

std::vector<NodeId> optimize_route(const NetworkTopology& topo, const NodeId& from_ar) {
  return topo.data_path(from_ar, topo.egress());
}

std::vector<NodeId> flow_path(const NetworkTopology& topo, Mode mode, const ApId& serving_ap) {
  const NodeId& ar = topo.ap(serving_ap).parent_ar;
  std::vector<NodeId> path{serving_ap};
  if (mode == Mode::Mmaas) {
    auto tail = topo.data_path(ar, topo.egress());
    path.insert(path.end(), tail.begin(), tail.end());
    return path;
  }
  if (!topo.anchor_gateway())
    throw SimError(Err::ValidationError, "legacy mode requires an anchor gateway");
  const NodeId& gw = *topo.anchor_gateway();
  auto head = topo.data_path(ar, gw);
  auto tail = topo.data_path(gw, topo.egress());
  path.insert(path.end(), head.begin(), head.end());
  path.insert(path.end(), tail.begin() + 1, tail.end());
  return path;
}

std::vector<NodeId> forwarding_detour(const NetworkTopology& topo, const ApId& new_ap,
                                      const NodeId& old_ar, const std::vector<NodeId>& old_path) {
  auto it = std::find(old_path.begin(), old_path.end(), old_ar);
  if (it == old_path.end())
    throw EngineAssertion("forwarding_detour: old path does not contain " + old_ar);
  const NodeId& new_ar = topo.ap(new_ap).parent_ar;
  std::vector<NodeId> path{new_ap};
  auto tunnel = topo.data_path(new_ar, old_ar);
  path.insert(path.end(), tunnel.begin(), tunnel.end());
  path.insert(path.end(), it + 1, old_path.end());
  return path;
}

static std::vector<NodeId> sorted_union(const std::vector<Rule>& rules) {
  std::set<NodeId> s;
  for (const auto& r : rules) s.insert(r.affected_ars.begin(), r.affected_ars.end());
  return {s.begin(), s.end()};
}

static std::vector<NodeId> union_of(const std::vector<NodeId>& a, const std::vector<NodeId>& b) {
  std::set<NodeId> s(a.begin(), a.end());
  s.insert(b.begin(), b.end());
  return {s.begin(), s.end()};
}

std::vector<Rule> plan_rebalance(const ApId& overloaded_ap, double theta, Mode mode,
                                 const NetworkTopology& topo, const LoadTable& loads,
                                 const std::map<FlowId, Flow>& flows,
                                 const std::map<MnId, MobileNode>& nodes) {
  if (loads.load_fraction(overloaded_ap) <= theta) return {};

  struct Entry {
    FlowId id;
    FlowDelayClass klass;
    double rate;
    const MobileNode* owner;
  };
  std::vector<Entry> movable;
  for (const auto& [fid, rate] : loads.flows_at(overloaded_ap)) {
    auto fit = flows.find(fid);
    if (fit == flows.end()) throw EngineAssertion("load table references unknown flow " + fid);
    const Flow& f = fit->second;
    if (f.state != FlowState::Active) continue;
    auto nit = nodes.find(f.mn);
    if (nit == nodes.end()) throw EngineAssertion("flow owner missing: " + f.mn);
    const MobileNode& owner = nit->second;
    if (mode == Mode::Mmaas && owner.profile == MobilityProfile::Static) continue;
    bool has_alternative = false;
    for (const auto& s : owner.slots)
      if (s.ap != overloaded_ap) has_alternative = true;
    if (!has_alternative) continue;  // single-attached: a radio trigger must move it instead
    movable.push_back({fid, f.delay_class, rate, &owner});
  }
  std::sort(movable.begin(), movable.end(), [](const Entry& a, const Entry& b) {
    bool a_dt = a.klass == FlowDelayClass::DelayTolerant;
    bool b_dt = b.klass == FlowDelayClass::DelayTolerant;
    if (a_dt != b_dt) return a_dt;
    if (a.rate != b.rate) return a.rate < b.rate;
    return a.id < b.id;
  });

  // Hypothetical loads as the plan accumulates.
  std::map<ApId, double> delta;
  auto fraction = [&](const ApId& ap) {
    return (loads.load_mbps(ap) + delta[ap]) / topo.ap(ap).capacity_mbps;
  };

  std::vector<Rule> out;
  for (const auto& e : movable) {
    if (fraction(overloaded_ap) <= theta) break;
    const ApId* target = nullptr;
    double target_frac = 0;
    for (const auto& s : e.owner->slots) {
      if (s.ap == overloaded_ap) continue;
      double f = fraction(s.ap);
      if (!target || f < target_frac || (f == target_frac && s.ap < *target)) {
        target = &s.ap;
        target_frac = f;
      }
    }
    if (!target) continue;

    Rule r;
    r.kind = RuleKind::TransferFlow;
    r.radio_affecting = true;
    r.subject = e.id;
    r.source_ap = overloaded_ap;
    r.target_ap = *target;
    const Flow& f = flows.at(e.id);
    const NodeId& old_ar = topo.ap(overloaded_ap).parent_ar;
    const NodeId& new_ar = topo.ap(*target).parent_ar;
    if (old_ar == new_ar) {
      r.new_path = f.path;
      if (!r.new_path.empty()) r.new_path.front() = *target;
    } else {
      r.new_path = flow_path(topo, mode, *target);
      r.affected_ars = union_of(ars_on(f.path, topo), ars_on(r.new_path, topo));
    }
    delta[overloaded_ap] -= e.rate;
    delta[*target] += e.rate;
    out.push_back(std::move(r));
  }
  return out;
}

static const AttachmentSlot* slot_with(const std::vector<AttachmentSlot>& slots, bool data) {
  for (const auto& s : slots)
    if ((data && s.data_plane) || (!data && s.control_plane)) return &s;
  return nullptr;
}

static Solution decide_radio(const DecideInput& in) {
  Solution sol;
  const NetworkTopology& topo = *in.topo;

  if (in.mode == Mode::Mmaas) {
    bool placement_changed = in.old_slots.size() != in.new_slots.size();
    for (std::size_t i = 0; !placement_changed && i < in.new_slots.size(); ++i)
      placement_changed = in.new_slots[i].ap != in.old_slots[i].ap;
    if (placement_changed) {
      const AttachmentSlot* cp = slot_with(in.new_slots, false);
      const AttachmentSlot* dp = slot_with(in.new_slots, true);
      if (!cp || !dp) throw EngineAssertion("placement without cp or dp slot for " + in.mn);
      if (cp->ap != dp->ap && topo.ap(cp->ap).kind != CellKind::MacroCell)
        throw EngineAssertion("split placement must anchor control on a macro cell");
      Rule r;
      r.kind = RuleKind::PlacePlanes;
      r.radio_affecting = true;
      r.subject = in.mn;
      r.cp_ap = cp->ap;
      r.dp_ap = dp->ap;
      sol.rules.push_back(std::move(r));
    }
    for (const auto& [fid, old_path] : in.old_paths) {
      const Flow& f = in.flows->at(fid);
      const NodeId& old_ar = topo.ap(in.from_ap).parent_ar;
      const NodeId& new_ar = topo.ap(in.to_ap).parent_ar;
      if (old_ar == new_ar) continue;
      if (f.delay_class == FlowDelayClass::DelaySensitive) {
        Rule fwd;
        fwd.kind = RuleKind::InstallForwarding;
        fwd.subject = fid;
        fwd.from_ar = old_ar;
        fwd.to_ar = new_ar;
        fwd.new_path = forwarding_detour(topo, in.to_ap, old_ar, old_path);
        fwd.affected_ars = ars_on(fwd.new_path, topo);

        Rule opt;
        opt.kind = RuleKind::OptimizeRoute;
        opt.subject = fid;
        opt.activate_delay_ms = in.params->opt_delay_ms;
        opt.new_path = flow_path(topo, in.mode, in.to_ap);
        opt.affected_ars = union_of(ars_on(fwd.new_path, topo), ars_on(opt.new_path, topo));
        sol.rules.push_back(std::move(fwd));
        sol.rules.push_back(std::move(opt));
      } else {
        Rule sw;
        sw.kind = RuleKind::SwitchPath;
        sw.subject = fid;
        sw.new_path = flow_path(topo, in.mode, in.to_ap);
        sw.affected_ars = union_of(ars_on(old_path, topo), ars_on(sw.new_path, topo));
        sol.rules.push_back(std::move(sw));
      }
    }
  } else if (in.old_paths.empty()) {
    // Baseline handover with no flows in flight: a bare plane move, nothing
    // to re-path.
    const AttachmentSlot* cp = slot_with(in.new_slots, false);
    const AttachmentSlot* dp = slot_with(in.new_slots, true);
    if (!cp || !dp) throw EngineAssertion("placement without cp or dp slot for " + in.mn);
    Rule r;
    r.kind = RuleKind::PlacePlanes;
    r.radio_affecting = true;
    r.subject = in.mn;
    r.cp_ap = cp->ap;
    r.dp_ap = dp->ap;
    sol.rules.push_back(std::move(r));
  } else {
    // The centralized baseline re-anchors the whole MN in one decision.
    Rule r;
    r.kind = RuleKind::SwitchPath;
    r.radio_affecting = true;
    r.subject = in.mn;
    r.new_path = flow_path(topo, in.mode, in.to_ap);
    std::vector<NodeId> affected = ars_on(r.new_path, topo);
    for (const auto& [fid, old_path] : in.old_paths) {
      r.flows.push_back(fid);
      affected = union_of(affected, ars_on(old_path, topo));
    }
    r.affected_ars = std::move(affected);
    sol.rules.push_back(std::move(r));
  }
  return sol;
}

static Solution decide_new_flow(const DecideInput& in) {
  const MobileNode& mn = in.nodes->at(in.mn);
  const AttachmentSlot* dp = mn.data_slot();
  if (!dp) throw SimError(Err::NoAttachment, in.mn + " has no data-plane attachment");
  Solution sol;
  Rule r;
  r.kind = RuleKind::AdmitFlow;
  r.radio_affecting = true;
  r.subject = in.new_flow;
  r.target_ap = dp->ap;
  r.from_ar = in.topo->ap(dp->ap).parent_ar;
  r.new_path = flow_path(*in.topo, in.mode, dp->ap);
  r.affected_ars = ars_on(r.new_path, *in.topo);
  sol.rules.push_back(std::move(r));
  return sol;
}

Solution decide(const DecideInput& in) {
  Solution sol;
  switch (in.reason) {
    case TriggerReason::RadioSignal:
    case TriggerReason::RadioCoverage: sol = decide_radio(in); break;
    case TriggerReason::NewFlowPlacement: sol = decide_new_flow(in); break;
    case TriggerReason::LoadDriven:
      sol.rules = plan_rebalance(in.overloaded_ap, in.params->theta, in.mode, *in.topo, *in.loads,
                                 *in.flows, *in.nodes);
      break;
  }
  sol.install_targets = sorted_union(sol.rules);
  bool radio = false;
  for (const auto& r : sol.rules) radio = radio || r.radio_affecting;
  if (radio) {
    ApId anchor_ap;
    if (is_radio_reason(in.reason)) anchor_ap = in.to_ap;
    else if (in.reason == TriggerReason::LoadDriven) anchor_ap = in.overloaded_ap;
    else anchor_ap = sol.rules.front().target_ap;
    sol.resource_target = in.topo->access_network_node(anchor_ap);
  }
  return sol;
}

}  // namespace mmaas
