#include "mmaas/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <map>
#include <set>

#include "mmaas/engine.hpp"
#include "mmaas/mmapp.hpp"
#include "mmaas/protocol.hpp"
#include "mmaas/resources.hpp"

namespace mmaas {

const char* msg_kind_name(MsgKind k) {
  switch (k) {
    case MsgKind::ParamEnquiry: return "ParamEnquiry";
    case MsgKind::ParamReport: return "ParamReport";
    case MsgKind::ContextRequest: return "ContextRequest";
    case MsgKind::MMSolution: return "MMSolution";
    case MsgKind::RuleInstall: return "RuleInstall";
    case MsgKind::ResourceAllocRules: return "ResourceAllocRules";
  }
  throw EngineAssertion("msg_kind_name: bad kind");
}

const char* tx_phase_name(TxPhase p) {
  switch (p) {
    case TxPhase::Enquiry: return "Enquiry";
    case TxPhase::AwaitReport: return "AwaitReport";
    case TxPhase::Processing: return "Processing";
    case TxPhase::Installing: return "Installing";
    case TxPhase::Done: return "Done";
  }
  throw EngineAssertion("tx_phase_name: bad phase");
}

namespace {

std::string fmt_ms(double t) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.3f", t);
  return buf;
}

std::string fmt_frac(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string join(const std::vector<NodeId>& path, char sep) {
  std::string out;
  for (const auto& n : path) {
    if (!out.empty()) out += sep;
    out += n;
  }
  return out;
}

class Sim {
 public:
  Sim(const Scenario& s, Mode mode)
      : scenario_(s), params_(s.params), mode_(mode), topo_(build_topology(s.topology)),
        loads_(&topo_) {}

  RunOutput execute();

 private:
  // --- static run inputs
  const Scenario& scenario_;
  SimParams params_;
  Mode mode_;
  NetworkTopology topo_;

  // --- mutable world state
  EventQueue q_;
  std::map<MnId, MobileNode> nodes_;
  std::map<FlowId, Flow> flows_;
  LoadTable loads_;
  ComputeLedger ledger_;
  std::map<int, Transaction> txs_;
  int next_tx_id_ = 1;
  std::set<ApId> load_tx_open_;
  std::map<MnId, std::deque<FlowId>> pending_flows_;
  std::map<MnId, std::set<NodeId>> prev_ars_;

  // --- logs and counters
  std::vector<std::string> msg_rows_, rule_rows_, load_rows_;
  std::map<std::string, int> msg_counts_;
  int messages_total_ = 0;
  std::map<std::string, int> tx_by_reason_;
  std::vector<double> tx_latencies_;
  int handovers_intra_ = 0, handovers_inter_ = 0, local_handovers_ = 0;
  int decisions_ = 0, fallbacks_ = 0;
  double residual_overload_ms_ = 0;
  long paths_total_ = 0, paths_via_anchor_ = 0;

  // --- plumbing
  double latency(const NodeId& a, const NodeId& b) const {
    return topo_.control_path_latency(a, b);
  }
  void log_msg(double t, int tx, MsgKind kind, const NodeId& src, const NodeId& dst) {
    msg_rows_.push_back(fmt_ms(t) + "," + std::to_string(tx) + "," + msg_kind_name(kind) + "," +
                        src + "," + dst);
    ++msg_counts_[msg_kind_name(kind)];
    ++messages_total_;
  }
  void log_rule(double t, const std::string& tx, const std::string& kind,
                const std::string& subject, const std::string& detail) {
    rule_rows_.push_back(fmt_ms(t) + "," + tx + "," + kind + "," + subject + "," + detail);
  }
  // Schedules the delivery of one signaling message: the row is logged when it
  // lands, never when it is sent.
  double send(double t_send, int tx, MsgKind kind, const NodeId& src, const NodeId& dst) {
    double t_arrive = t_send + latency(src, dst);
    q_.schedule(t_arrive, std::string("deliver:") + msg_kind_name(kind),
                [this, t_arrive, tx, kind, src, dst] { log_msg(t_arrive, tx, kind, src, dst); });
    return t_arrive;
  }

  // Counts a path version toward the anchor-gateway fraction. Every observed
  // version also lands in the rule log (FlowStart, AdmitFlow, or a flow rule
  // carrying path=), so the fraction is recomputable from logs alone; pure
  // AP-prefix swaps keep the graph tail and are not counted.
  void observe_path(const std::vector<NodeId>& path) {
    ++paths_total_;
    if (topo_.anchor_gateway() &&
        std::find(path.begin(), path.end(), *topo_.anchor_gateway()) != path.end())
      ++paths_via_anchor_;
  }

  // Points the flow at a new path, keeping the load table on the serving AP.
  void apply_path(Flow& f, const std::vector<NodeId>& new_path) {
    if (new_path.empty()) throw EngineAssertion("empty path for flow " + f.id);
    const ApId& new_ap = new_path.front();
    if (f.state != FlowState::Pending && new_ap != f.serving_ap)
      loads_.move_flow(f.serving_ap, new_ap, f.id);
    f.serving_ap = new_ap;
    f.path = new_path;
    f.path_latency_ms = topo_.path_latency(new_path);
    observe_path(new_path);
  }

  MobileNode& node(const MnId& id) {
    auto it = nodes_.find(id);
    if (it == nodes_.end()) throw EngineAssertion("unknown mn " + id);
    return it->second;
  }
  Flow& flow(const FlowId& id) {
    auto it = flows_.find(id);
    if (it == flows_.end()) throw EngineAssertion("unknown flow " + id);
    return it->second;
  }

  const PolicyVector& policy_of(const NodeSpec& spec) const {
    static const PolicyVector fallback = default_policy();
    if (spec.policy_id.empty()) return fallback;
    return scenario_.policies.at(spec.policy_id);
  }

  std::vector<CandidateRecord> candidate_records(const std::vector<CoverageEntry>& coverage) {
    std::vector<CandidateRecord> out;
    for (const auto& e : coverage) {
      const AccessPoint& ap = topo_.ap(e.ap);
      CandidateRecord c;
      c.ap = e.ap;
      c.rat = ap.rat;
      c.values[static_cast<int>(PolicyAxis::Rssi)] = e.rssi;
      c.values[static_cast<int>(PolicyAxis::Load)] = loads_.load_fraction(e.ap);
      c.values[static_cast<int>(PolicyAxis::Latency)] =
          topo_.path_latency(topo_.data_path(ap.parent_ar, topo_.egress()));
      c.values[static_cast<int>(PolicyAxis::OperatorPreference)] = ap.operator_preference;
      c.values[static_cast<int>(PolicyAxis::Cost)] = ap.cost;
      out.push_back(std::move(c));
    }
    return out;
  }

  // --- setup
  void init_nodes();
  void init_flows();
  std::vector<AttachmentSlot> initial_slots(const NodeSpec& spec, const MobileNode& mn);

  // --- periodic events
  void tick(double t);
  void sample(double t);

  // --- trigger handling
  void detect_for(MobileNode& mn, double t);
  bool rat_allowed(const PolicyVector& p, const ApId& ap) const {
    const std::string& rat = topo_.ap(ap).rat;
    if (p.forbidden_rats.count(rat)) return false;
    if (!p.required_rats.empty() && !p.required_rats.count(rat)) return false;
    return true;
  }
  void handle_trigger(const Trigger& tr, double t);
  void local_handover(const Trigger& tr, double t);
  void start_transaction(const Trigger& tr, double t);
  void run_decision(int tx_id, double t_decide, double t_install_send);
  void complete_transaction(int tx_id, double t);
  void apply_rule(const Transaction& tx, const Rule& r, double t);
  void flow_arrival(const FlowId& id, double t);
  void flow_end(const FlowId& id, double t);

  MetricsReport build_report();
};

std::vector<AttachmentSlot> Sim::initial_slots(const NodeSpec& spec, const MobileNode& mn) {
  if (!spec.attach.empty()) {
    std::vector<AttachmentSlot> slots;
    for (std::size_t i = 0; i < spec.attach.size(); ++i)
      slots.push_back({spec.attach[i], i == 0, true});
    return slots;
  }
  std::vector<CoverageEntry> coverage = topo_.coverage_at(mn.position);
  if (coverage.empty()) return {};

  if (mode_ == Mode::Legacy) {
    // The baseline attaches to the single strongest cell, no policy logic.
    const CoverageEntry* best = nullptr;
    for (const auto& e : coverage)
      if (!best || e.rssi > best->rssi || (e.rssi == best->rssi && e.ap < best->ap)) best = &e;
    return {{best->ap, true, true}};
  }

  std::vector<AttachmentSlot> slots = place_planes(mn.profile, coverage, topo_, params_.placement);

  // The selection scheme picks the data-plane cell among kind-eligible,
  // policy-admissible candidates; plane placement supplies the control anchor.
  bool macro_cov = false, small_cov = false;
  for (const auto& e : coverage) {
    if (topo_.ap(e.ap).kind == CellKind::MacroCell) macro_cov = true;
    else small_cov = true;
  }
  auto kind = eligible_kind(mn.profile, params_.placement, true, macro_cov, small_cov);
  std::vector<CoverageEntry> eligible;
  for (const auto& e : coverage) {
    if (kind && topo_.ap(e.ap).kind != *kind) continue;
    if (!rat_allowed(mn.policy, e.ap)) continue;
    eligible.push_back(e);
  }
  if (eligible.empty()) return slots;

  std::vector<ApId> chosen;
  try {
    if (params_.selection == SelectionScheme::Negotiated) {
      NegotiatedSelection pick = select_negotiated(mn.policy, scenario_.network_policy,
                                                   candidate_records(eligible),
                                                   params_.negotiated_m);
      if (pick.fallback) ++fallbacks_;
      chosen = {pick.ap};
    } else {
      chosen = select_mmt_driven(mn.policy, candidate_records(eligible), params_.attach_k);
    }
  } catch (const SimError& e) {
    if (e.code() != Err::AllCandidatesFiltered) throw;
    return slots;  // policy excludes everything: keep placement as-is
  }

  for (auto& s : slots)
    if (s.data_plane) s.ap = chosen.front();
  // Deduplicate a split placement that collapsed onto one cell.
  if (slots.size() == 2 && slots[0].ap == slots[1].ap)
    slots = {AttachmentSlot{slots[0].ap, true, true}};
  for (std::size_t i = 1; i < chosen.size(); ++i) {
    bool already = false;
    for (const auto& s : slots) already = already || s.ap == chosen[i];
    if (!already) slots.push_back({chosen[i], false, true});
  }
  return slots;
}

void Sim::init_nodes() {
  for (const auto& spec : scenario_.nodes) {
    MobileNode mn;
    mn.id = spec.id;
    mn.device = spec.device;
    mn.speed_kmh = spec.speed_kmh;
    mn.position = spec.pos;
    mn.waypoints = spec.waypoints;
    mn.policy = policy_of(spec);
    mn.profile = classify_profile(spec.device, spec.speed_kmh, params_.highspeed_kmh);
    for (const auto& e : topo_.coverage_at(mn.position)) mn.in_coverage.insert(e.ap);
    mn.slots = initial_slots(spec, mn);
    nodes_.emplace(mn.id, std::move(mn));
  }
  if (mode_ == Mode::Legacy) {
    for (auto& [id, mn] : nodes_) {
      open_instance(ledger_, mode_, mn.profile, id, 0);
      log_rule(0, "-", "InstanceOpen", id, "");
    }
  }
}

void Sim::init_flows() {
  for (const auto& spec : scenario_.flows) {
    Flow f;
    f.id = spec.id;
    f.mn = spec.mn;
    f.delay_class = spec.delay_class;
    f.rate_mbps = spec.rate_mbps;
    f.birth_ms = spec.birth_ms;
    f.end_ms = spec.end_ms;
    flows_.emplace(f.id, std::move(f));
    node(spec.mn).flow_ids.push_back(spec.id);
  }
  for (auto& [id, f] : flows_) {
    if (f.birth_ms == 0) {
      MobileNode& mn = node(f.mn);
      const AttachmentSlot* dp = mn.data_slot();
      if (!dp) throw SimError(Err::NoAttachment, f.mn + " has flows but no attachment");
      f.state = FlowState::Active;
      f.serving_ap = dp->ap;
      f.path = flow_path(topo_, mode_, dp->ap);
      f.path_latency_ms = topo_.path_latency(f.path);
      loads_.add_flow(dp->ap, f.id, f.rate_mbps);
      log_rule(0, "-", "FlowStart", f.id, "path=" + join(f.path, '|'));
      observe_path(f.path);
    } else {
      FlowId fid = id;
      q_.schedule(f.birth_ms, "flow_arrival:" + fid,
                  [this, fid] { flow_arrival(fid, q_.now()); });
    }
    if (f.end_ms && *f.end_ms <= params_.horizon_ms) {
      FlowId fid = id;
      q_.schedule(*f.end_ms, "flow_end:" + fid, [this, fid] { flow_end(fid, q_.now()); });
    }
  }
}

void Sim::tick(double t) {
  for (auto& [id, mn] : nodes_) {
    if (mn.profile == MobilityProfile::Static) continue;
    if (mn.speed_kmh <= 0 || mn.waypoints.empty()) continue;
    advance(mn, params_.move_tick_ms);
    update_coverage(mn, topo_);
    if (mn.transaction_open) continue;
    detect_for(mn, t);
  }
  double next = t + params_.move_tick_ms;
  if (next <= params_.horizon_ms)
    q_.schedule(next, "tick", [this, next] { tick(next); });
}

void Sim::detect_for(MobileNode& mn, double t) {
  if (mn.slots.empty() || mn.profile == MobilityProfile::Static) return;
  std::vector<CoverageEntry> coverage = topo_.coverage_at(mn.position);
  bool macro_cov = false, small_cov = false;
  for (const auto& e : coverage) {
    if (topo_.ap(e.ap).kind == CellKind::MacroCell) macro_cov = true;
    else small_cov = true;
  }

  // Weakest attachment first: a coverage-lost slot outranks any signal upgrade.
  std::vector<std::pair<double, const AttachmentSlot*>> order;
  for (const auto& slot : mn.slots) {
    double rssi = -std::numeric_limits<double>::infinity();
    for (const auto& e : coverage)
      if (e.ap == slot.ap) rssi = e.rssi;
    order.emplace_back(rssi, &slot);
  }
  std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    return a.second->ap < b.second->ap;
  });

  for (const auto& [slot_rssi, slot_ptr] : order) {
    const AttachmentSlot& slot = *slot_ptr;
    std::optional<double> serving_rssi;
    if (slot_rssi != -std::numeric_limits<double>::infinity()) serving_rssi = slot_rssi;

    auto kind = eligible_kind(mn.profile, params_.placement, slot.data_plane, macro_cov, small_cov);
    std::vector<CoverageEntry> candidates;
    for (const auto& e : coverage) {
      if (mn.attached_to(e.ap)) continue;
      if (kind && topo_.ap(e.ap).kind != *kind) continue;
      if (!rat_allowed(mn.policy, e.ap)) continue;
      candidates.push_back(e);
    }
    auto trig = detect_trigger(mn.id, slot.ap, serving_rssi, candidates, params_.hysteresis_db);
    if (trig) {
      handle_trigger(*trig, t);
      return;  // one handover per node per tick; the rest follow next tick
    }
  }
}

void Sim::handle_trigger(const Trigger& tr, double t) {
  if (is_radio_reason(tr.reason)) {
    bool intra = !topo_.is_inter_domain(tr.from, tr.to);
    if (intra) ++handovers_intra_;
    else ++handovers_inter_;
    if (mode_ == Mode::Mmaas && intra) {
      local_handover(tr, t);
      return;
    }
  }
  start_transaction(tr, t);
}

void Sim::local_handover(const Trigger& tr, double t) {
  MobileNode& mn = node(tr.mn);
  mn.transaction_open = true;
  for (auto& s : mn.slots)
    if (s.ap == tr.from) s.ap = tr.to;
  double done = t + params_.local_handover_ms;
  q_.schedule(done, "local_handover:" + tr.mn, [this, tr, done] {
    MobileNode& mn = node(tr.mn);
    for (const auto& fid : mn.flow_ids) {
      Flow& f = flow(fid);
      if (f.state != FlowState::Active || f.serving_ap != tr.from) continue;
      loads_.move_flow(tr.from, tr.to, fid);
      f.serving_ap = tr.to;
      if (!f.path.empty()) f.path.front() = tr.to;  // same AR, path tail preserved
    }
    ++local_handovers_;
    log_rule(done, "-", "LocalHandover", tr.mn,
             "from=" + tr.from + " to=" + tr.to + " latency_ms=" + fmt_ms(params_.local_handover_ms));
    mn.transaction_open = false;
    detect_for(mn, done);
  });
}

void Sim::start_transaction(const Trigger& tr, double t) {
  Transaction tx;
  tx.id = next_tx_id_++;
  tx.trigger = tr;
  tx.started_ms = t;
  tx.phase = TxPhase::Enquiry;

  NodeId serving_ar;
  if (is_radio_reason(tr.reason)) {
    MobileNode& mn = node(tr.mn);
    mn.transaction_open = true;
    tx.old_slots = mn.slots;
    tx.old_data_ap = mn.data_slot() ? mn.data_slot()->ap : ApId{};
    tx.radio_break_ms = t;
    // Break-before-make: the radio moves now, the data plane catches up at
    // rule-install time.
    for (auto& s : mn.slots)
      if (s.ap == tr.from) s.ap = tr.to;
    tx.new_slots = mn.slots;
    tx.new_data_ap = mn.data_slot() ? mn.data_slot()->ap : ApId{};
    for (const auto& fid : mn.flow_ids) {
      Flow& f = flow(fid);
      if (f.state != FlowState::Active) continue;
      bool affected = mode_ == Mode::Legacy || f.serving_ap == tr.from;
      if (affected) f.state = FlowState::Transferring;
    }
    const NodeId& old_ar = topo_.ap(tr.from).parent_ar;
    const NodeId& new_ar = topo_.ap(tr.to).parent_ar;
    if (old_ar != new_ar) prev_ars_[tr.mn].insert(old_ar);
    serving_ar = old_ar;
    if (mode_ == Mode::Mmaas && !ledger_.is_open(tr.mn)) {
      open_instance(ledger_, mode_, mn.profile, tr.mn, t);
      tx.instance_mns.push_back(tr.mn);
      log_rule(t, std::to_string(tx.id), "InstanceOpen", tr.mn, "");
    }
  } else if (tr.reason == TriggerReason::NewFlowPlacement) {
    MobileNode& mn = node(tr.mn);
    mn.transaction_open = true;
    serving_ar = topo_.ap(mn.data_slot()->ap).parent_ar;
    if (mode_ == Mode::Mmaas && mn.profile != MobilityProfile::Static && !ledger_.is_open(tr.mn)) {
      open_instance(ledger_, mode_, mn.profile, tr.mn, t);
      tx.instance_mns.push_back(tr.mn);
      log_rule(t, std::to_string(tx.id), "InstanceOpen", tr.mn, "");
    }
  } else {  // LoadDriven
    load_tx_open_.insert(tr.entity);
    serving_ar = topo_.ap(tr.entity).parent_ar;
  }

  const NodeId& c = topo_.controller();
  int id = tx.id;
  double d1 = send(t, id, MsgKind::ParamEnquiry, c, serving_ar);
  tx.phase = TxPhase::AwaitReport;
  double d2 = send(d1 + params_.proc_ar_ms, id, MsgKind::ParamReport, serving_ar, c);

  double t_decide, t_install_send;
  if (mode_ == Mode::Mmaas) {
    double d3 = send(d2 + params_.proc_controller_ms, id, MsgKind::ContextRequest, c, topo_.mm_app());
    t_decide = d3 + params_.proc_mmapp_ms;
    double d4 = send(t_decide, id, MsgKind::MMSolution, topo_.mm_app(), c);
    t_install_send = d4 + params_.proc_controller_ms;
  } else {
    // Decision point co-located with the controller: no NBI messages, both
    // processing stages still apply.
    t_decide = d2 + params_.proc_controller_ms + params_.proc_mmapp_ms;
    t_install_send = t_decide;
  }
  txs_.emplace(id, std::move(tx));
  q_.schedule(t_decide, "decide:" + std::to_string(id), [this, id, t_decide, t_install_send] {
    run_decision(id, t_decide, t_install_send);
  });
}

void Sim::run_decision(int tx_id, double t_decide, double t_install_send) {
  Transaction& tx = txs_.at(tx_id);
  if (tx.phase != TxPhase::AwaitReport)
    throw EngineAssertion("decision out of order for tx " + std::to_string(tx_id));
  tx.phase = TxPhase::Processing;

  DecideInput in;
  in.topo = &topo_;
  in.params = &params_;
  in.mode = mode_;
  in.reason = tx.trigger.reason;
  in.mn = tx.trigger.mn;
  in.from_ap = tx.trigger.from;
  in.to_ap = tx.trigger.to;
  in.overloaded_ap = tx.trigger.entity;
  in.new_flow = tx.trigger.flow;
  in.old_slots = tx.old_slots;
  in.new_slots = tx.new_slots;
  if (is_radio_reason(tx.trigger.reason)) {
    const MobileNode& mn = node(tx.trigger.mn);
    for (const auto& fid : mn.flow_ids) {
      const Flow& f = flows_.at(fid);
      if (f.state == FlowState::Transferring) in.old_paths[fid] = f.path;
    }
  }
  in.nodes = &nodes_;
  in.flows = &flows_;
  in.loads = &loads_;

  tx.solution = decide(in);
  ++decisions_;
  tx.phase = TxPhase::Installing;

  // Load-driven instances belong to the owners of the flows being moved.
  if (mode_ == Mode::Mmaas && tx.trigger.reason == TriggerReason::LoadDriven) {
    for (const auto& r : tx.solution.rules) {
      const MnId& owner = flows_.at(r.subject).mn;
      if (!ledger_.is_open(owner)) {
        open_instance(ledger_, mode_, nodes_.at(owner).profile, owner, t_decide);
        tx.instance_mns.push_back(owner);
        log_rule(t_decide, std::to_string(tx_id), "InstanceOpen", owner, "");
      }
    }
  }

  const NodeId& c = topo_.controller();
  double completion = t_install_send;
  std::map<NodeId, double> install_at;
  for (const auto& ar : tx.solution.install_targets) {
    double d = send(t_install_send, tx_id, MsgKind::RuleInstall, c, ar);
    install_at[ar] = d;
    completion = std::max(completion, d);
  }
  double resource_at = 0;
  if (tx.solution.resource_target) {
    resource_at = send(t_install_send, tx_id, MsgKind::ResourceAllocRules, c,
                       *tx.solution.resource_target);
    completion = std::max(completion, resource_at);
  }

  for (std::size_t i = 0; i < tx.solution.rules.size(); ++i) {
    const Rule& r = tx.solution.rules[i];
    double t_act = r.affected_ars.empty() ? (tx.solution.resource_target ? resource_at
                                                                         : t_install_send)
                                          : 0;
    for (const auto& ar : r.affected_ars) t_act = std::max(t_act, install_at.at(ar));
    if (r.kind == RuleKind::OptimizeRoute) t_act += r.activate_delay_ms;
    std::size_t idx = i;
    q_.schedule(t_act, "rule:" + std::string(rule_kind_name(r.kind)),
                [this, tx_id, idx, t_act] {
                  const Transaction& tx = txs_.at(tx_id);
                  apply_rule(tx, tx.solution.rules[idx], t_act);
                });
  }

  q_.schedule(completion, "tx_complete:" + std::to_string(tx_id),
              [this, tx_id] { complete_transaction(tx_id, q_.now()); });
}

void Sim::apply_rule(const Transaction& tx, const Rule& r, double t) {
  std::string tx_id = std::to_string(tx.id);
  switch (r.kind) {
    case RuleKind::PlacePlanes:
      log_rule(t, tx_id, rule_kind_name(r.kind), r.subject, "cp=" + r.cp_ap + " dp=" + r.dp_ap);
      break;
    case RuleKind::InstallForwarding: {
      Flow& f = flow(r.subject);
      if (f.state == FlowState::Closed) break;
      apply_path(f, r.new_path);
      f.state = FlowState::Active;
      log_rule(t, tx_id, rule_kind_name(r.kind), r.subject,
               "from=" + r.from_ar + " to=" + r.to_ar + " path=" + join(r.new_path, '|'));
      break;
    }
    case RuleKind::OptimizeRoute: {
      Flow& f = flow(r.subject);
      if (f.state == FlowState::Closed) break;
      apply_path(f, r.new_path);
      log_rule(t, tx_id, rule_kind_name(r.kind), r.subject, "path=" + join(r.new_path, '|'));
      break;
    }
    case RuleKind::SwitchPath: {
      if (r.flows.empty()) {
        Flow& f = flow(r.subject);
        if (f.state == FlowState::Closed) break;
        double disruption = t - tx.radio_break_ms;
        f.disruption_ms += disruption;
        ++f.switches;
        apply_path(f, r.new_path);
        f.state = FlowState::Active;
        log_rule(t, tx_id, rule_kind_name(r.kind), r.subject,
                 "path=" + join(r.new_path, '|') + " disruption_ms=" + fmt_ms(disruption));
      } else {
        // Per-MN switch: every flow of the node re-anchors in one decision.
        double disruption = t - tx.radio_break_ms;
        for (const auto& fid : r.flows) {
          Flow& f = flow(fid);
          if (f.state == FlowState::Closed) continue;
          f.disruption_ms += disruption;
          ++f.switches;
          apply_path(f, flow_path(topo_, mode_, tx.trigger.to));
          f.state = FlowState::Active;
        }
        log_rule(t, tx_id, rule_kind_name(r.kind), r.subject,
                 "flows=" + join(r.flows, '+') + " path=" + join(r.new_path, '|') +
                     " disruption_ms=" + fmt_ms(disruption));
      }
      break;
    }
    case RuleKind::TransferFlow: {
      Flow& f = flow(r.subject);
      if (f.state == FlowState::Closed) break;
      apply_path(f, r.new_path);
      log_rule(t, tx_id, rule_kind_name(r.kind), r.subject,
               "from=" + r.source_ap + " to=" + r.target_ap + " path=" + join(r.new_path, '|'));
      break;
    }
    case RuleKind::AdmitFlow: {
      Flow& f = flow(r.subject);
      if (f.state == FlowState::Closed) break;
      f.state = FlowState::Active;
      f.serving_ap = r.new_path.front();
      f.path = r.new_path;
      f.path_latency_ms = topo_.path_latency(f.path);
      loads_.add_flow(f.serving_ap, f.id, f.rate_mbps);
      observe_path(f.path);
      log_rule(t, tx_id, rule_kind_name(r.kind), r.subject,
               "ar=" + r.from_ar + " path=" + join(r.new_path, '|'));
      break;
    }
  }
}

void Sim::complete_transaction(int tx_id, double t) {
  Transaction& tx = txs_.at(tx_id);
  if (tx.phase != TxPhase::Installing)
    throw EngineAssertion("completion out of order for tx " + std::to_string(tx_id));
  tx.phase = TxPhase::Done;
  tx.completed_ms = t;
  tx_latencies_.push_back(t - tx.started_ms);
  log_rule(t, std::to_string(tx_id), "TxComplete",
           tx.trigger.mn.empty() ? tx.trigger.entity : tx.trigger.mn,
           std::string("reason=") + trigger_reason_name(tx.trigger.reason) +
               " started_ms=" + fmt_ms(tx.started_ms) +
               " duration_ms=" + fmt_ms(t - tx.started_ms));

  if (is_radio_reason(tx.trigger.reason)) {
    MobileNode& mn = node(tx.trigger.mn);
    // Flows the decision left alone (same-AR moves) follow the radio now.
    for (const auto& fid : mn.flow_ids) {
      Flow& f = flow(fid);
      if (f.state != FlowState::Transferring) continue;
      if (f.serving_ap == tx.trigger.from) {
        loads_.move_flow(tx.trigger.from, tx.trigger.to, fid);
        f.serving_ap = tx.trigger.to;
        if (!f.path.empty()) f.path.front() = tx.trigger.to;
      }
      f.state = FlowState::Active;
    }
  }

  for (const auto& owner : tx.instance_mns) {
    ledger_.close(owner, t, params_.linger_ms);
    log_rule(t, std::to_string(tx_id), "InstanceClose", owner,
             "linger_until=" + fmt_ms(t + params_.linger_ms));
  }
  if (tx.trigger.reason == TriggerReason::LoadDriven) load_tx_open_.erase(tx.trigger.entity);
  ++tx_by_reason_[trigger_reason_name(tx.trigger.reason)];

  if (!tx.trigger.mn.empty()) {
    MobileNode& mn = node(tx.trigger.mn);
    mn.transaction_open = false;
    auto pend = pending_flows_.find(mn.id);
    if (pend != pending_flows_.end() && !pend->second.empty()) {
      FlowId fid = pend->second.front();
      pend->second.pop_front();
      flow_arrival(fid, t);
      return;
    }
    detect_for(mn, t);
  }
}

void Sim::flow_arrival(const FlowId& id, double t) {
  Flow& f = flow(id);
  MobileNode& mn = node(f.mn);
  if (mn.transaction_open) {
    pending_flows_[mn.id].push_back(id);
    return;
  }
  if (!mn.data_slot()) throw SimError(Err::NoAttachment, f.mn + " has no attachment for " + id);
  Trigger tr;
  tr.reason = TriggerReason::NewFlowPlacement;
  tr.mn = f.mn;
  tr.flow = id;
  start_transaction(tr, t);
}

void Sim::flow_end(const FlowId& id, double t) {
  Flow& f = flow(id);
  if (f.state == FlowState::Pending) {
    f.state = FlowState::Closed;
    return;
  }
  if (f.state == FlowState::Closed) return;
  loads_.remove_flow(f.serving_ap, id);
  f.state = FlowState::Closed;
  log_rule(t, "-", "FlowEnd", id, "");
}

void Sim::sample(double t) {
  std::vector<ApId> over;
  for (const auto& [id, ap] : topo_.aps()) {
    double frac = loads_.load_fraction(id);
    load_rows_.push_back(fmt_ms(t) + "," + id + "," + fmt_frac(frac));
    if (frac > params_.theta) over.push_back(id);
  }
  for (const auto& ar : topo_.access_routers()) {
    double mbps = 0, cap = 0;
    for (const auto& [id, ap] : topo_.aps())
      if (ap.parent_ar == ar) {
        mbps += loads_.load_mbps(id);
        cap += ap.capacity_mbps;
      }
    load_rows_.push_back(fmt_ms(t) + "," + ar + "," + fmt_frac(cap > 0 ? mbps / cap : 0));
  }
  if (!over.empty() && t < params_.horizon_ms)
    residual_overload_ms_ += std::min(params_.sample_period_ms, params_.horizon_ms - t);

  if (mode_ == Mode::Mmaas) {
    for (const auto& ap : over) {
      if (load_tx_open_.count(ap)) continue;
      Trigger tr;
      tr.reason = TriggerReason::LoadDriven;
      tr.entity = ap;
      start_transaction(tr, t);
    }
  }
  double next = t + params_.sample_period_ms;
  if (next <= params_.horizon_ms)
    q_.schedule(next, "sample", [this, next] { sample(next); });
}

MetricsReport Sim::build_report() {
  MetricsReport r;
  r.scenario_hash = scenario_.hash_hex;
  r.mode = mode_name(mode_);
  r.seed = params_.seed;
  r.horizon_ms = params_.horizon_ms;
  r.messages_total = messages_total_;
  r.messages_by_kind = msg_counts_;
  r.transactions_total = static_cast<int>(tx_latencies_.size());
  r.transactions_by_reason = tx_by_reason_;
  if (!tx_latencies_.empty()) {
    std::vector<double> sorted = tx_latencies_;
    std::sort(sorted.begin(), sorted.end());
    double sum = 0;
    for (double v : sorted) sum += v;
    r.cp_latency_mean_ms = sum / sorted.size();
    std::size_t rank = static_cast<std::size_t>(std::ceil(0.95 * sorted.size()));
    r.cp_latency_p95_ms = sorted[rank - 1];
  }
  r.handovers_intra = handovers_intra_;
  r.handovers_inter = handovers_inter_;
  r.local_handovers = local_handovers_;
  for (const auto& [id, f] : flows_) {
    FlowReport fr;
    fr.disruption_ms = f.disruption_ms;
    fr.switches = f.switches;
    fr.final_path = f.path;
    r.flows[id] = std::move(fr);
    r.total_disruption_ms += f.disruption_ms;
  }
  for (const auto& [id, mn] : nodes_)
    r.instance_ms[id] = ledger_.instance_ms(id, params_.horizon_ms);
  r.instance_total_ms = ledger_.total_instance_ms(params_.horizon_ms);
  r.residual_overload_ms = residual_overload_ms_;
  r.selection_fallbacks = fallbacks_;
  r.decisions = decisions_;
  r.anchor_path_fraction =
      paths_total_ ? static_cast<double>(paths_via_anchor_) / paths_total_ : 0.0;
  return r;
}

RunOutput Sim::execute() {
  if (mode_ == Mode::Legacy && !topo_.anchor_gateway())
    throw SimError(Err::ValidationError, "legacy mode requires an anchor gateway in the topology");

  init_nodes();
  init_flows();
  q_.schedule(0, "sample", [this] { sample(0); });
  if (params_.move_tick_ms <= params_.horizon_ms)
    q_.schedule(params_.move_tick_ms, "tick",
                [this] { tick(params_.move_tick_ms); });
  q_.run_until(params_.horizon_ms);

  if (mode_ == Mode::Legacy) {
    for (auto& [id, mn] : nodes_) {
      ledger_.close(id, params_.horizon_ms, 0);
      log_rule(params_.horizon_ms, "-", "InstanceClose", id, "");
    }
  }

  RunOutput out;
  out.report = build_report();
  std::string msg = "time_ms,tx_id,kind,src,dst\n";
  for (const auto& row : msg_rows_) msg += row + "\n";
  std::string rule = "time_ms,tx_id,rule_kind,subject_id,detail\n";
  for (const auto& row : rule_rows_) rule += row + "\n";
  std::string load = "time_ms,entity_id,load_fraction\n";
  for (const auto& row : load_rows_) load += row + "\n";
  out.message_csv = std::move(msg);
  out.rule_csv = std::move(rule);
  out.load_csv = std::move(load);
  out.event_trace = q_.trace();
  return out;
}

}  // namespace

RunOutput run(const Scenario& scenario, Mode mode) {
  Sim sim(scenario, mode);
  return sim.execute();
}

}  // namespace mmaas
