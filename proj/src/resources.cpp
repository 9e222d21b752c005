#include "mmaas/resources.hpp"

#include <algorithm>

namespace mmaas {

void ComputeLedger::open(const MnId& mn, double t_ms) {
  Track& tr = tracks_[mn];
  if (tr.open_since) throw EngineAssertion("instance already open for " + mn);
  tr.open_since = t_ms;
}

void ComputeLedger::close(const MnId& mn, double t_ms, double linger_ms) {
  auto it = tracks_.find(mn);
  if (it == tracks_.end() || !it->second.open_since)
    throw EngineAssertion("closing instance that was never opened for " + mn);
  Track& tr = it->second;
  double start = *tr.open_since;
  double end = t_ms + linger_ms;
  if (end < start) throw EngineAssertion("instance for " + mn + " closes before it opens");
  tr.intervals.emplace_back(start, end);
  tr.open_since.reset();
}

bool ComputeLedger::is_open(const MnId& mn) const {
  auto it = tracks_.find(mn);
  return it != tracks_.end() && it->second.open_since.has_value();
}

double ComputeLedger::merged_ms(const Track& t, double horizon_ms) {
  std::vector<std::pair<double, double>> iv = t.intervals;
  if (t.open_since) iv.emplace_back(*t.open_since, horizon_ms);
  for (auto& [a, b] : iv) {
    a = std::min(a, horizon_ms);
    b = std::min(b, horizon_ms);
  }
  std::sort(iv.begin(), iv.end());
  double total = 0, cur_a = 0, cur_b = -1;
  bool have = false;
  for (const auto& [a, b] : iv) {
    if (!have) {
      cur_a = a;
      cur_b = b;
      have = true;
    } else if (a <= cur_b) {
      cur_b = std::max(cur_b, b);
    } else {
      total += cur_b - cur_a;
      cur_a = a;
      cur_b = b;
    }
  }
  if (have) total += cur_b - cur_a;
  return total;
}

double ComputeLedger::instance_ms(const MnId& mn, double horizon_ms) const {
  auto it = tracks_.find(mn);
  return it == tracks_.end() ? 0.0 : merged_ms(it->second, horizon_ms);
}

double ComputeLedger::total_instance_ms(double horizon_ms) const {
  double total = 0;
  for (const auto& [mn, tr] : tracks_) total += merged_ms(tr, horizon_ms);
  return total;
}

std::vector<MnId> ComputeLedger::tracked() const {
  std::vector<MnId> out;
  out.reserve(tracks_.size());
  for (const auto& [mn, tr] : tracks_) out.push_back(mn);
  return out;
}

void open_instance(ComputeLedger& ledger, Mode mode, MobilityProfile profile, const MnId& mn,
                   double t_ms) {
  if (mode == Mode::Mmaas && profile == MobilityProfile::Static)
    throw SimError(Err::InstanceRefusedStatic, mn + " is static and needs no mobility instance");
  ledger.open(mn, t_ms);
}

void LoadTable::add_flow(const ApId& ap, const FlowId& flow, double rate_mbps) {
  topo_->ap(ap);  // existence check
  auto [it, inserted] = per_ap_[ap].emplace(flow, rate_mbps);
  if (!inserted) throw EngineAssertion("flow " + flow + " already placed on " + ap);
}

void LoadTable::remove_flow(const ApId& ap, const FlowId& flow) {
  auto it = per_ap_.find(ap);
  if (it == per_ap_.end() || !it->second.erase(flow))
    throw EngineAssertion("flow " + flow + " not on " + ap);
}

void LoadTable::move_flow(const ApId& from, const ApId& to, const FlowId& flow) {
  auto it = per_ap_.find(from);
  if (it == per_ap_.end()) throw EngineAssertion("flow " + flow + " not on " + from);
  auto fit = it->second.find(flow);
  if (fit == it->second.end()) throw EngineAssertion("flow " + flow + " not on " + from);
  double rate = fit->second;
  it->second.erase(fit);
  add_flow(to, flow, rate);
}

double LoadTable::load_mbps(const ApId& ap) const {
  auto it = per_ap_.find(ap);
  if (it == per_ap_.end()) return 0;
  double sum = 0;
  for (const auto& [flow, rate] : it->second) sum += rate;
  return sum;
}

double LoadTable::load_fraction(const ApId& ap) const {
  return load_mbps(ap) / topo_->ap(ap).capacity_mbps;
}

std::vector<ApId> LoadTable::overloaded(double theta) const {
  std::vector<ApId> out;
  for (const auto& [ap, flows] : per_ap_)
    if (load_fraction(ap) > theta) out.push_back(ap);
  return out;
}

const std::map<FlowId, double>& LoadTable::flows_at(const ApId& ap) const {
  static const std::map<FlowId, double> empty;
  auto it = per_ap_.find(ap);
  return it == per_ap_.end() ? empty : it->second;
}

}  // namespace mmaas
