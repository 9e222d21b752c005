#include "mmaas/selection.hpp"

#include <algorithm>
#include <cmath>

namespace mmaas {

const char* policy_axis_name(PolicyAxis a) {
  switch (a) {
    case PolicyAxis::Rssi: return "rssi";
    case PolicyAxis::Load: return "load";
    case PolicyAxis::Latency: return "latency";
    case PolicyAxis::OperatorPreference: return "operator_preference";
    case PolicyAxis::Cost: return "cost";
  }
  throw EngineAssertion("policy_axis_name: bad axis");
}

std::optional<PolicyAxis> policy_axis_from_name(const std::string& name) {
  for (int i = 0; i < kPolicyAxisCount; ++i) {
    auto a = static_cast<PolicyAxis>(i);
    if (name == policy_axis_name(a)) return a;
  }
  return std::nullopt;
}

bool PolicyVector::has_positive_weight() const {
  for (double w : weights)
    if (w > 0) return true;
  return false;
}

PolicyVector default_policy() {
  PolicyVector p;
  p.weights[static_cast<int>(PolicyAxis::Rssi)] = 1.0;
  return p;
}

static bool passes_hard_constraints(const PolicyVector& policy, const CandidateRecord& c) {
  for (int i = 0; i < kPolicyAxisCount; ++i) {
    const AxisBound& b = policy.bounds[i];
    if (b.min && c.values[i] < *b.min) return false;
    if (b.max && c.values[i] > *b.max) return false;
  }
  if (policy.forbidden_rats.count(c.rat)) return false;
  if (!policy.required_rats.empty() && !policy.required_rats.count(c.rat)) return false;
  return true;
}

std::vector<CandidateRecord> filter_candidates(const PolicyVector& policy,
                                               const std::vector<CandidateRecord>& candidates) {
  std::vector<CandidateRecord> out;
  for (const auto& c : candidates)
    if (passes_hard_constraints(policy, c)) out.push_back(c);
  return out;
}

std::vector<ScoredCandidate> score(const PolicyVector& policy,
                                   const std::vector<CandidateRecord>& candidates) {
  std::vector<CandidateRecord> kept = filter_candidates(policy, candidates);
  if (kept.empty()) throw SimError(Err::AllCandidatesFiltered, "no candidate satisfies the policy");

  std::array<double, kPolicyAxisCount> lo{}, hi{};
  for (int i = 0; i < kPolicyAxisCount; ++i) {
    lo[i] = kept.front().values[i];
    hi[i] = kept.front().values[i];
    for (const auto& c : kept) {
      lo[i] = std::min(lo[i], c.values[i]);
      hi[i] = std::max(hi[i], c.values[i]);
    }
  }

  std::vector<ScoredCandidate> out;
  out.reserve(kept.size());
  for (const auto& c : kept) {
    double s = 0;
    for (int i = 0; i < kPolicyAxisCount; ++i) {
      if (policy.weights[i] <= 0) continue;
      double span = hi[i] - lo[i];
      // All candidates equal on this axis: it cannot discriminate, everyone
      // gets the midpoint so the axis still contributes its weight share.
      double n = span > 0 ? (c.values[i] - lo[i]) / span : 0.5;
      if (policy.directions[i] == AxisDirection::Minimize) n = 1.0 - n;
      s += policy.weights[i] * n;
    }
    out.push_back({c.ap, s});
  }
  std::sort(out.begin(), out.end(), [](const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.ap < b.ap;
  });
  return out;
}

std::vector<ApId> select_mmt_driven(const PolicyVector& mn_policy,
                                    const std::vector<CandidateRecord>& candidates, int k) {
  if (k <= 0) throw EngineAssertion("select_mmt_driven: k must be positive");
  auto ranked = score(mn_policy, candidates);
  std::vector<ApId> out;
  for (const auto& sc : ranked) {
    out.push_back(sc.ap);
    if (static_cast<int>(out.size()) == k) break;
  }
  return out;
}

NegotiatedSelection select_negotiated(const PolicyVector& mn_policy,
                                      const PolicyVector& network_policy,
                                      const std::vector<CandidateRecord>& candidates,
                                      int shortlist_m) {
  if (shortlist_m <= 0) throw EngineAssertion("select_negotiated: shortlist must be positive");
  auto shortlist_ids = select_mmt_driven(mn_policy, candidates, shortlist_m);

  std::vector<CandidateRecord> shortlist;
  for (const auto& id : shortlist_ids)
    for (const auto& c : candidates)
      if (c.ap == id) {
        shortlist.push_back(c);
        break;
      }

  std::vector<CandidateRecord> acceptable = filter_candidates(network_policy, shortlist);
  if (acceptable.empty()) return {shortlist_ids.front(), true};
  auto ranked = score(network_policy, acceptable);
  return {ranked.front().ap, false};
}

}  // namespace mmaas
