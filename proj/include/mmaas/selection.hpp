#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mmaas/errors.hpp"
#include "mmaas/topology.hpp"

namespace mmaas {

// Parameter axes a policy vector weighs. Order is the canonical axis order
// used everywhere (serialization, normalization, reporting).
enum class PolicyAxis { Rssi = 0, Load, Latency, OperatorPreference, Cost };
inline constexpr int kPolicyAxisCount = 5;

const char* policy_axis_name(PolicyAxis a);
std::optional<PolicyAxis> policy_axis_from_name(const std::string& name);

enum class AxisDirection { Maximize, Minimize };

struct AxisBound {
  std::optional<double> min;
  std::optional<double> max;
};

struct PolicyVector {
  std::array<double, kPolicyAxisCount> weights{};     // non-negative
  std::array<AxisDirection, kPolicyAxisCount> directions{
      AxisDirection::Maximize,   // rssi
      AxisDirection::Minimize,   // load
      AxisDirection::Minimize,   // latency
      AxisDirection::Maximize,   // operator preference
      AxisDirection::Minimize};  // cost
  std::array<AxisBound, kPolicyAxisCount> bounds{};   // hard per-axis constraints
  std::set<std::string> forbidden_rats;
  std::set<std::string> required_rats;  // non-empty: candidate rat must be in the set

  double weight(PolicyAxis a) const { return weights[static_cast<int>(a)]; }
  bool has_positive_weight() const;
};

// rssi:1 maximize, everything else zero-weight.
PolicyVector default_policy();

struct CandidateRecord {
  ApId ap;
  std::array<double, kPolicyAxisCount> values{};
  std::string rat;

  double value(PolicyAxis a) const { return values[static_cast<int>(a)]; }
};

struct ScoredCandidate {
  ApId ap;
  double score;
};

// Hard-constraint filter (bounds, forbidden/required rats). May return empty.
std::vector<CandidateRecord> filter_candidates(const PolicyVector& policy,
                                               const std::vector<CandidateRecord>& candidates);

// Weighted-sum scoring after per-axis min-max normalization over the filtered
// candidate set (Minimize axes inverted; a degenerate axis contributes 0.5 to
// everyone). Sorted descending, ties by lowest ap id.
// Throws AllCandidatesFiltered when the hard filter leaves nothing.
std::vector<ScoredCandidate> score(const PolicyVector& policy,
                                   const std::vector<CandidateRecord>& candidates);

// MMT-driven scheme: the terminal ranks candidates against its own policy and
// asks the network to orchestrate its top-k choice set.
std::vector<ApId> select_mmt_driven(const PolicyVector& mn_policy,
                                    const std::vector<CandidateRecord>& candidates, int k);

struct NegotiatedSelection {
  ApId ap;
  bool fallback = false;  // empty intersection; mmt-driven top-1 was used instead
};

// Negotiated scheme: the MN shortlists top-m acceptable APs under its policy,
// the network hard-filters that list under its own policy and returns its
// argmax. On an empty intersection the MN falls back to mmt-driven top-1
// (fallback flagged so the harness can count it).
NegotiatedSelection select_negotiated(const PolicyVector& mn_policy,
                                      const PolicyVector& network_policy,
                                      const std::vector<CandidateRecord>& candidates,
                                      int shortlist_m = 3);

}  // namespace mmaas
