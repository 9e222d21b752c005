#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mmaas/mobility.hpp"
#include "mmaas/params.hpp"
#include "mmaas/topology.hpp"

namespace mmaas {

// Per-MN mobility-instance lifetimes. An instance opens when a signaling
// transaction starts and is held past completion for a linger window; back to
// back transactions inside the window merge into one interval. Anything still
// open at the horizon is truncated there.
class ComputeLedger {
 public:
  void open(const MnId& mn, double t_ms);
  void close(const MnId& mn, double t_ms, double linger_ms);
  bool is_open(const MnId& mn) const;

  double instance_ms(const MnId& mn, double horizon_ms) const;
  double total_instance_ms(double horizon_ms) const;
  std::vector<MnId> tracked() const;

 private:
  struct Track {
    std::vector<std::pair<double, double>> intervals;  // closed, unmerged
    std::optional<double> open_since;
  };
  static double merged_ms(const Track& t, double horizon_ms);
  std::map<MnId, Track> tracks_;
};

// Opens an MN's instance under the mode's lifecycle rules. Static nodes in
// MMaaS mode carry no mobility context and are refused.
void open_instance(ComputeLedger& ledger, Mode mode, MobilityProfile profile, const MnId& mn,
                   double t_ms);

// Offered load per AP from the flows whose data plane currently rides it.
class LoadTable {
 public:
  explicit LoadTable(const NetworkTopology* topo) : topo_(topo) {}

  void add_flow(const ApId& ap, const FlowId& flow, double rate_mbps);
  void remove_flow(const ApId& ap, const FlowId& flow);
  void move_flow(const ApId& from, const ApId& to, const FlowId& flow);

  double load_mbps(const ApId& ap) const;
  double load_fraction(const ApId& ap) const;
  // Fraction strictly above theta, sorted by ap id.
  std::vector<ApId> overloaded(double theta) const;
  const std::map<FlowId, double>& flows_at(const ApId& ap) const;

 private:
  const NetworkTopology* topo_;
  std::map<ApId, std::map<FlowId, double>> per_ap_;
};

}  // namespace mmaas
