#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mmaas/selection.hpp"
#include "mmaas/topology.hpp"

namespace mmaas {

enum class DeviceClass { Sensor, Handset };
enum class MobilityProfile { Static, Pedestrian, Vehicular, HighSpeed };

const char* device_class_name(DeviceClass d);
const char* mobility_profile_name(MobilityProfile p);

// Throws NegativeSpeed. A parked sensor is Static; everything else is binned
// purely by speed. The HighSpeed threshold is configurable per scenario.
MobilityProfile classify_profile(DeviceClass device, double speed_kmh,
                                 double highspeed_threshold_kmh = 120.0);

enum class FlowDelayClass { DelaySensitive, DelayTolerant };
enum class FlowState { Pending, Active, Transferring, Closed };

const char* flow_delay_class_name(FlowDelayClass c);

struct Flow {
  FlowId id;
  MnId mn;
  FlowDelayClass delay_class = FlowDelayClass::DelayTolerant;
  double rate_mbps = 0;
  double birth_ms = 0;
  std::optional<double> end_ms;

  FlowState state = FlowState::Pending;
  ApId serving_ap;                 // attachment slot carrying this flow's data plane
  std::vector<NodeId> path;        // AR..egress
  double path_latency_ms = 0;
  double disruption_ms = 0;        // accumulated data-plane outage
  int switches = 0;                // completed path replacements
};

struct AttachmentSlot {
  ApId ap;
  bool control_plane = true;
  bool data_plane = true;
};

struct MobileNode {
  MnId id;
  DeviceClass device = DeviceClass::Handset;
  double speed_kmh = 0;
  Position position{};
  std::vector<Position> waypoints;  // visited in order at speed_kmh, then halt
  std::size_t next_waypoint = 0;

  PolicyVector policy;
  MobilityProfile profile = MobilityProfile::Static;

  std::vector<AttachmentSlot> slots;
  std::vector<FlowId> flow_ids;
  std::set<ApId> in_coverage;

  bool transaction_open = false;   // a signaling transaction for this MN is in flight

  const AttachmentSlot* control_slot() const;
  const AttachmentSlot* data_slot() const;
  bool attached_to(const ApId& ap) const;
};

// Piecewise-linear waypoint motion; a tick never overshoots a waypoint, the
// residual distance carries into the next leg.
void advance(MobileNode& mn, double dt_ms);

struct RadioEvent {
  MnId mn;
  ApId ap;
  bool entered = false;  // false: left coverage
};

// Recomputes mn.in_coverage at the current position and returns the diff,
// losses first, both halves sorted by ap id.
std::vector<RadioEvent> update_coverage(MobileNode& mn, const NetworkTopology& topo);

enum class TriggerReason { RadioSignal, RadioCoverage, LoadDriven, NewFlowPlacement };

const char* trigger_reason_name(TriggerReason r);
bool is_radio_reason(TriggerReason r);

// One trigger type for all transaction causes; unused fields stay empty.
struct Trigger {
  TriggerReason reason = TriggerReason::RadioSignal;
  MnId mn;          // radio, new-flow
  ApId from, to;    // radio
  ApId entity;      // load: the overloaded AP
  FlowId flow;      // new-flow
};

// Hysteresis rule over an already-filtered candidate set (the caller removes
// kind- or policy-ineligible APs first). serving_rssi empty means the serving
// cell no longer covers the node, which forces a handover to the best
// remaining candidate. Ties break to the lowest ap id.
std::optional<Trigger> detect_trigger(const MnId& mn, const ApId& serving_ap,
                                      std::optional<double> serving_rssi,
                                      const std::vector<CoverageEntry>& candidates,
                                      double hysteresis_db);

}  // namespace mmaas
