#include "mmaas/mobility.hpp"

#include <algorithm>
#include <cmath>

namespace mmaas {

const char* device_class_name(DeviceClass d) {
  switch (d) {
    case DeviceClass::Sensor: return "sensor";
    case DeviceClass::Handset: return "handset";
  }
  throw EngineAssertion("device_class_name: bad class");
}

const char* mobility_profile_name(MobilityProfile p) {
  switch (p) {
    case MobilityProfile::Static: return "static";
    case MobilityProfile::Pedestrian: return "pedestrian";
    case MobilityProfile::Vehicular: return "vehicular";
    case MobilityProfile::HighSpeed: return "highspeed";
  }
  throw EngineAssertion("mobility_profile_name: bad profile");
}

const char* flow_delay_class_name(FlowDelayClass c) {
  switch (c) {
    case FlowDelayClass::DelaySensitive: return "delay_sensitive";
    case FlowDelayClass::DelayTolerant: return "delay_tolerant";
  }
  throw EngineAssertion("flow_delay_class_name: bad class");
}

const char* trigger_reason_name(TriggerReason r) {
  switch (r) {
    case TriggerReason::RadioSignal: return "radio_signal";
    case TriggerReason::RadioCoverage: return "radio_coverage";
    case TriggerReason::LoadDriven: return "load";
    case TriggerReason::NewFlowPlacement: return "new_flow";
  }
  throw EngineAssertion("trigger_reason_name: bad reason");
}

bool is_radio_reason(TriggerReason r) {
  return r == TriggerReason::RadioSignal || r == TriggerReason::RadioCoverage;
}

MobilityProfile classify_profile(DeviceClass device, double speed_kmh,
                                 double highspeed_threshold_kmh) {
  if (speed_kmh < 0)
    throw SimError(Err::NegativeSpeed, "speed must be non-negative, got " + std::to_string(speed_kmh));
  if (device == DeviceClass::Sensor && speed_kmh == 0) return MobilityProfile::Static;
  if (speed_kmh < 3.0) return MobilityProfile::Pedestrian;
  if (speed_kmh < highspeed_threshold_kmh) return MobilityProfile::Vehicular;
  return MobilityProfile::HighSpeed;
}

const AttachmentSlot* MobileNode::control_slot() const {
  for (const auto& s : slots)
    if (s.control_plane) return &s;
  return nullptr;
}

const AttachmentSlot* MobileNode::data_slot() const {
  for (const auto& s : slots)
    if (s.data_plane) return &s;
  return nullptr;
}

bool MobileNode::attached_to(const ApId& ap) const {
  for (const auto& s : slots)
    if (s.ap == ap) return true;
  return false;
}

void advance(MobileNode& mn, double dt_ms) {
  double remaining_m = mn.speed_kmh * (1000.0 / 3600.0) * (dt_ms / 1000.0);
  while (remaining_m > 0 && mn.next_waypoint < mn.waypoints.size()) {
    const Position& target = mn.waypoints[mn.next_waypoint];
    double leg = distance(mn.position, target);
    if (leg <= remaining_m) {
      mn.position = target;
      remaining_m -= leg;
      ++mn.next_waypoint;
    } else {
      double f = remaining_m / leg;
      mn.position.x += (target.x - mn.position.x) * f;
      mn.position.y += (target.y - mn.position.y) * f;
      remaining_m = 0;
    }
  }
}

std::vector<RadioEvent> update_coverage(MobileNode& mn, const NetworkTopology& topo) {
  std::set<ApId> now;
  for (const auto& e : topo.coverage_at(mn.position)) now.insert(e.ap);

  std::vector<RadioEvent> events;
  for (const auto& ap : mn.in_coverage)
    if (!now.count(ap)) events.push_back({mn.id, ap, false});
  for (const auto& ap : now)
    if (!mn.in_coverage.count(ap)) events.push_back({mn.id, ap, true});
  mn.in_coverage = std::move(now);
  return events;
}

std::optional<Trigger> detect_trigger(const MnId& mn, const ApId& serving_ap,
                                      std::optional<double> serving_rssi,
                                      const std::vector<CoverageEntry>& candidates,
                                      double hysteresis_db) {
  const CoverageEntry* best = nullptr;
  for (const auto& c : candidates) {
    if (c.ap == serving_ap) continue;
    if (!best || c.rssi > best->rssi || (c.rssi == best->rssi && c.ap < best->ap)) best = &c;
  }
  if (!best) return std::nullopt;
  Trigger t;
  t.mn = mn;
  t.from = serving_ap;
  t.to = best->ap;
  if (!serving_rssi) {
    t.reason = TriggerReason::RadioCoverage;
    return t;
  }
  if (best->rssi > *serving_rssi + hysteresis_db) {
    t.reason = TriggerReason::RadioSignal;
    return t;
  }
  return std::nullopt;
}

}  // namespace mmaas
