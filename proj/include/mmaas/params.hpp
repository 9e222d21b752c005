#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace mmaas {

enum class Mode { Mmaas, Legacy };

const char* mode_name(Mode m);
std::optional<Mode> mode_from_name(const std::string& s);

enum class SelectionScheme { MmtDriven, Negotiated };
enum class PlacementStrategy { Profile, MacroOnly, SmallOnly };

const char* selection_scheme_name(SelectionScheme s);
std::optional<SelectionScheme> selection_scheme_from_name(const std::string& s);
const char* placement_strategy_name(PlacementStrategy p);
std::optional<PlacementStrategy> placement_strategy_from_name(const std::string& s);

struct SimParams {
  std::uint64_t seed = 1;
  double horizon_ms = 0;  // required by the scenario
  double hysteresis_db = 3.0;
  double theta = 0.8;               // overload threshold, load fraction
  double linger_ms = 100.0;         // instance hold past transaction completion
  double opt_delay_ms = 50.0;       // forwarding-detour lifetime before route optimization
  double sample_period_ms = 100.0;  // load sampling cadence
  double move_tick_ms = 100.0;      // mobility integration step
  double proc_ar_ms = 0.5;          // per-message processing at an AR / access network
  double proc_controller_ms = 1.0;
  double proc_mmapp_ms = 2.0;
  double local_handover_ms = 2.0;   // intra-domain completion latency
  double highspeed_kmh = 120.0;
  int attach_k = 1;      // mmt-driven choice-set size at attachment
  int negotiated_m = 3;  // shortlist size for the negotiated scheme
  SelectionScheme selection = SelectionScheme::MmtDriven;
  PlacementStrategy placement = PlacementStrategy::Profile;
};

}  // namespace mmaas
