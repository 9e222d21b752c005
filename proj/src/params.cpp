#include "mmaas/params.hpp"

#include "mmaas/errors.hpp"

namespace mmaas {

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::Mmaas: return "mmaas";
    case Mode::Legacy: return "legacy";
  }
  throw EngineAssertion("mode_name: bad mode");
}

std::optional<Mode> mode_from_name(const std::string& s) {
  if (s == "mmaas") return Mode::Mmaas;
  if (s == "legacy") return Mode::Legacy;
  return std::nullopt;
}

const char* selection_scheme_name(SelectionScheme s) {
  switch (s) {
    case SelectionScheme::MmtDriven: return "mmt";
    case SelectionScheme::Negotiated: return "negotiated";
  }
  throw EngineAssertion("selection_scheme_name: bad scheme");
}

std::optional<SelectionScheme> selection_scheme_from_name(const std::string& s) {
  if (s == "mmt") return SelectionScheme::MmtDriven;
  if (s == "negotiated") return SelectionScheme::Negotiated;
  return std::nullopt;
}

const char* placement_strategy_name(PlacementStrategy p) {
  switch (p) {
    case PlacementStrategy::Profile: return "profile";
    case PlacementStrategy::MacroOnly: return "macro";
    case PlacementStrategy::SmallOnly: return "small";
  }
  throw EngineAssertion("placement_strategy_name: bad strategy");
}

std::optional<PlacementStrategy> placement_strategy_from_name(const std::string& s) {
  if (s == "profile") return PlacementStrategy::Profile;
  if (s == "macro") return PlacementStrategy::MacroOnly;
  if (s == "small") return PlacementStrategy::SmallOnly;
  return std::nullopt;
}

}  // namespace mmaas
