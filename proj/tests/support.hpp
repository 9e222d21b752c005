#pragma once

// Shared fixture builders and log helpers for the test binaries.

#include <sstream>
#include <string>
#include <vector>

#include "mmaas/scenario.hpp"
#include "mmaas/selection.hpp"
#include "mmaas/topology.hpp"

namespace testsupport {

using namespace mmaas;

// Two macro cells fronting separate BBU domains, an anchor gateway for the
// legacy mode, and a direct AR1-AR2 shortcut for forwarding detours. Matches
// the bundled corridor scenario so hand-checked numbers carry over.
inline TopologySpec two_cell_spec() {
  TopologySpec s;
  s.controller = "C0";
  s.mm_app = "M0";
  s.egress = "E0";
  s.anchor_gateway = "GW0";
  s.access_routers = {"AR1", "AR2"};
  s.bbu_domains = {"D1", "D2"};

  AccessPoint ap1;
  ap1.id = "AP1";
  ap1.kind = CellKind::MacroCell;
  ap1.position = {0, 0};
  ap1.radius_m = 600;
  ap1.capacity_mbps = 100;
  ap1.parent_ar = "AR1";
  ap1.bbu_domain = "D1";
  AccessPoint ap2 = ap1;
  ap2.id = "AP2";
  ap2.position = {1000, 0};
  ap2.parent_ar = "AR2";
  ap2.bbu_domain = "D2";
  s.aps = {ap1, ap2};

  s.links = {{"C0", "M0", 1},   {"C0", "AR1", 5}, {"C0", "AR2", 5}, {"C0", "D1", 5},
             {"C0", "D2", 5},   {"AR1", "AR2", 3}, {"AR1", "GW0", 4}, {"AR2", "GW0", 4},
             {"GW0", "E0", 2},  {"AR1", "E0", 6}, {"AR2", "E0", 6}};
  return s;
}

inline CandidateRecord candidate(const ApId& ap, double rssi, double load, double latency,
                                 double pref, double cost, const std::string& rat = "cellular") {
  CandidateRecord c;
  c.ap = ap;
  c.rat = rat;
  c.values[static_cast<int>(PolicyAxis::Rssi)] = rssi;
  c.values[static_cast<int>(PolicyAxis::Load)] = load;
  c.values[static_cast<int>(PolicyAxis::Latency)] = latency;
  c.values[static_cast<int>(PolicyAxis::OperatorPreference)] = pref;
  c.values[static_cast<int>(PolicyAxis::Cost)] = cost;
  return c;
}

inline PolicyVector weighted_policy(double rssi, double load, double latency, double pref,
                                    double cost) {
  PolicyVector p;
  p.weights[static_cast<int>(PolicyAxis::Rssi)] = rssi;
  p.weights[static_cast<int>(PolicyAxis::Load)] = load;
  p.weights[static_cast<int>(PolicyAxis::Latency)] = latency;
  p.weights[static_cast<int>(PolicyAxis::OperatorPreference)] = pref;
  p.weights[static_cast<int>(PolicyAxis::Cost)] = cost;
  return p;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

// CSV body rows as field vectors; the header line is dropped.
inline std::vector<std::vector<std::string>> csv_rows(const std::string& text) {
  std::vector<std::vector<std::string>> out;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    out.push_back(split(line, ','));
  }
  return out;
}

inline std::string csv_header(const std::string& text) {
  auto pos = text.find('\n');
  return pos == std::string::npos ? text : text.substr(0, pos);
}

inline Scenario scenario_from(const std::string& text, const std::string& name = "inline") {
  return parse_scenario_text(text, name);
}

}  // namespace testsupport
