#include "mmaas/scenario.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace mmaas {

std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

struct Line {
  int number;
  std::string directive;
  std::vector<std::pair<std::string, std::string>> kv;
};

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw SimError(Err::ParseError, "line " + std::to_string(line) + ": " + msg);
}

[[noreturn]] void semantic_fail(const std::string& msg) {
  throw SimError(Err::ValidationError, msg);
}

class Fields {
 public:
  Fields(const Line& line) : line_(line) {
    for (const auto& [k, v] : line.kv) {
      if (!map_.emplace(k, v).second) parse_fail(line.number, "duplicate key '" + k + "'");
    }
  }
  ~Fields() = default;

  std::string require(const std::string& key) {
    auto it = map_.find(key);
    if (it == map_.end()) parse_fail(line_.number, "missing key '" + key + "'");
    seen_.insert(key);
    return it->second;
  }
  std::optional<std::string> optional(const std::string& key) {
    auto it = map_.find(key);
    if (it == map_.end()) return std::nullopt;
    seen_.insert(key);
    return it->second;
  }
  double require_num(const std::string& key) { return to_num(key, require(key)); }
  double optional_num(const std::string& key, double fallback) {
    auto v = optional(key);
    return v ? to_num(key, *v) : fallback;
  }
  void reject_unknown() const {
    for (const auto& [k, v] : map_)
      if (!seen_.count(k)) parse_fail(line_.number, "unknown key '" + k + "'");
  }
  double to_num(const std::string& key, const std::string& v) const {
    try {
      std::size_t used = 0;
      double d = std::stod(v, &used);
      if (used != v.size()) throw std::invalid_argument(v);
      return d;
    } catch (const std::exception&) {
      parse_fail(line_.number, "key '" + key + "' is not a number: '" + v + "'");
    }
  }
  int line_number() const { return line_.number; }

 private:
  const Line& line_;
  std::map<std::string, std::string> map_;
  std::set<std::string> seen_;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Position parse_pos(Fields& f, const std::string& key, const std::string& v) {
  auto parts = split(v, ',');
  if (parts.size() != 2) parse_fail(f.line_number(), "key '" + key + "' wants x,y");
  return {f.to_num(key, parts[0]), f.to_num(key, parts[1])};
}

PolicyVector parse_policy_fields(Fields& f) {
  PolicyVector p;  // all weights zero until set
  p.weights = {};
  static const std::pair<const char*, PolicyAxis> axes[] = {
      {"rssi", PolicyAxis::Rssi},
      {"load", PolicyAxis::Load},
      {"latency", PolicyAxis::Latency},
      {"pref", PolicyAxis::OperatorPreference},
      {"cost", PolicyAxis::Cost},
  };
  for (const auto& [key, axis] : axes) {
    double w = f.optional_num(key, 0.0);
    if (w < 0) parse_fail(f.line_number(), std::string("negative weight for '") + key + "'");
    p.weights[static_cast<int>(axis)] = w;
    if (auto v = f.optional(std::string("min_") + key))
      p.bounds[static_cast<int>(axis)].min = f.to_num(key, *v);
    if (auto v = f.optional(std::string("max_") + key))
      p.bounds[static_cast<int>(axis)].max = f.to_num(key, *v);
  }
  if (auto v = f.optional("forbid_rat"))
    for (const auto& r : split(*v, ',')) p.forbidden_rats.insert(r);
  if (auto v = f.optional("require_rat"))
    for (const auto& r : split(*v, ',')) p.required_rats.insert(r);
  if (!p.has_positive_weight())
    parse_fail(f.line_number(), "policy needs at least one positive weight");
  return p;
}

}  // namespace

Scenario parse_scenario_text(const std::string& text, const std::string& name) {
  Scenario s;
  s.name = name;
  s.hash_hex = fnv1a_hex(text);

  std::vector<Line> lines;
  {
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
      ++number;
      if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
      std::istringstream ls(raw);
      std::string token;
      Line line{number, "", {}};
      while (ls >> token) {
        if (line.directive.empty()) {
          line.directive = token;
          continue;
        }
        auto eq = token.find('=');
        if (eq == std::string::npos || eq == 0)
          parse_fail(number, "expected key=value, got '" + token + "'");
        line.kv.emplace_back(token.substr(0, eq), token.substr(eq + 1));
      }
      if (!line.directive.empty()) lines.push_back(std::move(line));
    }
  }

  std::string section;
  for (const auto& line : lines) {
    if (line.directive.front() == '[') {
      if (line.directive.back() != ']' || !line.kv.empty())
        parse_fail(line.number, "malformed section header");
      section = line.directive.substr(1, line.directive.size() - 2);
      if (section != "topology" && section != "nodes" && section != "flows" &&
          section != "policies" && section != "params")
        parse_fail(line.number, "unknown section '" + section + "'");
      continue;
    }
    if (section.empty()) parse_fail(line.number, "directive before any section");
    Fields f(line);

    if (section == "topology") {
      if (line.directive == "controller") {
        s.topology.controller = f.require("id");
      } else if (line.directive == "mmapp") {
        s.topology.mm_app = f.require("id");
      } else if (line.directive == "egress") {
        s.topology.egress = f.require("id");
      } else if (line.directive == "gateway") {
        s.topology.anchor_gateway = f.require("id");
      } else if (line.directive == "bbu") {
        s.topology.bbu_domains.push_back(f.require("id"));
      } else if (line.directive == "ar") {
        s.topology.access_routers.push_back(f.require("id"));
      } else if (line.directive == "ap") {
        AccessPoint ap;
        ap.id = f.require("id");
        std::string kind = f.require("kind");
        if (kind == "macro") ap.kind = CellKind::MacroCell;
        else if (kind == "small") ap.kind = CellKind::SmallCell;
        else parse_fail(line.number, "ap kind must be macro or small");
        ap.position = parse_pos(f, "pos", f.require("pos"));
        ap.radius_m = f.require_num("radius");
        ap.capacity_mbps = f.require_num("capacity");
        ap.parent_ar = f.require("ar");
        if (auto v = f.optional("bbu")) ap.bbu_domain = *v;
        if (auto v = f.optional("rat")) ap.rat = *v;
        else ap.rat = "cellular";
        ap.operator_preference = f.optional_num("pref", 1.0);
        ap.cost = f.optional_num("cost", 1.0);
        s.topology.aps.push_back(std::move(ap));
      } else if (line.directive == "link") {
        Link l;
        l.a = f.require("a");
        l.b = f.require("b");
        l.latency_ms = f.require_num("latency");
        s.topology.links.push_back(std::move(l));
      } else {
        parse_fail(line.number, "unknown topology directive '" + line.directive + "'");
      }
    } else if (section == "nodes") {
      if (line.directive != "mn")
        parse_fail(line.number, "unknown nodes directive '" + line.directive + "'");
      NodeSpec n;
      n.id = f.require("id");
      std::string device = f.require("device");
      if (device == "handset") n.device = DeviceClass::Handset;
      else if (device == "sensor") n.device = DeviceClass::Sensor;
      else parse_fail(line.number, "device must be handset or sensor");
      n.speed_kmh = f.require_num("speed");
      n.pos = parse_pos(f, "pos", f.require("pos"));
      if (auto v = f.optional("waypoints"))
        for (const auto& w : split(*v, ';')) n.waypoints.push_back(parse_pos(f, "waypoints", w));
      if (auto v = f.optional("attach"))
        for (const auto& a : split(*v, ',')) n.attach.push_back(a);
      if (auto v = f.optional("policy")) n.policy_id = *v;
      s.nodes.push_back(std::move(n));
    } else if (section == "flows") {
      if (line.directive != "flow")
        parse_fail(line.number, "unknown flows directive '" + line.directive + "'");
      FlowSpec fl;
      fl.id = f.require("id");
      fl.mn = f.require("mn");
      std::string klass = f.require("class");
      if (klass == "sensitive") fl.delay_class = FlowDelayClass::DelaySensitive;
      else if (klass == "tolerant") fl.delay_class = FlowDelayClass::DelayTolerant;
      else parse_fail(line.number, "class must be sensitive or tolerant");
      fl.rate_mbps = f.require_num("rate");
      fl.birth_ms = f.require_num("birth");
      if (auto v = f.optional("end")) fl.end_ms = f.to_num("end", *v);
      s.flows.push_back(std::move(fl));
    } else if (section == "policies") {
      if (line.directive == "policy") {
        std::string id = f.require("id");
        PolicyVector p = parse_policy_fields(f);
        if (!s.policies.emplace(id, std::move(p)).second)
          parse_fail(line.number, "duplicate policy '" + id + "'");
      } else if (line.directive == "network") {
        s.network_policy = parse_policy_fields(f);
      } else {
        parse_fail(line.number, "unknown policies directive '" + line.directive + "'");
      }
    } else {  // params
      if (line.directive != "set")
        parse_fail(line.number, "params lines start with 'set'");
      SimParams& p = s.params;
      auto num = [&](const char* key, double& slot) {
        if (auto v = f.optional(key)) {
          slot = f.to_num(key, *v);
          return true;
        }
        return false;
      };
      bool any = false;
      if (auto v = f.optional("seed")) {
        p.seed = static_cast<std::uint64_t>(f.to_num("seed", *v));
        any = true;
      }
      any |= num("horizon", p.horizon_ms);
      any |= num("hysteresis", p.hysteresis_db);
      any |= num("theta", p.theta);
      any |= num("linger", p.linger_ms);
      any |= num("opt_delay", p.opt_delay_ms);
      any |= num("sample_period", p.sample_period_ms);
      any |= num("move_tick", p.move_tick_ms);
      any |= num("proc_ar", p.proc_ar_ms);
      any |= num("proc_controller", p.proc_controller_ms);
      any |= num("proc_mmapp", p.proc_mmapp_ms);
      any |= num("local_handover", p.local_handover_ms);
      any |= num("highspeed_kmh", p.highspeed_kmh);
      any |= num("rssi_center", s.topology.radio.rssi_at_center);
      any |= num("rssi_slope", s.topology.radio.path_loss_slope);
      if (auto v = f.optional("attach_k")) {
        p.attach_k = static_cast<int>(f.to_num("attach_k", *v));
        any = true;
      }
      if (auto v = f.optional("negotiated_m")) {
        p.negotiated_m = static_cast<int>(f.to_num("negotiated_m", *v));
        any = true;
      }
      if (auto v = f.optional("selection")) {
        auto scheme = selection_scheme_from_name(*v);
        if (!scheme) parse_fail(line.number, "selection must be mmt or negotiated");
        p.selection = *scheme;
        any = true;
      }
      if (auto v = f.optional("placement")) {
        auto strat = placement_strategy_from_name(*v);
        if (!strat) parse_fail(line.number, "placement must be profile, macro, or small");
        p.placement = *strat;
        any = true;
      }
      if (!any) parse_fail(line.number, "set line carries no known parameter");
    }
    f.reject_unknown();
  }

  s.topology.rng_seed = s.params.seed;
  validate_scenario(s);
  return s;
}

Scenario parse_scenario_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SimError(Err::IoError, "cannot open scenario: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_scenario_text(buf.str(), path);
}

void validate_scenario(const Scenario& s) {
  if (s.params.horizon_ms <= 0) semantic_fail("horizon must be positive");
  if (s.params.theta <= 0 || s.params.theta > 1) semantic_fail("theta must be in (0,1]");
  if (s.params.attach_k < 1) semantic_fail("attach_k must be at least 1");
  if (s.params.negotiated_m < 1) semantic_fail("negotiated_m must be at least 1");
  for (double v : {s.params.move_tick_ms, s.params.sample_period_ms, s.params.linger_ms,
                   s.params.opt_delay_ms, s.params.local_handover_ms})
    if (v < 0) semantic_fail("time parameters must be non-negative");

  NetworkTopology topo = build_topology(s.topology);

  std::set<MnId> mn_ids;
  for (const auto& n : s.nodes) {
    if (!mn_ids.insert(n.id).second) semantic_fail("duplicate mn '" + n.id + "'");
    if (n.speed_kmh < 0) throw SimError(Err::NegativeSpeed, "mn " + n.id + " speed negative");
    if (n.device == DeviceClass::Sensor && (n.speed_kmh != 0 || !n.waypoints.empty()))
      semantic_fail("sensor " + n.id + " must be stationary with no waypoints");
    if (!n.policy_id.empty() && !s.policies.count(n.policy_id))
      semantic_fail("mn " + n.id + " references unknown policy '" + n.policy_id + "'");
    auto coverage = topo.coverage_at(n.pos);
    std::set<ApId> covered;
    for (const auto& e : coverage) covered.insert(e.ap);
    std::set<ApId> seen;
    for (const auto& ap : n.attach) {
      topo.ap(ap);  // throws UnknownAp
      if (!seen.insert(ap).second) semantic_fail("mn " + n.id + " attaches twice to " + ap);
      if (!covered.count(ap))
        semantic_fail("mn " + n.id + " attaches to " + ap + " outside its coverage");
    }
  }

  std::set<FlowId> flow_ids;
  for (const auto& fl : s.flows) {
    if (!flow_ids.insert(fl.id).second) semantic_fail("duplicate flow '" + fl.id + "'");
    if (!mn_ids.count(fl.mn)) semantic_fail("flow " + fl.id + " references unknown mn '" + fl.mn + "'");
    if (fl.rate_mbps <= 0) semantic_fail("flow " + fl.id + " rate must be positive");
    if (fl.birth_ms < 0 || fl.birth_ms >= s.params.horizon_ms)
      semantic_fail("flow " + fl.id + " birth outside [0, horizon)");
    if (fl.end_ms && *fl.end_ms <= fl.birth_ms)
      semantic_fail("flow " + fl.id + " ends before it starts");
  }
}

}  // namespace mmaas
