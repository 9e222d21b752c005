#include "mmaas/metrics.hpp"

#include <cmath>
#include <sstream>

#include "json.hpp"

namespace mmaas {

using nlohmann::json;

std::string report_to_json(const MetricsReport& r) {
  json j;
  j["scenario_hash"] = r.scenario_hash;
  j["mode"] = r.mode;
  j["seed"] = r.seed;
  j["horizon_ms"] = r.horizon_ms;
  j["messages"]["total"] = r.messages_total;
  j["messages"]["by_kind"] = r.messages_by_kind;
  j["transactions"]["total"] = r.transactions_total;
  j["transactions"]["by_reason"] = r.transactions_by_reason;
  j["transactions"]["cp_latency_mean_ms"] = r.cp_latency_mean_ms;
  j["transactions"]["cp_latency_p95_ms"] = r.cp_latency_p95_ms;
  j["handovers"]["intra_domain"] = r.handovers_intra;
  j["handovers"]["inter_domain"] = r.handovers_inter;
  j["handovers"]["local"] = r.local_handovers;
  json flows = json::object();
  for (const auto& [id, f] : r.flows) {
    flows[id]["disruption_ms"] = f.disruption_ms;
    flows[id]["switches"] = f.switches;
    flows[id]["final_path"] = f.final_path;
  }
  j["flows"] = flows;
  j["total_disruption_ms"] = r.total_disruption_ms;
  j["instance_ms"]["by_mn"] = r.instance_ms;
  j["instance_ms"]["total"] = r.instance_total_ms;
  j["residual_overload_ms"] = r.residual_overload_ms;
  j["selection_fallbacks"] = r.selection_fallbacks;
  j["decisions"] = r.decisions;
  j["anchor_path_fraction"] = r.anchor_path_fraction;
  return j.dump(2) + "\n";
}

MetricsReport report_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw SimError(Err::ParseError, std::string("report is not valid json: ") + e.what());
  }
  try {
    MetricsReport r;
    r.scenario_hash = j.at("scenario_hash").get<std::string>();
    r.mode = j.at("mode").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.horizon_ms = j.at("horizon_ms").get<double>();
    r.messages_total = j.at("messages").at("total").get<int>();
    r.messages_by_kind = j.at("messages").at("by_kind").get<std::map<std::string, int>>();
    r.transactions_total = j.at("transactions").at("total").get<int>();
    r.transactions_by_reason =
        j.at("transactions").at("by_reason").get<std::map<std::string, int>>();
    r.cp_latency_mean_ms = j.at("transactions").at("cp_latency_mean_ms").get<double>();
    r.cp_latency_p95_ms = j.at("transactions").at("cp_latency_p95_ms").get<double>();
    r.handovers_intra = j.at("handovers").at("intra_domain").get<int>();
    r.handovers_inter = j.at("handovers").at("inter_domain").get<int>();
    r.local_handovers = j.at("handovers").at("local").get<int>();
    for (const auto& [id, f] : j.at("flows").items()) {
      FlowReport fr;
      fr.disruption_ms = f.at("disruption_ms").get<double>();
      fr.switches = f.at("switches").get<int>();
      fr.final_path = f.at("final_path").get<std::vector<std::string>>();
      r.flows[id] = std::move(fr);
    }
    r.total_disruption_ms = j.at("total_disruption_ms").get<double>();
    r.instance_ms = j.at("instance_ms").at("by_mn").get<std::map<std::string, double>>();
    r.instance_total_ms = j.at("instance_ms").at("total").get<double>();
    r.residual_overload_ms = j.at("residual_overload_ms").get<double>();
    r.selection_fallbacks = j.at("selection_fallbacks").get<int>();
    r.decisions = j.at("decisions").get<int>();
    r.anchor_path_fraction = j.at("anchor_path_fraction").get<double>();
    return r;
  } catch (const json::exception& e) {
    throw SimError(Err::ParseError, std::string("report missing field: ") + e.what());
  }
}

static std::string join_path(const std::vector<NodeId>& path) {
  std::string out;
  for (const auto& n : path) {
    if (!out.empty()) out += '|';
    out += n;
  }
  return out;
}

static std::string num(double v) {
  std::ostringstream os;
  os.precision(15);
  os << v;
  return os.str();
}

std::string report_to_csv(const MetricsReport& r) {
  std::ostringstream os;
  os << "metric,value\n";
  os << "scenario_hash," << r.scenario_hash << "\n";
  os << "mode," << r.mode << "\n";
  os << "seed," << r.seed << "\n";
  os << "horizon_ms," << num(r.horizon_ms) << "\n";
  os << "messages.total," << r.messages_total << "\n";
  for (const auto& [k, v] : r.messages_by_kind) os << "messages.by_kind." << k << "," << v << "\n";
  os << "transactions.total," << r.transactions_total << "\n";
  for (const auto& [k, v] : r.transactions_by_reason)
    os << "transactions.by_reason." << k << "," << v << "\n";
  os << "transactions.cp_latency_mean_ms," << num(r.cp_latency_mean_ms) << "\n";
  os << "transactions.cp_latency_p95_ms," << num(r.cp_latency_p95_ms) << "\n";
  os << "handovers.intra_domain," << r.handovers_intra << "\n";
  os << "handovers.inter_domain," << r.handovers_inter << "\n";
  os << "handovers.local," << r.local_handovers << "\n";
  for (const auto& [id, f] : r.flows) {
    os << "flow." << id << ".disruption_ms," << num(f.disruption_ms) << "\n";
    os << "flow." << id << ".switches," << f.switches << "\n";
    os << "flow." << id << ".final_path," << join_path(f.final_path) << "\n";
  }
  os << "total_disruption_ms," << num(r.total_disruption_ms) << "\n";
  for (const auto& [mn, v] : r.instance_ms) os << "instance_ms." << mn << "," << num(v) << "\n";
  os << "instance_ms.total," << num(r.instance_total_ms) << "\n";
  os << "residual_overload_ms," << num(r.residual_overload_ms) << "\n";
  os << "selection_fallbacks," << r.selection_fallbacks << "\n";
  os << "decisions," << r.decisions << "\n";
  os << "anchor_path_fraction," << num(r.anchor_path_fraction) << "\n";
  return os.str();
}

Comparison compare(const MetricsReport& a, const MetricsReport& b) {
  if (a.scenario_hash != b.scenario_hash)
    throw SimError(Err::ScenarioMismatch, "reports come from different scenarios (" +
                                              a.scenario_hash + " vs " + b.scenario_hash + ")");
  Comparison c;
  c.scenario_hash = a.scenario_hash;
  c.mode_a = a.mode;
  c.mode_b = b.mode;
  auto row = [&](const std::string& metric, double va, double vb) {
    c.rows.push_back({metric, va, vb});
  };
  row("messages.total", a.messages_total, b.messages_total);
  row("transactions.total", a.transactions_total, b.transactions_total);
  row("transactions.cp_latency_mean_ms", a.cp_latency_mean_ms, b.cp_latency_mean_ms);
  row("handovers.intra_domain", a.handovers_intra, b.handovers_intra);
  row("handovers.inter_domain", a.handovers_inter, b.handovers_inter);
  row("handovers.local", a.local_handovers, b.local_handovers);
  row("total_disruption_ms", a.total_disruption_ms, b.total_disruption_ms);
  row("instance_ms.total", a.instance_total_ms, b.instance_total_ms);
  row("residual_overload_ms", a.residual_overload_ms, b.residual_overload_ms);
  row("selection_fallbacks", a.selection_fallbacks, b.selection_fallbacks);
  row("decisions", a.decisions, b.decisions);
  row("anchor_path_fraction", a.anchor_path_fraction, b.anchor_path_fraction);
  return c;
}

std::string comparison_to_text(const Comparison& c) {
  std::ostringstream os;
  os << "scenario " << c.scenario_hash << ": " << c.mode_a << " (a) vs " << c.mode_b << " (b)\n";
  os << "metric,a,b,delta,ratio\n";
  for (const auto& r : c.rows) {
    os << r.metric << "," << num(r.a) << "," << num(r.b) << "," << num(r.b - r.a) << ",";
    if (r.a != 0) os << num(r.b / r.a);
    else os << "na";
    os << "\n";
  }
  return os.str();
}

std::string comparison_to_json(const Comparison& c) {
  json j;
  j["scenario_hash"] = c.scenario_hash;
  j["mode_a"] = c.mode_a;
  j["mode_b"] = c.mode_b;
  json rows = json::array();
  for (const auto& r : c.rows) {
    json row;
    row["metric"] = r.metric;
    row["a"] = r.a;
    row["b"] = r.b;
    row["delta"] = r.b - r.a;
    if (r.a != 0) row["ratio"] = r.b / r.a;
    rows.push_back(row);
  }
  j["metrics"] = rows;
  return j.dump(2) + "\n";
}

}  // namespace mmaas
