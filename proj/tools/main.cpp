#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "mmaas/metrics.hpp"
#include "mmaas/params.hpp"
#include "mmaas/scenario.hpp"
#include "mmaas/simulation.hpp"

namespace {

enum class LogLevel { Debug = 0, Info = 1, Warn = 2, Error = 3, Silent = 4 };

LogLevel log_level() {
  const char* raw = std::getenv("MMAAS_LOG_LEVEL");
  if (!raw) return LogLevel::Warn;
  std::string v = raw;
  if (v == "debug") return LogLevel::Debug;
  if (v == "info") return LogLevel::Info;
  if (v == "warn") return LogLevel::Warn;
  if (v == "error") return LogLevel::Error;
  if (v == "silent") return LogLevel::Silent;
  return LogLevel::Warn;
}

// Diagnostics go to stderr and never change outputs or exit codes.
void diag(LogLevel lvl, const std::string& msg) {
  static LogLevel threshold = log_level();
  if (lvl >= threshold) std::cerr << msg << "\n";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw mmaas::SimError(mmaas::Err::IoError, "cannot write " + path.string());
  out << content;
  if (!out) throw mmaas::SimError(mmaas::Err::IoError, "write failed: " + path.string());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mmaas::SimError(mmaas::Err::IoError, "cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int run_simulate(const std::string& scenario_path, const std::string& mode_str,
                 const std::optional<std::uint64_t>& seed, const std::optional<double>& until,
                 const std::string& out_dir, const std::string& format) {
  auto mode = mmaas::mode_from_name(mode_str);
  if (!mode) throw mmaas::SimError(mmaas::Err::ValidationError, "mode must be mmaas or legacy");
  if (format != "csv" && format != "json")
    throw mmaas::SimError(mmaas::Err::ValidationError, "format must be csv or json");

  mmaas::Scenario scenario = mmaas::parse_scenario_file(scenario_path);
  if (seed) {
    scenario.params.seed = *seed;
    scenario.topology.rng_seed = *seed;
  }
  if (until) scenario.params.horizon_ms = *until;
  if (seed || until) mmaas::validate_scenario(scenario);

  diag(LogLevel::Info, "scenario " + scenario.name + " hash=" + scenario.hash_hex);
  auto t0 = std::chrono::steady_clock::now();
  mmaas::RunOutput out = mmaas::run(scenario, *mode);
  auto t1 = std::chrono::steady_clock::now();
  double wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  diag(LogLevel::Info, "run wall_ms=" + std::to_string(wall_ms) + " events=" +
                           std::to_string(out.event_trace.size()));

  std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw mmaas::SimError(mmaas::Err::IoError, "cannot create " + out_dir);

  std::string report_name = format == "json" ? "report.json" : "report.csv";
  write_file(dir / report_name, format == "json" ? mmaas::report_to_json(out.report)
                                                 : mmaas::report_to_csv(out.report));
  write_file(dir / "messages.csv", out.message_csv);
  write_file(dir / "rules.csv", out.rule_csv);
  write_file(dir / "loads.csv", out.load_csv);

  char disruption[48];
  std::snprintf(disruption, sizeof disruption, "%.3f", out.report.total_disruption_ms);
  std::cout << "mode=" << out.report.mode << " hash=" << out.report.scenario_hash
            << " messages=" << out.report.messages_total
            << " transactions=" << out.report.transactions_total
            << " total_disruption_ms=" << disruption << " out=" << (dir / report_name).string()
            << "\n";
  return 0;
}

int run_compare(const std::string& a_path, const std::string& b_path,
                const std::string& out_path) {
  mmaas::MetricsReport a = mmaas::report_from_json(read_file(a_path));
  mmaas::MetricsReport b = mmaas::report_from_json(read_file(b_path));
  mmaas::Comparison c = mmaas::compare(a, b);
  std::cout << mmaas::comparison_to_text(c);
  if (!out_path.empty()) write_file(out_path, mmaas::comparison_to_json(c));
  return 0;
}

int run_validate(const std::string& scenario_path) {
  mmaas::Scenario s = mmaas::parse_scenario_file(scenario_path);
  std::cout << "valid scenario=" << scenario_path << " hash=" << s.hash_hex
            << " aps=" << s.topology.aps.size() << " nodes=" << s.nodes.size()
            << " flows=" << s.flows.size() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mobility management simulator"};
  app.require_subcommand(1);

  std::string scenario_path, mode_str = "mmaas", out_dir, format = "json";
  std::uint64_t seed_val = 0;
  double until_val = 0;

  auto* sim = app.add_subcommand("simulate", "Run a scenario and write report plus logs");
  sim->add_option("--scenario", scenario_path, "Scenario file")->required();
  sim->add_option("--mode", mode_str, "mmaas or legacy")->capture_default_str();
  auto* seed_opt = sim->add_option("--seed", seed_val, "Override the scenario seed");
  auto* until_opt = sim->add_option("--until", until_val, "Override the horizon (ms)");
  sim->add_option("--out", out_dir, "Output directory")->required();
  sim->add_option("--format", format, "Report format: csv or json")->capture_default_str();

  std::string a_path, b_path, cmp_out;
  auto* cmp = app.add_subcommand("compare", "Compare two report.json files");
  cmp->add_option("--a", a_path, "First report")->required();
  cmp->add_option("--b", b_path, "Second report")->required();
  cmp->add_option("--out", cmp_out, "Optional JSON output file");

  std::string val_path;
  auto* val = app.add_subcommand("validate", "Parse and validate a scenario file");
  val->add_option("--scenario", val_path, "Scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) {
      std::optional<std::uint64_t> seed;
      std::optional<double> until;
      if (seed_opt->count()) seed = seed_val;
      if (until_opt->count()) until = until_val;
      return run_simulate(scenario_path, mode_str, seed, until, out_dir, format);
    }
    if (cmp->parsed()) return run_compare(a_path, b_path, cmp_out);
    if (val->parsed()) return run_validate(val_path);
  } catch (const mmaas::SimError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const mmaas::EngineAssertion& e) {
    std::cerr << "engine assertion: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
