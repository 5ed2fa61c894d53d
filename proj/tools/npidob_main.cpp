// Command-line front end: simulate, certify, compare.

#include <CLI11.hpp>

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>

#include "npidob/config.hpp"
#include "npidob/errors.hpp"
#include "npidob/harness.hpp"
#include "npidob/report.hpp"
#include "npidob/stability.hpp"

namespace fs = std::filesystem;
using namespace npidob;

namespace {

void write_log(const fs::path& path, const std::vector<LogRecord>& log) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  write_csv(out, log);
}

int simulate(const std::string& config_path, const std::string& variant, const std::string& out_path,
             std::optional<std::uint64_t> seed) {
  SimConfig c = load_config_file(config_path);
  c.scenario.variant = parse_variant(variant);
  if (seed) c.scenario.seed = *seed;
  const auto log = run_scenario(c.motor, c.gains, c.scenario);
  write_log(out_path, log);
  std::cerr << "wrote " << log.size() << " ticks to " << out_path << "\n";
  return 0;
}

int certify(const std::string& config_path, const std::string& loop, double q0, double epsilon,
            double delta) {
  const SimConfig c = load_config_file(config_path);
  StabilityQuery q;
  if (loop == "inner") {
    q.loop = Loop::Inner;
  } else if (loop == "outer") {
    q.loop = Loop::Outer;
  } else {
    throw Error::invalid_value("loop", "must be inner or outer");
  }
  q.Q0 = Matrix2::diagonal(q0);
  q.epsilon = epsilon;
  q.delta = delta;
  const StabilityReport r = gamma_star(q, c.motor, c.gains);
  nlohmann::json j = to_json(r);
  const MechanicalMatrix mech = mechanical_matrix(c.gains, c.motor);
  j["mechanical"] = {{"A_m", to_json(mech.A_m)}, {"hurwitz", mech.hurwitz}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int compare(const std::string& config_path, const std::string& out_dir) {
  const SimConfig c = load_config_file(config_path);
  fs::create_directories(out_dir);

  constexpr std::array variants{ControllerVariant::Full, ControllerVariant::OuterOnly,
                                ControllerVariant::NoDob};
  std::array<std::future<std::vector<LogRecord>>, 3> runs;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    Scenario s = c.scenario;
    s.variant = variants[i];
    runs[i] = std::async(std::launch::async, [&c, s] { return run_scenario(c.motor, c.gains, s); });
  }
  std::array<std::vector<LogRecord>, 3> logs;
  for (std::size_t i = 0; i < variants.size(); ++i) {
    logs[i] = runs[i].get();
    write_log(fs::path(out_dir) / (std::string(to_string(variants[i])) + ".csv"), logs[i]);
  }

  const WindowPlan plan = default_windows(c.scenario);
  nlohmann::json report;
  report["steady"] = {{"full_vs_outer_only", to_json(compare_runs(logs[0], logs[1], plan.steady))},
                      {"full_vs_no_dob", to_json(compare_runs(logs[0], logs[2], plan.steady))}};
  if (!plan.transient.empty()) {
    report["transient"] = {
        {"full_vs_outer_only", to_json(compare_runs(logs[0], logs[1], plan.transient))},
        {"full_vs_no_dob", to_json(compare_runs(logs[0], logs[2], plan.transient))}};
  }
  const fs::path metrics_path = fs::path(out_dir) / "metrics.json";
  std::ofstream(metrics_path) << report.dump(2) << "\n";
  std::cerr << "wrote " << metrics_path.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"N-PI disturbance-observer PMSM simulation and certificates"};
  app.require_subcommand(1);

  std::string config;
  std::string variant = "full";
  std::string out;
  std::optional<std::uint64_t> seed;
  auto* sim = app.add_subcommand("simulate", "run one closed-loop scenario and write a CSV log");
  sim->add_option("--config", config, "config JSON")->required()->check(CLI::ExistingFile);
  sim->add_option("--variant", variant, "full | outer-only | no-dob")
      ->check(CLI::IsMember({"full", "outer-only", "no-dob"}));
  sim->add_option("--out", out, "CSV output path")->required();
  sim->add_option("--seed", seed, "seed for randomised scenario elements");

  std::string loop = "inner";
  double q0 = 1000.0;
  double epsilon = 0.1;
  double delta = 1.0;
  auto* cert = app.add_subcommand("certify", "print the stability certificate as JSON");
  cert->add_option("--config", config, "config JSON")->required()->check(CLI::ExistingFile);
  cert->add_option("--loop", loop, "inner | outer")->check(CLI::IsMember({"inner", "outer"}));
  cert->add_option("--q0", q0, "Q0 = q0 * I");
  cert->add_option("--epsilon", epsilon, "ball radius");
  cert->add_option("--delta", delta, "disturbance-rate bound");

  std::string out_dir;
  auto* cmp = app.add_subcommand("compare", "run all variants and write logs plus metrics.json");
  cmp->add_option("--config", config, "config JSON")->required()->check(CLI::ExistingFile);
  cmp->add_option("--out", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) return simulate(config, variant, out, seed);
    if (*cert) return certify(config, loop, q0, epsilon, delta);
    if (*cmp) return compare(config, out_dir);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
