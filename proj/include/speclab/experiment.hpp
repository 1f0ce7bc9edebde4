// Experiment driver: named suites, deterministic seeding, CSV + JSON
// manifest emission, slope fits, and pass/fail evaluation against declared
// tolerances.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace speclab::exp {

struct ExperimentConfig {
  std::string id;            // disk-modes | cluster-norms | restriction |
                             // wavepacket-tests | flow-tests | kernel-decay |
                             // calderon-check
  std::uint64_t seed = 12345;
  std::string outdir;        // empty: no files written
  nlohmann::json params;     // experiment parameters; missing keys take the
                             // documented defaults and are echoed back
};

struct CheckResult {
  std::string name;
  double value = 0.0;
  double lo = 0.0, hi = 0.0;  // declared tolerance interval
  bool pass = false;
};

struct Report {
  std::string id;
  std::vector<CheckResult> checks;
  std::string csv;            // deterministic body (given config and seed)
  nlohmann::json manifest;    // effective config, tolerances, results
  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

// Fill in defaults for the experiment's parameters (explicit tolerances
// included), without running it.
nlohmann::json effective_params(const std::string& id, const nlohmann::json& in);

// Run one experiment.  Deterministic given (config, seed); partial results
// are still written to the report on failure of a check (never on throw).
Report run_experiment(const ExperimentConfig& cfg);

// All experiment ids, in execution order for `all`.
std::vector<std::string> experiment_ids();

// Write report.csv and report.manifest.json under cfg.outdir (if set).
void write_report(const ExperimentConfig& cfg, const Report& rep);

// Worker count: SPECLAB_WORKERS env var, else hardware concurrency (min 1).
int worker_count();

}  // namespace speclab::exp
