// speclab - experiment driver for the spectral-cluster laboratory.
// Exit codes: 0 all declared tolerances met, 1 tolerance failure,
// 2 execution error.
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "speclab/experiment.hpp"

using nlohmann::json;
using speclab::exp::ExperimentConfig;
using speclab::exp::Report;

namespace {

int run_one(const std::string& id, std::uint64_t seed, const std::string& out,
            const json& params, bool quiet) {
  ExperimentConfig cfg;
  cfg.id = id;
  cfg.seed = seed;
  cfg.outdir = out;
  cfg.params = params;
  Report rep = speclab::exp::run_experiment(cfg);
  speclab::exp::write_report(cfg, rep);
  if (!quiet) {
    for (const auto& c : rep.checks)
      std::printf("  [%s] %-36s value=%- .6g  window=[%g, %g]\n",
                  c.pass ? "pass" : "FAIL", c.name.c_str(), c.value, c.lo, c.hi);
    std::printf("%s: %s\n", id.c_str(), rep.pass() ? "PASS" : "FAIL");
  }
  return rep.pass() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"speclab: disk spectral clusters, wave packets and flows"};
  app.require_subcommand(1);
  app.fallthrough();

  std::uint64_t seed = 12345;
  std::string outdir = ".";
  std::string config_path;
  bool quiet = false;
  app.add_option("--seed", seed, "RNG seed (recorded in the manifest)");
  app.add_option("--out", outdir, "output directory for CSV and manifest");
  app.add_option("--config", config_path,
                 "JSON config file; flags take precedence over its entries");
  app.add_flag("--quiet", quiet, "suppress per-check lines");

  // generic parameter overrides as key=json pairs
  std::vector<std::string> kv;
  app.add_option("--set", kv, "parameter override, e.g. --set jmax=4");

  for (const auto& id : speclab::exp::experiment_ids())
    app.add_subcommand(id, "run the " + id + " experiment suite");
  auto* all = app.add_subcommand("all", "run every experiment suite");

  CLI11_PARSE(app, argc, argv);

  json params = json::object();
  std::uint64_t eff_seed = seed;
  try {
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw std::runtime_error("cannot open config " + config_path);
      json file = json::parse(is);
      if (file.contains("seed") && !app.count("--seed"))
        eff_seed = file["seed"].get<std::uint64_t>();
      if (file.contains("params")) params = file["params"];
    }
    for (const auto& s : kv) {
      const auto eq = s.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error("--set expects key=value: " + s);
      params[s.substr(0, eq)] = json::parse(s.substr(eq + 1));
    }

    int rc = 0;
    if (all->parsed()) {
      for (const auto& id : speclab::exp::experiment_ids())
        rc = std::max(rc, run_one(id, eff_seed, outdir, params, quiet));
    } else {
      for (const auto& id : speclab::exp::experiment_ids())
        if (app.get_subcommand(id)->parsed())
          rc = std::max(rc, run_one(id, eff_seed, outdir, params, quiet));
    }
    return rc;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
