#pragma once
// Named experiment catalog. Each entry binds a measured quantity to the
// statement it probes, carries a flat key=value default configuration, and
// produces two tables (per-point data, summary report) plus free-form notes.
// Running an experiment writes <name>-data.csv, <name>-report.csv and a
// <name>-meta.txt sidecar into an output directory.

#include <map>
#include <string>
#include <vector>

#include "pilab/csvio.hpp"

namespace pilab {

using Config = std::map<std::string, std::string>;

struct ExperimentResult {
  Table data;
  Table report;
  std::vector<std::string> notes;
};

struct Experiment {
  std::string name;
  std::string description;
  std::string anchor;  // which theorem / identity the measurement probes
  Config defaults;
  ExperimentResult (*run)(const Config&);
};

const std::vector<Experiment>& experiment_catalog();

// nullptr when no such experiment exists.
const Experiment* find_experiment(const std::string& name);

// Defaults overlaid with overrides. An override key absent from the defaults
// (other than "out") is rejected with a diagnostic naming the key.
Config merge_config(const Experiment& e, const Config& overrides);

// Output directory resolution: config key "out", else environment variable
// PILAB_OUT, else "./out".
std::string resolve_outdir(const Config& cfg);

// Run and write artifacts; returns the paths written (data, report, sidecar).
std::vector<std::string> run_experiment(const Experiment& e, const Config& cfg,
                                        const std::string& outdir);

}  // namespace pilab
