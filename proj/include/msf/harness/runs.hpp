#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "msf/harness/config.hpp"

namespace msf::harness {

struct RunOutput {
  std::vector<std::string> files;  // paths written, in order
  nlohmann::json report;
  bool passed = true;  // only verify can fail
  std::vector<std::string> summary;  // one line per check, verify only
};

/// levels.csv and splitting.csv (levels against l, with the Landau reference).
RunOutput run_spectrum(const RunConfig& cfg);
/// orbit.csv and report.json for the configured classical orbit.
RunOutput run_classical(const RunConfig& cfg);
/// report.json with means and variances, lattice.txt and columns.csv.
RunOutput run_coherent(const RunConfig& cfg);
/// trajectory.csv, classical_overlay.csv, spread.csv and report.json.
RunOutput run_evolve(const RunConfig& cfg);
/// report.json with one entry per criterion and invariant.
RunOutput run_verify(const RunConfig& cfg);
/// sweep.csv over the configured grid, rows sorted by (j, mu, |z1|, |z2|).
RunOutput run_sweep(const RunConfig& cfg);

RunOutput run_scenario(const RunConfig& cfg);

}  // namespace msf::harness
