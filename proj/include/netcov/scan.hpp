#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "netcov/net_tests.hpp"
#include "netcov/topology.hpp"

namespace netcov {

/// Grid or per-p bisection over the P^N_pq family.
struct ScanSpec {
  int parties = 3;
  std::string topology = "all-bipartite";  // all-bipartite, all-K-partite, builtin name or file
  std::string test = "sdp";  // sdp, witness-W2N, finner, finner-opt, entropic, inflation
  bool bisection = false;
  double p_min = 0.0, p_max = 1.0;
  double q_min = 0.0, q_max = 1.0;
  double step = 0.05;
  std::vector<double> p_values;  // bisection mode; defaults to the p grid
  double tol = 1e-3;
  int jobs = 0;  // 0 = hardware concurrency
  std::uint64_t seed = 0;
};

/// Reads {"family": "pq-3", "topology": ..., "test": ..., "mode": "grid" |
/// "bisection", "p": [min, max], "q": [min, max], "step": ..., "p_values":
/// [...], "tol": ..., "jobs": ..., "seed": ...}.
ScanSpec scan_spec_from_json(const nlohmann::json& j);
void validate(const ScanSpec& spec);

NetworkTopology scan_topology(const ScanSpec& spec);

struct CellResult {
  double p = 0.0;
  double q = 0.0;
  VerdictKind kind = VerdictKind::Inconclusive;
  std::string verdict;  // "compatible", "incompatible", "inconclusive" or "not-rejected"
  double value = 0.0;
};

/// Runs one test on P^N_pq. Rejection-only tests report "not-rejected"
/// (kind Compatible) when they do not fire.
CellResult evaluate_cell(const ScanSpec& spec, const NetworkTopology& topology, double p, double q);

struct ThresholdRow {
  double p = 0.0;
  double q_threshold = 0.0;
  bool ok = false;
};

std::vector<CellResult> run_grid(const ScanSpec& spec);
std::vector<ThresholdRow> run_bisection(const ScanSpec& spec);

/// Writes the CSV for the spec's mode, header row first.
void write_scan_csv(const ScanSpec& spec, std::ostream& out);

}  // namespace netcov
