#pragma once

#include <string>

#include "json.hpp"
#include "netcov/baselines.hpp"
#include "netcov/covariance.hpp"
#include "netcov/net_tests.hpp"
#include "netcov/topology.hpp"
#include "netcov/witnesses.hpp"

namespace netcov::io {

using json = nlohmann::json;

/// Parses JSON text; syntax errors become Error{Parse} with
/// "source:line:column: message".
json parse_json(const std::string& text, const std::string& source);
json load_json(const std::string& path);
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

NetworkTopology topology_from_json(const json& j);
json topology_to_json(const NetworkTopology& t);
/// A builtin name ("triangle", "ring-4", ...) or a path to a topology file.
NetworkTopology resolve_topology(const std::string& name_or_path);

DistributionTable distribution_from_json(const json& j);
/// Sparse form: zero entries are omitted.
json distribution_to_json(const DistributionTable& d);

json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json verdict_to_json(const TestVerdict& v, bool include_certificate = false);

json witness_to_json(const Witness& w);
Witness witness_from_json(const json& j);

json finner_indicator_report(const FinnerIndicatorResult& r);
json finner_opt_report(const FinnerOptResult& r, const FinnerOptOptions& options);
json entropic_report(const std::vector<EntropicCheck>& checks);
json inflation_report(const InflationResult& r);

/// {"scenario": "ghz" | "w-state" | "pr-mixture" | "singlet" |
///  "random-realization", ...parameters}
DistributionTable simulate_scenario(const json& scenario);

}  // namespace netcov::io
