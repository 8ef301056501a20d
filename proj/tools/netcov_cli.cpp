// netcov command-line front end. Talks to the library only through the C API.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "netcov/netcov.h"

namespace {

using json = nlohmann::json;

constexpr int kExitCompatible = 0;
constexpr int kExitIncompatible = 1;
constexpr int kExitError = 2;

struct Failure {
  std::string message;
};

void check(netcov_status s) {
  if (s != NETCOV_OK) throw Failure{netcov_last_error()};
}

struct StringDeleter {
  void operator()(char* s) const { netcov_string_free(s); }
};
using OwnedString = std::unique_ptr<char, StringDeleter>;

struct TopologyDeleter {
  void operator()(netcov_topology* t) const { netcov_topology_free(t); }
};
struct DistributionDeleter {
  void operator()(netcov_distribution* d) const { netcov_distribution_free(d); }
};
struct VerdictDeleter {
  void operator()(netcov_verdict* v) const { netcov_verdict_free(v); }
};
using Topology = std::unique_ptr<netcov_topology, TopologyDeleter>;
using Distribution = std::unique_ptr<netcov_distribution, DistributionDeleter>;
using Verdict = std::unique_ptr<netcov_verdict, VerdictDeleter>;

Topology open_topology(const std::string& name_or_path) {
  netcov_topology* t = nullptr;
  if (std::filesystem::exists(name_or_path)) {
    check(netcov_topology_load(name_or_path.c_str(), &t));
  } else {
    check(netcov_topology_builtin(name_or_path.c_str(), &t));
  }
  return Topology(t);
}

Distribution open_distribution(const std::string& path) {
  netcov_distribution* d = nullptr;
  check(netcov_distribution_load(path.c_str(), &d));
  return Distribution(d);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Failure{"cannot read " + path};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Empty path means stdout.
void emit(const std::string& text, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path);
  if (!out) throw Failure{"cannot write " + path};
  out << text;
  if (!text.empty() && text.back() != '\n') out << '\n';
  if (!out) throw Failure{"write failed: " + path};
}

struct Globals {
  double tol = 1e-3;
  int jobs = 0;
  std::uint64_t seed = 0;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Network compatibility tests from outcome covariances"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--tol", g.tol, "Bisection tolerance")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--seed", g.seed, "Seed for randomized components")->capture_default_str();

  // test
  auto* test = app.add_subcommand("test", "Test a distribution against a network");
  std::string dist_path, topology_arg = "triangle", out_path;
  double tau = 0.0;
  bool with_cert = false;
  test->add_option("distribution", dist_path, "Distribution JSON file")->required();
  test->add_option("topology", topology_arg, "Topology file or builtin name")->capture_default_str();
  test->add_option("--tau", tau, "Verdict margin (default 1e-6)");
  test->add_flag("--certificate", with_cert, "Include the decomposition certificate");
  test->add_option("-o,--output", out_path, "Output file (default stdout)");

  // scan
  auto* scan = app.add_subcommand("scan", "Scan the P^N_pq family");
  std::string spec_path, family = "pq-3", scan_topology = "all-bipartite", scan_test = "sdp";
  bool bisection = false;
  std::vector<double> p_range{0.0, 1.0}, q_range{0.0, 1.0}, p_values;
  double step = 0.05;
  scan->add_option("--spec", spec_path, "Scan spec JSON (flags below are ignored when given)");
  scan->add_option("--family", family, "Family, pq-N")->capture_default_str();
  scan->add_option("--topology", scan_topology, "all-bipartite, all-K-partite, builtin or file")
      ->capture_default_str();
  scan->add_option("--test", scan_test, "sdp, witness-W2N, finner, finner-opt, entropic, inflation")
      ->capture_default_str();
  scan->add_flag("--bisection", bisection, "Per-p threshold search instead of a grid");
  scan->add_option("--p-range", p_range, "p min and max")->expected(2);
  scan->add_option("--q-range", q_range, "q min and max")->expected(2);
  scan->add_option("--p-values", p_values, "Explicit p values for bisection");
  scan->add_option("--step", step, "Grid step")->capture_default_str();
  scan->add_option("-o,--output", out_path, "CSV output file (default stdout)");

  // witness
  auto* witness = app.add_subcommand("witness", "Witness tooling");
  witness->require_subcommand(1);
  auto* w_emit = witness->add_subcommand("emit", "Write a known witness");
  std::string witness_name, witness_path;
  int parties = 3;
  w_emit->add_option("name", witness_name, "ghz or w2n")->required()->check(CLI::IsMember({"ghz", "w2n"}));
  w_emit->add_option("-n,--parties", parties, "Parties for w2n")->capture_default_str();
  w_emit->add_option("-o,--output", out_path, "Output file (default stdout)");
  auto* w_validate = witness->add_subcommand("validate", "Check the constraint blocks");
  double witness_tol = 1e-10;
  w_validate->add_option("witness", witness_path, "Witness JSON file")->required();
  w_validate->add_option("--eps", witness_tol, "Eigenvalue tolerance")->capture_default_str();
  auto* w_eval = witness->add_subcommand("evaluate", "Tr(W C) for a distribution");
  w_eval->add_option("witness", witness_path, "Witness JSON file")->required();
  w_eval->add_option("distribution", dist_path, "Distribution JSON file")->required();

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Generate a distribution from a quantum scenario");
  std::string scenario;
  std::vector<std::string> scenario_args;
  std::string sim_topology = "triangle";
  int settings = 1, outcomes = 2;
  simulate->add_option("scenario", scenario, "ghz, singlet, w-state, pr-mixture, random-realization")
      ->required();
  simulate->add_option("args", scenario_args, "Visibility, or seed for random-realization");
  simulate->add_option("--topology", sim_topology, "Topology for random-realization")->capture_default_str();
  simulate->add_option("--settings", settings, "Settings per child for random-realization")
      ->capture_default_str();
  simulate->add_option("--outcomes", outcomes, "Outcomes per child for random-realization")
      ->capture_default_str();
  simulate->add_option("-o,--output", out_path, "Output file (default stdout)");

  // baseline
  auto* baseline = app.add_subcommand("baseline", "Run a baseline test");
  std::string baseline_name;
  baseline->add_option("name", baseline_name, "finner, finner-opt, entropic, inflation")
      ->required()
      ->check(CLI::IsMember({"finner", "finner-opt", "entropic", "inflation"}));
  baseline->add_option("distribution", dist_path, "Distribution JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (*test) {
      Topology t = open_topology(topology_arg);
      Distribution d = open_distribution(dist_path);
      netcov_verdict* raw = nullptr;
      check(netcov_test(d.get(), t.get(), tau, &raw));
      Verdict v(raw);
      char* text = nullptr;
      check(netcov_verdict_to_json(v.get(), with_cert ? 1 : 0, &text));
      emit(OwnedString(text).get(), out_path);
      switch (netcov_verdict_get_kind(v.get())) {
        case NETCOV_COMPATIBLE:
          return kExitCompatible;
        case NETCOV_INCOMPATIBLE:
          return kExitIncompatible;
        default:
          return kExitError;
      }
    }

    if (*scan) {
      json spec;
      if (!spec_path.empty()) {
        spec = json::parse(read_text(spec_path), nullptr, false);
        if (spec.is_discarded()) throw Failure{spec_path + ": invalid JSON"};
      } else {
        spec = {{"family", family}, {"topology", scan_topology}, {"test", scan_test},
                {"mode", bisection ? "bisection" : "grid"}, {"p", p_range}, {"q", q_range},
                {"step", step}};
        if (!p_values.empty()) spec["p_values"] = p_values;
      }
      // Global flags apply unless the spec file sets them.
      if (!spec.contains("tol")) spec["tol"] = g.tol;
      if (!spec.contains("jobs")) spec["jobs"] = g.jobs;
      if (!spec.contains("seed")) spec["seed"] = g.seed;
      if (spec.contains("output") && out_path.empty()) out_path = spec["output"].get<std::string>();
      spec.erase("output");
      if (!out_path.empty() && out_path != "-") {
        // Fail before the scan runs rather than after.
        std::ofstream probe(out_path, std::ios::app);
        if (!probe) throw Failure{"cannot write " + out_path};
      }
      char* csv = nullptr;
      check(netcov_scan(spec.dump().c_str(), &csv));
      emit(OwnedString(csv).get(), out_path);
      return 0;
    }

    if (*witness) {
      if (*w_emit) {
        char* text = nullptr;
        check(netcov_witness_emit(witness_name.c_str(), parties, &text));
        emit(OwnedString(text).get(), out_path);
        return 0;
      }
      const std::string w = read_text(witness_path);
      if (*w_validate) {
        int valid = 0;
        double violation = 0.0;
        check(netcov_witness_validate(w.c_str(), witness_tol, &valid, &violation));
        emit(json{{"valid", valid != 0}, {"max_block_eigenvalue", violation}}.dump(2), "");
        return valid ? 0 : 1;
      }
      Distribution d = open_distribution(dist_path);
      double value = 0.0;
      check(netcov_witness_evaluate(w.c_str(), d.get(), &value));
      emit(json{{"value", value}, {"violated", value > 0.0}}.dump(2), "");
      return 0;
    }

    if (*simulate) {
      json s{{"scenario", scenario}};
      if (scenario == "w-state" || scenario == "pr-mixture") {
        if (scenario_args.size() != 1) throw Failure{scenario + " takes one visibility argument"};
        s["visibility"] = std::stod(scenario_args[0]);
      } else if (scenario == "random-realization") {
        if (scenario_args.size() > 1) throw Failure{"random-realization takes at most a seed"};
        s["seed"] = scenario_args.empty() ? g.seed : std::stoull(scenario_args[0]);
        s["topology"] = sim_topology;
        s["settings"] = settings;
        s["outcomes"] = outcomes;
      } else if (!scenario_args.empty()) {
        throw Failure{scenario + " takes no arguments"};
      }
      netcov_distribution* raw = nullptr;
      check(netcov_simulate(s.dump().c_str(), &raw));
      Distribution d(raw);
      char* text = nullptr;
      check(netcov_distribution_to_json(d.get(), &text));
      emit(OwnedString(text).get(), out_path);
      return 0;
    }

    if (*baseline) {
      Distribution d = open_distribution(dist_path);
      char* text = nullptr;
      int rejected = 0;
      check(netcov_baseline(baseline_name.c_str(), d.get(), g.seed, &text, &rejected));
      emit(OwnedString(text).get(), "");
      return rejected ? kExitIncompatible : kExitCompatible;
    }
  } catch (const Failure& f) {
    std::cerr << "netcov: " << f.message << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "netcov: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
