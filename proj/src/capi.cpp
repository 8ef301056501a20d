#include "netcov/netcov.h"

#include <cstdlib>
#include <cstring>
#include <sstream>
#include <string>

#include "netcov/baselines.hpp"
#include "netcov/error.hpp"
#include "netcov/io.hpp"
#include "netcov/net_tests.hpp"
#include "netcov/scan.hpp"
#include "netcov/witnesses.hpp"

struct netcov_topology {
  netcov::NetworkTopology value;
};
struct netcov_distribution {
  netcov::DistributionTable value;
};
struct netcov_verdict {
  netcov::TestVerdict value;
};

namespace {

using netcov::ErrorCode;
using json = nlohmann::json;

thread_local std::string g_last_error;

netcov_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse:
      return NETCOV_ERR_PARSE;
    case ErrorCode::Io:
      return NETCOV_ERR_IO;
    case ErrorCode::ParameterRange:
    case ErrorCode::IndexOutOfRange:
      return NETCOV_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch:
    case ErrorCode::DimensionCapExceeded:
      return NETCOV_ERR_DIMENSION;
    default:
      return NETCOV_ERR_INVALID_INPUT;
  }
}

template <typename F>
netcov_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return NETCOV_OK;
  } catch (const netcov::Error& e) {
    g_last_error = std::string(netcov::to_string(e.code())) + ": " + e.what();
    return map_code(e.code());
  } catch (const json::exception& e) {
    g_last_error = std::string("Parse: ") + e.what();
    return NETCOV_ERR_PARSE;
  } catch (const std::exception& e) {
    g_last_error = std::string("internal: ") + e.what();
    return NETCOV_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "internal: unknown exception";
    return NETCOV_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (!p) throw netcov::Error(ErrorCode::ParameterRange, std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

// Schema errors from a file carry the path as well.
template <typename F>
auto from_file(const char* path, F&& convert) {
  const auto j = netcov::io::load_json(path);
  try {
    return convert(j);
  } catch (const netcov::Error& e) {
    throw netcov::Error(e.code(), std::string(path) + ": " + e.what());
  }
}

netcov::BlockMatrix covariance_for(const netcov::DistributionTable& d) {
  const auto maps = netcov::FeatureMapSet::canonical(d);
  return d.is_joint() ? netcov::covariance_from_distribution(d, maps)
                      : netcov::observable_covariance(d, maps);
}

}  // namespace

extern "C" {

const char* netcov_last_error(void) { return g_last_error.c_str(); }

void netcov_string_free(char* s) { std::free(s); }

netcov_status netcov_topology_parse(const char* text, netcov_topology** out) {
  return guarded([&] {
    require(text, "json");
    require(out, "out");
    *out = new netcov_topology{netcov::io::topology_from_json(netcov::io::parse_json(text, "<topology>"))};
  });
}

netcov_status netcov_topology_load(const char* path, netcov_topology** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new netcov_topology{from_file(path, netcov::io::topology_from_json)};
  });
}

netcov_status netcov_topology_builtin(const char* name, netcov_topology** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = new netcov_topology{netcov::topology_by_name(name)};
  });
}

netcov_status netcov_topology_to_json(const netcov_topology* t, char** out) {
  return guarded([&] {
    require(t, "topology");
    require(out, "out");
    *out = dup_string(netcov::io::topology_to_json(t->value).dump(2));
  });
}

void netcov_topology_free(netcov_topology* t) { delete t; }

netcov_status netcov_distribution_parse(const char* text, netcov_distribution** out) {
  return guarded([&] {
    require(text, "json");
    require(out, "out");
    *out = new netcov_distribution{
        netcov::io::distribution_from_json(netcov::io::parse_json(text, "<distribution>"))};
  });
}

netcov_status netcov_distribution_load(const char* path, netcov_distribution** out) {
  return guarded([&] {
    require(path, "path");
    require(out, "out");
    *out = new netcov_distribution{from_file(path, netcov::io::distribution_from_json)};
  });
}

netcov_status netcov_distribution_to_json(const netcov_distribution* d, char** out) {
  return guarded([&] {
    require(d, "distribution");
    require(out, "out");
    *out = dup_string(netcov::io::distribution_to_json(d->value).dump(2));
  });
}

void netcov_distribution_free(netcov_distribution* d) { delete d; }

netcov_status netcov_test(const netcov_distribution* d, const netcov_topology* t, double tau,
                          netcov_verdict** out) {
  return guarded([&] {
    require(d, "distribution");
    require(t, "topology");
    require(out, "out");
    netcov::TestOptions options;
    if (tau > 0.0) options.tau = tau;
    const auto maps = netcov::FeatureMapSet::canonical(d->value);
    *out = new netcov_verdict{netcov::test_distribution(d->value, t->value, maps, options)};
  });
}

netcov_verdict_kind netcov_verdict_get_kind(const netcov_verdict* v) {
  if (!v) return NETCOV_INCONCLUSIVE;
  switch (v->value.kind) {
    case netcov::VerdictKind::Compatible:
      return NETCOV_COMPATIBLE;
    case netcov::VerdictKind::Incompatible:
      return NETCOV_INCOMPATIBLE;
    default:
      return NETCOV_INCONCLUSIVE;
  }
}

double netcov_verdict_get_value(const netcov_verdict* v) { return v ? v->value.value : 0.0; }

netcov_status netcov_verdict_to_json(const netcov_verdict* v, int include_certificate, char** out) {
  return guarded([&] {
    require(v, "verdict");
    require(out, "out");
    *out = dup_string(netcov::io::verdict_to_json(v->value, include_certificate != 0).dump(2));
  });
}

void netcov_verdict_free(netcov_verdict* v) { delete v; }

netcov_status netcov_witness_emit(const char* name, int parties, char** out_json) {
  return guarded([&] {
    require(name, "name");
    require(out_json, "out");
    const std::string n = name;
    netcov::Witness w;
    if (n == "ghz") {
      w = netcov::w_ghz();
    } else if (n == "w2n") {
      w = netcov::w_2n(parties);
    } else {
      throw netcov::Error(ErrorCode::ParameterRange, "unknown witness '" + n + "'");
    }
    *out_json = dup_string(netcov::io::witness_to_json(w).dump(2));
  });
}

netcov_status netcov_witness_validate(const char* witness_json, double tol, int* valid,
                                      double* violation) {
  return guarded([&] {
    require(witness_json, "witness");
    const auto w = netcov::io::witness_from_json(netcov::io::parse_json(witness_json, "<witness>"));
    const double v = netcov::witness_violation(w.matrix, w.topology, w.layout);
    if (valid) *valid = v <= tol ? 1 : 0;
    if (violation) *violation = v;
  });
}

netcov_status netcov_witness_evaluate(const char* witness_json, const netcov_distribution* d,
                                      double* value) {
  return guarded([&] {
    require(witness_json, "witness");
    require(d, "distribution");
    require(value, "value");
    const auto w = netcov::io::witness_from_json(netcov::io::parse_json(witness_json, "<witness>"));
    const auto c = covariance_for(d->value);
    if (c.layout.total_dim() != w.layout.total_dim()) {
      throw netcov::Error(ErrorCode::DimensionMismatch, "witness and covariance sizes differ");
    }
    const netcov::Matrix cm = w.convention == netcov::Convention::Reflected
                                  ? netcov::reflect_blocks(c.data, c.layout)
                                  : c.data;
    *value = netcov::evaluate(w.matrix, cm);
  });
}

netcov_status netcov_simulate(const char* scenario_json, netcov_distribution** out) {
  return guarded([&] {
    require(scenario_json, "scenario");
    require(out, "out");
    *out = new netcov_distribution{
        netcov::io::simulate_scenario(netcov::io::parse_json(scenario_json, "<scenario>"))};
  });
}

netcov_status netcov_baseline(const char* name, const netcov_distribution* d, uint64_t seed,
                              char** out_json, int* rejected) {
  return guarded([&] {
    require(name, "name");
    require(d, "distribution");
    require(out_json, "out");
    const std::string n = name;
    json report;
    bool hit = false;
    if (n == "finner") {
      const auto r = netcov::finner_indicator(d->value);
      report = netcov::io::finner_indicator_report(r);
      hit = r.violated;
    } else if (n == "finner-opt") {
      netcov::FinnerOptOptions options;
      options.seed = seed;
      const auto r = netcov::finner_dichotomic_opt(d->value, options);
      report = netcov::io::finner_opt_report(r, options);
      hit = r.violated;
    } else if (n == "entropic") {
      const auto checks = netcov::entropic_test(d->value);
      report = netcov::io::entropic_report(checks);
      for (const auto& c : checks) hit |= c.violated;
    } else if (n == "inflation") {
      const auto r = netcov::inflation_test(d->value);
      report = netcov::io::inflation_report(r);
      hit = r.violated;
    } else {
      throw netcov::Error(ErrorCode::ParameterRange, "unknown baseline '" + n + "'");
    }
    *out_json = dup_string(report.dump(2));
    if (rejected) *rejected = hit ? 1 : 0;
  });
}

netcov_status netcov_scan(const char* spec_json, char** out_csv) {
  return guarded([&] {
    require(spec_json, "spec");
    require(out_csv, "out");
    const auto spec = netcov::scan_spec_from_json(netcov::io::parse_json(spec_json, "<scan spec>"));
    std::ostringstream csv;
    netcov::write_scan_csv(spec, csv);
    *out_csv = dup_string(csv.str());
  });
}

}  // extern "C"
