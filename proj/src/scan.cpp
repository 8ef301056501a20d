#include "netcov/scan.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <regex>
#include <thread>

#include "netcov/baselines.hpp"
#include "netcov/error.hpp"
#include "netcov/io.hpp"
#include "netcov/witnesses.hpp"

namespace netcov {

namespace {

[[noreturn]] void bad_spec(const std::string& what) { throw Error(ErrorCode::ParameterRange, "scan: " + what); }

const std::vector<std::string> kTests = {"sdp", "witness-W2N", "finner", "finner-opt", "entropic", "inflation"};

std::vector<double> grid(double lo, double hi, double step) {
  std::vector<double> out;
  const int n = static_cast<int>(std::floor((hi - lo) / step + 1e-9));
  for (int k = 0; k <= n; ++k) out.push_back(lo + k * step);
  return out;
}

template <typename F>
void parallel_for(int count, int jobs, F&& body) {
  if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min(jobs, std::max(1, count));
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next++; k < count; k = next++) body(k);
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < jobs; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

std::string fmt(double x, const char* spec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, spec, x);
  return buf;
}

}  // namespace

ScanSpec scan_spec_from_json(const nlohmann::json& j) {
  ScanSpec s;
  try {
    if (j.contains("family")) {
      std::smatch m;
      const auto family = j.at("family").get<std::string>();
      if (!std::regex_match(family, m, std::regex(R"(pq-(\d+))"))) bad_spec("family must look like pq-N");
      s.parties = std::stoi(m[1]);
    }
    s.topology = j.value("topology", s.topology);
    s.test = j.value("test", s.test);
    const auto mode = j.value("mode", std::string("grid"));
    if (mode != "grid" && mode != "bisection") bad_spec("mode must be grid or bisection");
    s.bisection = mode == "bisection";
    if (j.contains("p")) {
      const auto r = j.at("p").get<std::vector<double>>();
      if (r.size() != 2) bad_spec("p must be [min, max]");
      s.p_min = r[0];
      s.p_max = r[1];
    }
    if (j.contains("q")) {
      const auto r = j.at("q").get<std::vector<double>>();
      if (r.size() != 2) bad_spec("q must be [min, max]");
      s.q_min = r[0];
      s.q_max = r[1];
    }
    s.step = j.value("step", s.step);
    if (j.contains("p_values")) s.p_values = j.at("p_values").get<std::vector<double>>();
    s.tol = j.value("tol", s.tol);
    s.jobs = j.value("jobs", s.jobs);
    s.seed = j.value("seed", s.seed);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Parse, std::string("scan spec: ") + e.what());
  }
  validate(s);
  return s;
}

void validate(const ScanSpec& s) {
  if (s.parties < 2 || s.parties > 12) bad_spec("number of parties must lie in 2..12");
  if (!(s.step > 0.0)) bad_spec("step must be positive");
  if (!(s.tol > 0.0)) bad_spec("tol must be positive");
  auto in_unit = [](double x) { return x >= 0.0 && x <= 1.0; };
  if (!in_unit(s.p_min) || !in_unit(s.p_max) || !in_unit(s.q_min) || !in_unit(s.q_max) ||
      s.p_min > s.p_max || s.q_min > s.q_max) {
    bad_spec("ranges must lie within [0, 1]");
  }
  for (double p : s.p_values) {
    if (!in_unit(p)) bad_spec("p values must lie within [0, 1]");
  }
  if (std::find(kTests.begin(), kTests.end(), s.test) == kTests.end()) bad_spec("unknown test '" + s.test + "'");
  if ((s.test == "entropic" || s.test == "inflation") && s.parties != 3) bad_spec(s.test + " needs three parties");
  if (s.test == "witness-W2N" && s.parties < 3) bad_spec("witness-W2N needs at least three parties");
}

NetworkTopology scan_topology(const ScanSpec& spec) {
  std::smatch m;
  if (spec.topology == "all-bipartite") return all_bipartite(spec.parties);
  if (std::regex_match(spec.topology, m, std::regex(R"(all-(\d+)-partite)"))) {
    return all_k_partite(spec.parties, std::stoi(m[1]));
  }
  NetworkTopology t = io::resolve_topology(spec.topology);
  if (t.num_children() != spec.parties) bad_spec("topology does not have " + std::to_string(spec.parties) + " children");
  return t;
}

CellResult evaluate_cell(const ScanSpec& spec, const NetworkTopology& topology, double p, double q) {
  CellResult cell;
  cell.p = p;
  cell.q = q;
  auto rejector = [&](bool violated, double value) {
    cell.kind = violated ? VerdictKind::Incompatible : VerdictKind::Compatible;
    cell.verdict = violated ? "incompatible" : "not-rejected";
    cell.value = value;
  };
  const DistributionTable dist = pq_distribution(spec.parties, p, q);
  if (spec.test == "sdp") {
    const BlockMatrix c = covariance_from_distribution(dist, FeatureMapSet::canonical(dist));
    const TestVerdict v = primal_feasibility(c, topology, c.layout);
    cell.kind = v.kind;
    cell.verdict = to_string(v.kind);
    cell.value = v.value;
  } else if (spec.test == "witness-W2N") {
    const Witness w = w_2n(spec.parties);
    const BlockMatrix c = covariance_from_distribution(dist, FeatureMapSet::canonical(dist));
    const double value = evaluate(reflect_blocks(w.matrix, w.layout), c.data);
    rejector(value > 1e-9, value);
  } else if (spec.test == "finner") {
    const auto r = finner_indicator(dist);
    rejector(r.violated, r.max_margin);
  } else if (spec.test == "finner-opt") {
    FinnerOptOptions options;
    options.seed = spec.seed;
    const auto r = finner_dichotomic_opt(dist, options);
    rejector(r.violated, r.best_value);
  } else if (spec.test == "entropic") {
    double margin = -std::numeric_limits<double>::infinity();
    bool violated = false;
    for (const auto& c : entropic_test(dist)) {
      margin = std::max(margin, c.lhs - c.rhs);
      violated |= c.violated;
    }
    rejector(violated, margin);
  } else if (spec.test == "inflation") {
    const auto r = inflation_test(dist);
    rejector(r.violated, r.lhs - r.rhs);
  }
  return cell;
}

std::vector<CellResult> run_grid(const ScanSpec& spec) {
  validate(spec);
  const NetworkTopology topology = scan_topology(spec);
  std::vector<std::pair<double, double>> points;
  for (double p : grid(spec.p_min, spec.p_max, spec.step)) {
    for (double q : grid(spec.q_min, spec.q_max, spec.step)) {
      if (p + q <= 1.0 + 1e-12) points.emplace_back(p, std::min(q, 1.0 - p));
    }
  }
  std::vector<CellResult> out(points.size());
  parallel_for(static_cast<int>(points.size()), spec.jobs, [&](int k) {
    out[k] = evaluate_cell(spec, topology, points[k].first, points[k].second);
  });
  return out;
}

std::vector<ThresholdRow> run_bisection(const ScanSpec& spec) {
  validate(spec);
  const NetworkTopology topology = scan_topology(spec);
  const std::vector<double> ps = spec.p_values.empty() ? grid(spec.p_min, spec.p_max, spec.step) : spec.p_values;
  std::vector<ThresholdRow> out(ps.size());
  parallel_for(static_cast<int>(ps.size()), spec.jobs, [&](int k) {
    const double p = ps[k];
    // The edge p + q = 1 is deterministic and therefore compatible, so the
    // search stops a quarter tolerance short of it.
    const double hi = std::max(0.0, 1.0 - p - spec.tol / 4);
    const auto r = bisect_threshold(
        [&](double q) { return evaluate_cell(spec, topology, p, q).kind; }, 0.0, hi, spec.tol);
    out[k] = {p, r.threshold, r.ok};
  });
  return out;
}

void write_scan_csv(const ScanSpec& spec, std::ostream& out) {
  if (spec.bisection) {
    const auto rows = run_bisection(spec);
    out << "p,q_threshold,test\n";
    for (const auto& r : rows) {
      out << fmt(r.p, "%.6g") << ',' << (r.ok ? fmt(r.q_threshold, "%.6f") : std::string("nan")) << ','
          << spec.test << '\n';
    }
  } else {
    const auto cells = run_grid(spec);
    out << "p,q,test,verdict,value\n";
    for (const auto& c : cells) {
      out << fmt(c.p, "%.6g") << ',' << fmt(c.q, "%.6g") << ',' << spec.test << ',' << c.verdict << ','
          << fmt(c.value, "%.10g") << '\n';
    }
  }
}

}  // namespace netcov
