#include "netcov/io.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "netcov/error.hpp"
#include "netcov/quantum.hpp"

namespace netcov::io {

namespace {

[[noreturn]] void schema(const std::string& what) { throw Error(ErrorCode::Parse, what); }

template <typename T>
T get(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) schema(where + ": missing field '" + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    schema(where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace

json parse_json(const std::string& text, const std::string& source) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t k = 0; k < end; ++k) {
      if (text[k] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string msg = e.what();
    const auto pos = msg.find("parse error");
    if (pos != std::string::npos) msg = msg.substr(pos);
    throw Error(ErrorCode::Parse, source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " + msg);
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write '" + path + "'");
  out << contents;
  if (!out) throw Error(ErrorCode::Io, "write to '" + path + "' failed");
}

json load_json(const std::string& path) { return parse_json(read_file(path), path); }

NetworkTopology topology_from_json(const json& j) {
  if (!j.is_object()) schema("topology: expected an object");
  NetworkTopology t;
  const auto children = j.contains("children") ? j.at("children") : json::array();
  if (!children.is_array()) schema("topology: 'children' must be an array");
  std::map<std::string, int> index;
  for (const auto& c : children) {
    const std::string name = c.is_string() ? c.get<std::string>() : get<std::string>(c, "name", "topology child");
    if (index.count(name)) throw Error(ErrorCode::DuplicateVertex, "duplicate child '" + name + "'");
    index[name] = t.num_children();
    t.children.push_back(name);
  }
  const auto parents = j.contains("parents") ? j.at("parents") : json::array();
  if (!parents.is_array()) schema("topology: 'parents' must be an array");
  for (const auto& p : parents) {
    const auto name = get<std::string>(p, "name", "topology parent");
    t.parents.push_back(name);
    std::vector<int> kids;
    for (const auto& c : get<std::vector<std::string>>(p, "children", "parent '" + name + "'")) {
      const auto it = index.find(c);
      if (it == index.end()) {
        throw Error(ErrorCode::DanglingChildReference, "parent '" + name + "' references unknown child '" + c + "'");
      }
      kids.push_back(it->second);
    }
    t.children_of.push_back(std::move(kids));
  }
  validate(t);
  return t;
}

json topology_to_json(const NetworkTopology& t) {
  json j;
  j["children"] = json::array();
  for (const auto& c : t.children) j["children"].push_back({{"name", c}});
  j["parents"] = json::array();
  for (int n = 0; n < t.num_parents(); ++n) {
    json kids = json::array();
    for (int m : t.children_of[n]) kids.push_back(t.children[m]);
    j["parents"].push_back({{"name", t.parents[n]}, {"children", kids}});
  }
  return j;
}

NetworkTopology resolve_topology(const std::string& name_or_path) {
  if (std::filesystem::exists(name_or_path)) {
    const json j = load_json(name_or_path);
    try {
      return topology_from_json(j);
    } catch (const Error& e) {
      throw Error(e.code(), name_or_path + ": " + e.what());
    }
  }
  return topology_by_name(name_or_path);
}

DistributionTable distribution_from_json(const json& j) {
  const auto outcomes = get<std::vector<int>>(j, "outcomes", "distribution");
  const auto settings = j.contains("settings") ? get<std::vector<int>>(j, "settings", "distribution")
                                               : std::vector<int>(outcomes.size(), 1);
  DistributionTable d(settings, outcomes);
  const auto& table = j.contains("table") ? j.at("table") : json();
  if (!table.is_array()) schema("distribution: 'table' must be an array");
  std::vector<char> seen(d.data().size(), 0);
  for (std::size_t k = 0; k < table.size(); ++k) {
    const auto& row = table[k];
    const std::string where = "distribution table entry " + std::to_string(k);
    const auto x = get<std::vector<int>>(row, "x", where);
    const auto s = row.contains("s") ? get<std::vector<int>>(row, "s", where) : std::vector<int>(outcomes.size(), 0);
    const double p = get<double>(row, "p", where);
    int st = 0, ot = 0;
    try {
      st = d.encode_settings(s);
      ot = d.encode_outcomes(x);
    } catch (const Error& e) {
      throw Error(ErrorCode::InvalidDistribution, where + ": " + e.what());
    }
    const std::size_t flat = static_cast<std::size_t>(st) * d.num_outcome_tuples() + ot;
    if (seen[flat]) throw Error(ErrorCode::InvalidDistribution, where + ": duplicate entry");
    seen[flat] = 1;
    d.at(st, ot) = p;
  }
  d.validate(1e-9);
  return d;
}

json distribution_to_json(const DistributionTable& d) {
  json j;
  j["settings"] = d.settings();
  j["outcomes"] = d.outcomes();
  j["table"] = json::array();
  for (int st = 0; st < d.num_setting_tuples(); ++st) {
    for (int ot = 0; ot < d.num_outcome_tuples(); ++ot) {
      const double p = d.at(st, ot);
      if (p == 0.0) continue;
      j["table"].push_back({{"s", d.decode_settings(st)}, {"x", d.decode_outcomes(ot)}, {"p", p}});
    }
  }
  return j;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array()) schema("matrix: expected an array of rows");
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!j[i].is_array() || static_cast<Eigen::Index>(j[i].size()) != n) schema("matrix: rows must form a square array");
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!j[i][k].is_number()) schema("matrix: entries must be numbers");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

namespace {

json complex_to_json(const ComplexMatrix& m) {
  json out = {{"real", matrix_to_json(m.real())}};
  if (m.imag().cwiseAbs().maxCoeff() > 0.0) out["imag"] = matrix_to_json(m.imag());
  return out;
}

}  // namespace

json verdict_to_json(const TestVerdict& v, bool include_certificate) {
  json j;
  j["verdict"] = to_string(v.kind);
  j["value"] = v.value;
  if (v.kind == VerdictKind::Incompatible && v.witness.size()) j["witness"] = matrix_to_json(v.witness);
  if (!v.reason.empty()) j["reason"] = v.reason;
  j["tolerances"] = {{"tau", sdp::kTau}, {"eps_psd", sdp::kEpsPsd}, {"eps_eq", sdp::kEpsEq}};
  if (include_certificate && v.certificate) {
    json cert;
    cert["R"] = complex_to_json(v.certificate->R);
    cert["C"] = json::array();
    for (const auto& c : v.certificate->C) cert["C"].push_back(complex_to_json(c));
    cert["completion"] = complex_to_json(v.certificate->completion);
    j["certificate"] = cert;
  }
  return j;
}

json witness_to_json(const Witness& w) {
  json dims = json::array();
  for (const auto& b : w.layout.blocks()) dims.push_back(b.dim);
  return {{"topology", w.topology_name},
          {"network", topology_to_json(w.topology)},
          {"convention", to_string(w.convention)},
          {"dims", dims},
          {"matrix", matrix_to_json(w.matrix)}};
}

Witness witness_from_json(const json& j) {
  Witness w;
  w.matrix = matrix_from_json(j.contains("matrix") ? j.at("matrix") : json());
  if (j.contains("network")) {
    w.topology = topology_from_json(j.at("network"));
    w.topology_name = j.value("topology", std::string("custom"));
  } else {
    w.topology_name = get<std::string>(j, "topology", "witness");
    w.topology = topology_by_name(w.topology_name);
  }
  std::vector<int> dims;
  if (j.contains("dims")) {
    dims = get<std::vector<int>>(j, "dims", "witness");
  } else {
    dims.assign(w.topology.num_children(), 2);
  }
  w.layout = BlockLayout::single_setting(dims);
  if (w.layout.total_dim() != w.matrix.rows()) {
    throw Error(ErrorCode::DimensionMismatch, "witness: matrix size does not match block dimensions");
  }
  const auto convention = j.value("convention", std::string("direct"));
  if (convention == "direct") {
    w.convention = Convention::Direct;
  } else if (convention == "reflected") {
    w.convention = Convention::Reflected;
  } else {
    schema("witness: unknown convention '" + convention + "'");
  }
  return w;
}

json finner_indicator_report(const FinnerIndicatorResult& r) {
  return {{"name", "finner"}, {"violated", r.violated}, {"margin", r.max_margin},
          {"parameters", {{"exponent", 0.5}, {"argmax", r.argmax}}}};
}

json finner_opt_report(const FinnerOptResult& r, const FinnerOptOptions& options) {
  return {{"name", "finner-opt"}, {"violated", r.violated}, {"margin", r.best_value},
          {"parameters",
           {{"deltas", r.best_deltas}, {"restarts", options.restarts}, {"sweeps", options.sweeps},
            {"seed", options.seed}}}};
}

json entropic_report(const std::vector<EntropicCheck>& checks) {
  bool violated = false;
  double margin = -std::numeric_limits<double>::infinity();
  json detail = json::array();
  for (const auto& c : checks) {
    violated |= c.violated;
    margin = std::max(margin, c.lhs - c.rhs);
    detail.push_back({{"center", c.center}, {"lhs", c.lhs}, {"rhs", c.rhs}, {"violated", c.violated}});
  }
  return {{"name", "entropic"}, {"violated", violated}, {"margin", margin}, {"parameters", {{"inequalities", detail}}}};
}

json inflation_report(const InflationResult& r) {
  return {{"name", "inflation"}, {"violated", r.violated}, {"margin", r.lhs - r.rhs},
          {"parameters", {{"E1", r.e1}, {"E2", r.e2}, {"lhs", r.lhs}, {"rhs", r.rhs}}}};
}

DistributionTable simulate_scenario(const json& scenario) {
  const auto name = get<std::string>(scenario, "scenario", "scenario");
  if (name == "ghz") return quantum::distribution(quantum::ghz_state());
  if (name == "singlet") return quantum::conditional_distribution(quantum::singlet());
  if (name == "w-state") {
    return quantum::conditional_distribution(quantum::w_state(get<double>(scenario, "visibility", "w-state")));
  }
  if (name == "pr-mixture") return quantum::pr_box_mixture(get<double>(scenario, "visibility", "pr-mixture"));
  if (name == "random-realization") {
    const auto topology = resolve_topology(scenario.value("topology", std::string("triangle")));
    const auto seed = scenario.value("seed", std::uint64_t{0});
    const int settings = scenario.value("settings", 1);
    const int outcomes = scenario.value("outcomes", 2);
    return quantum::conditional_distribution(quantum::random_realization(topology, seed, settings, outcomes));
  }
  throw Error(ErrorCode::ParameterRange, "unknown scenario '" + name + "'");
}

}  // namespace netcov::io
