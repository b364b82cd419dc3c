#include "graphflow/io.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace graphflow {

using nlohmann::json;

namespace {

[[noreturn]] void config_fail(const std::string& where, const std::string& what) {
  throw ConfigError("config error at " + where + ": " + what);
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         const std::set<std::string>& allowed) {
  if (!obj.is_object()) config_fail(where, "expected an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) config_fail(where, "unknown key '" + key + "'");
}

double require_number(const json& obj, const std::string& where, const std::string& key) {
  if (!obj.contains(key)) config_fail(where, "missing key '" + key + "'");
  if (!obj.at(key).is_number()) config_fail(where + "." + key, "expected a number");
  return obj.at(key).get<double>();
}

double number_or(const json& obj, const std::string& key, double fallback) {
  if (!obj.contains(key)) return fallback;
  return obj.at(key).get<double>();
}

Norm parse_norm(const json& obj, const std::string& where) {
  const std::string s = obj.value("norm", "euclidean");
  if (s == "euclidean") return Norm::euclidean;
  if (s == "one_norm") return Norm::one_norm;
  config_fail(where, "norm must be 'euclidean' or 'one_norm'");
}

SquareMatrix parse_matrix(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) config_fail(where, "expected a nonempty 2-d array");
  const std::size_t n = j.size();
  SquareMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!j[i].is_array() || j[i].size() != n) config_fail(where, "matrix must be square");
    for (std::size_t k = 0; k < n; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

json matrix_to_json(const SquareMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.size(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

KernelSpec parse_kernel(const json& j, const std::string& where) {
  if (!j.is_object()) config_fail(where, "expected an object");
  const std::string form = j.value("form", "");
  KernelSpec spec;
  if (form == "tent") {
    reject_unknown_keys(j, where, {"form", "c1", "c2", "norm", "sign"});
    spec = KernelSpec::tent(require_number(j, where, "c1"), require_number(j, where, "c2"),
                            parse_norm(j, where));
  } else if (form == "log_quad") {
    reject_unknown_keys(j, where, {"form", "a", "b", "norm", "sign"});
    spec = KernelSpec::log_quad(require_number(j, where, "a"), require_number(j, where, "b"),
                                parse_norm(j, where));
  } else if (form == "trunc_log_quad") {
    reject_unknown_keys(j, where, {"form", "a", "b", "s", "norm", "sign"});
    spec = KernelSpec::trunc_log_quad(require_number(j, where, "a"),
                                      require_number(j, where, "b"),
                                      require_number(j, where, "s"), parse_norm(j, where));
  } else if (form == "exp_scaled") {
    reject_unknown_keys(j, where, {"form", "c", "norm", "sign"});
    spec = KernelSpec::exp_scaled(require_number(j, where, "c"), parse_norm(j, where));
  } else if (form == "abs_scaled") {
    reject_unknown_keys(j, where, {"form", "c", "norm", "sign"});
    spec = KernelSpec::abs_scaled(require_number(j, where, "c"), parse_norm(j, where));
  } else if (form == "constant") {
    reject_unknown_keys(j, where, {"form", "c", "sign"});
    spec = KernelSpec::constant(require_number(j, where, "c"));
  } else if (form == "matrix") {
    reject_unknown_keys(j, where, {"form", "values", "csv", "sign"});
    if (j.contains("values") == j.contains("csv"))
      config_fail(where, "matrix kernel needs exactly one of 'values' or 'csv'");
    SquareMatrix m = j.contains("values") ? parse_matrix(j.at("values"), where + ".values")
                                          : load_matrix_csv(j.at("csv").get<std::string>());
    spec = KernelSpec::explicit_matrix(std::move(m));
  } else {
    config_fail(where, "unknown kernel form '" + form + "'");
  }
  spec.sign = number_or(j, "sign", 1.0);
  return spec;
}

json kernel_to_json(const KernelSpec& k) {
  json j;
  switch (k.form) {
    case KernelSpec::Form::tent:
      j = {{"form", "tent"}, {"c1", k.c1}, {"c2", k.c2}};
      break;
    case KernelSpec::Form::log_quad:
      j = {{"form", "log_quad"}, {"a", k.a}, {"b", k.b}};
      break;
    case KernelSpec::Form::trunc_log_quad:
      j = {{"form", "trunc_log_quad"}, {"a", k.a}, {"b", k.b}, {"s", k.s}};
      break;
    case KernelSpec::Form::exp_scaled:
      j = {{"form", "exp_scaled"}, {"c", k.c}};
      break;
    case KernelSpec::Form::abs_scaled:
      j = {{"form", "abs_scaled"}, {"c", k.c}};
      break;
    case KernelSpec::Form::constant:
      j = {{"form", "constant"}, {"c", k.c}};
      break;
    case KernelSpec::Form::matrix:
      j = {{"form", "matrix"}, {"values", matrix_to_json(k.matrix)}};
      break;
  }
  if (k.form != KernelSpec::Form::constant && k.form != KernelSpec::Form::matrix)
    j["norm"] = k.norm == Norm::euclidean ? "euclidean" : "one_norm";
  j["sign"] = k.sign;
  return j;
}

Mobility parse_mobility(const json& j, const std::string& where) {
  reject_unknown_keys(j, where, {"theta1", "theta2"});
  Mobility m;
  m.theta1 = number_or(j, "theta1", 1.0);
  m.theta2 = number_or(j, "theta2", 0.0);
  m.validate();
  return m;
}

}  // namespace

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string content_hash(const std::string& bytes) {
  const std::string blob = "blob " + std::to_string(bytes.size()) + '\0' + bytes;
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(blob.data(), blob.size(), digest, &len, EVP_sha1(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

SquareMatrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open matrix CSV: " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ConfigError("empty matrix CSV: " + path);
  SquareMatrix m(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != rows.size())
      throw ConfigError("matrix CSV is not square: " + path);
    for (std::size_t k = 0; k < rows.size(); ++k) m(i, k) = rows[i][k];
  }
  return m;
}

RunConfig RunConfig::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
  return from_json(std::move(j), path);
}

RunConfig RunConfig::from_json(json j, const std::string& source_path) {
  RunConfig c;
  reject_unknown_keys(j, "<top>",
                      {"graph", "kernels", "params", "initial_state", "scenario", "twopoint",
                       "minimize", "output", "seed", "out_dir"});
  c.raw = std::move(j);
  c.source_path = source_path;
  if (c.raw.contains("seed")) {
    if (!c.raw.at("seed").is_number_unsigned() && !c.raw.at("seed").is_number_integer())
      config_fail("seed", "expected an integer");
    c.seed = c.raw.at("seed").get<std::uint64_t>();
  }
  c.out_dir = c.raw.value("out_dir", "out");
  if (c.raw.contains("output")) {
    reject_unknown_keys(c.raw.at("output"), "output", {"stride"});
    c.output_stride = c.raw.at("output").value("stride", 1);
    if (c.output_stride < 0) config_fail("output.stride", "must be >= 0");
  }
  return c;
}

FiniteGraph RunConfig::graph() const {
  if (!raw.contains("graph")) config_fail("graph", "section missing");
  const json& g = raw.at("graph");
  reject_unknown_keys(g, "graph", {"positions", "weights", "eta"});
  return graph_from_json(g);
}

FiniteGraph graph_from_json(const json& g) {
  if (!g.contains("positions") || !g.at("positions").is_array())
    config_fail("graph.positions", "expected an array of points");
  std::vector<std::vector<double>> pos;
  for (const auto& p : g.at("positions")) {
    if (p.is_number())
      pos.push_back({p.get<double>()});  // allow bare scalars in 1-d
    else
      pos.push_back(p.get<std::vector<double>>());
  }
  if (!g.contains("weights")) config_fail("graph.weights", "missing");
  auto weights = g.at("weights").get<std::vector<double>>();

  EtaSpec spec;
  if (!g.contains("eta")) config_fail("graph.eta", "missing");
  const json& e = g.at("eta");
  if (e.is_array()) {
    spec = EtaSpec::explicit_matrix(parse_matrix(e, "graph.eta"));
  } else if (e.is_object()) {
    const std::string rule = e.value("rule", "");
    if (rule == "complete") {
      reject_unknown_keys(e, "graph.eta", {"rule"});
      spec = EtaSpec::complete();
    } else if (rule == "cutoff") {
      reject_unknown_keys(e, "graph.eta", {"rule", "r", "norm"});
      spec = EtaSpec::cutoff(require_number(e, "graph.eta", "r"), parse_norm(e, "graph.eta"));
    } else {
      config_fail("graph.eta.rule", "must be 'complete' or 'cutoff'");
    }
  } else {
    config_fail("graph.eta", "expected a matrix or a rule object");
  }
  try {
    return build_graph(std::move(pos), std::move(weights), spec);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("graph: ") + err.what());
  }
}

json graph_to_json(const FiniteGraph& g) {
  json positions = json::array();
  for (const auto& p : g.positions) positions.push_back(p);
  return {{"positions", positions}, {"weights", g.weights}, {"eta", matrix_to_json(g.eta)}};
}

KernelSet RunConfig::kernels(const FiniteGraph& g) const {
  if (!raw.contains("kernels")) config_fail("kernels", "section missing");
  const json& k = raw.at("kernels");
  reject_unknown_keys(k, "kernels", {"k11", "k22", "k12"});
  for (const char* key : {"k11", "k22", "k12"})
    if (!k.contains(key)) config_fail("kernels", std::string("missing '") + key + "'");
  try {
    return evaluate(parse_kernel(k.at("k11"), "kernels.k11"),
                    parse_kernel(k.at("k22"), "kernels.k22"),
                    parse_kernel(k.at("k12"), "kernels.k12"), g);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("kernels: ") + err.what());
  }
}

DynamicsParams RunConfig::params() const {
  DynamicsParams p;
  if (!raw.contains("params")) return p;
  const json& j = raw.at("params");
  reject_unknown_keys(j, "params",
                      {"p", "beta", "mobility", "dt_max", "cfl_safety", "stationarity_tol",
                       "t_end"});
  p.p = number_or(j, "p", p.p);
  if (j.contains("beta")) {
    const auto b = j.at("beta").get<std::vector<double>>();
    if (b.size() != 2) config_fail("params.beta", "expected two entries");
    p.beta = {b[0], b[1]};
  }
  if (j.contains("mobility")) p.mobility = parse_mobility(j.at("mobility"), "params.mobility");
  p.dt_max = number_or(j, "dt_max", p.dt_max);
  p.cfl_safety = number_or(j, "cfl_safety", p.cfl_safety);
  p.stationarity_tol = number_or(j, "stationarity_tol", p.stationarity_tol);
  p.t_end = number_or(j, "t_end", p.t_end);
  try {
    p.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("params: ") + err.what());
  }
  return p;
}

SpeciesState RunConfig::initial_state(const FiniteGraph& g) const {
  if (!raw.contains("initial_state")) config_fail("initial_state", "section missing");
  const json& j = raw.at("initial_state");
  reject_unknown_keys(j, "initial_state", {"u", "random"});
  if (j.contains("u") == j.value("random", false))
    config_fail("initial_state", "provide either 'u' or 'random': true");
  if (j.value("random", false)) return random_initial_state(g, seed);

  const auto rows = j.at("u").get<std::vector<std::vector<double>>>();
  if (rows.size() != 2 || rows[0].size() != g.size() || rows[1].size() != g.size())
    config_fail("initial_state.u", "expected a 2 x N array matching the graph");
  SpeciesState s;
  s.u[0] = rows[0];
  s.u[1] = rows[1];
  const auto v = validate_state(s, g, std::numeric_limits<double>::infinity());
  if (!v.nonnegative || !v.normalized)
    config_fail("initial_state.u", "not a probability state: " + v.message);
  return s;
}

Scenario RunConfig::scenario() const {
  if (!raw.contains("scenario")) config_fail("scenario", "section missing");
  const json& j = raw.at("scenario");
  reject_unknown_keys(j, "scenario",
                      {"name", "r1", "r2", "alpha", "delta", "cutoff_r", "eps", "beta2", "n",
                       "truncated", "volume_filling", "p", "t_end", "dt_max"});
  if (!j.contains("name")) config_fail("scenario.name", "missing");
  std::vector<std::pair<std::string, double>> params;
  for (const auto& [key, value] : j.items()) {
    if (key == "name") continue;
    if (key == "truncated" || key == "volume_filling") {
      params.emplace_back(key, value.get<bool>() ? 1.0 : 0.0);
    } else {
      if (!value.is_number()) config_fail("scenario." + key, "expected a number");
      params.emplace_back(key, value.get<double>());
    }
  }
  try {
    return make_scenario(j.at("name").get<std::string>(), params, seed);
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("scenario: ") + err.what());
  }
}

TwoPointProblem RunConfig::twopoint_problem() const {
  if (!raw.contains("twopoint")) config_fail("twopoint", "section missing");
  const json& j = raw.at("twopoint");
  reject_unknown_keys(j, "twopoint",
                      {"D11", "D22", "D12", "beta", "p", "mobility", "grid_n", "verify"});
  TwoPointProblem p;
  p.D11 = require_number(j, "twopoint", "D11");
  p.D22 = require_number(j, "twopoint", "D22");
  p.D12 = require_number(j, "twopoint", "D12");
  if (j.contains("beta")) {
    const auto b = j.at("beta").get<std::vector<double>>();
    if (b.size() != 2) config_fail("twopoint.beta", "expected two entries");
    p.beta = {b[0], b[1]};
  }
  p.p = number_or(j, "p", 2.0);
  if (j.contains("mobility")) p.mobility = parse_mobility(j.at("mobility"), "twopoint.mobility");
  try {
    p.validate();
  } catch (const std::invalid_argument& err) {
    throw ConfigError(std::string("twopoint: ") + err.what());
  }
  return p;
}

int RunConfig::twopoint_grid_n() const {
  const int n = raw.contains("twopoint") ? raw.at("twopoint").value("grid_n", 41) : 41;
  if (n < 2) config_fail("twopoint.grid_n", "must be >= 2");
  return n;
}

bool RunConfig::twopoint_verify() const {
  return raw.contains("twopoint") ? raw.at("twopoint").value("verify", true) : true;
}

int RunConfig::minimize_resolution() const {
  if (!raw.contains("minimize")) config_fail("minimize", "section missing");
  reject_unknown_keys(raw.at("minimize"), "minimize", {"resolution"});
  const int r = raw.at("minimize").value("resolution", 50);
  if (r < 1) config_fail("minimize.resolution", "must be >= 1");
  return r;
}

nlohmann::json RunConfig::resolved_json() const {
  json j = raw;
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  j["output"] = {{"stride", output_stride}};
  return j;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

std::string stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::reached_t_end: return "reached_t_end";
    case StopReason::stationary: return "stationary";
    case StopReason::observer_stop: return "observer_stop";
    case StopReason::dt_underflow: return "dt_underflow";
    case StopReason::negative_density: return "negative_density";
  }
  return "?";
}

std::string trajectory_csv(const Trajectory& traj, const FiniteGraph& graph) {
  std::string out = "t,species,vertex,u,mass\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const std::string t = format_double(traj.times[k]);
    for (int i = 0; i < 2; ++i)
      for (std::size_t v = 0; v < graph.size(); ++v) {
        const double u = traj.states[k].u[i][v];
        out += t;
        out += ',';
        out += std::to_string(i + 1);
        out += ',';
        out += std::to_string(v);
        out += ',';
        out += format_double(u);
        out += ',';
        out += format_double(u * graph.weights[v]);
        out += '\n';
      }
  }
  return out;
}

json diagnostics_json(const IntegrationResult& result, const FiniteGraph& graph) {
  (void)graph;
  const Trajectory& traj = result.trajectory;
  json times = json::array(), energy = json::array(), mass = json::array(),
       com = json::array(), diss = json::array(), sup = json::array();
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const Diagnostics& d = traj.diagnostics[k];
    times.push_back(traj.times[k]);
    energy.push_back(d.energy);
    mass.push_back({d.mass[0], d.mass[1]});
    com.push_back({d.com[0], d.com[1]});
    diss.push_back(d.dissipation);
    sup.push_back(d.dudt_sup);
  }
  return {{"times", times},
          {"energy", energy},
          {"mass", mass},
          {"center_of_mass", com},
          {"dissipation", diss},
          {"dudt_sup", sup},
          {"stop_reason", stop_reason_name(result.reason)},
          {"final_time", result.final_time},
          {"steps", result.steps},
          {"message", result.message}};
}

json classification_json(const TwoPointClassification& c) {
  json states = json::array();
  for (const auto& s : c.states) {
    json pts = json::array();
    for (const auto& p : s.points) pts.push_back({p[0], p[1]});
    json entry = {{"tag", to_string(s.tag)},
                  {"stability", to_string(s.stability)},
                  {"points", pts},
                  {"energy_rel_a", s.energy_rel_a}};
    if (s.is_family) {
      entry["family"] = {{"origin", {s.origin[0], s.origin[1]}},
                         {"direction", {s.direction[0], s.direction[1]}},
                         {"r_min", s.r_min},
                         {"r_max", s.r_max},
                         {"planar", s.planar}};
    }
    states.push_back(entry);
  }
  return {{"decoupled", c.decoupled},
          {"degenerate", c.degenerate},
          {"boundary_flags", c.boundary_flags},
          {"states", states}};
}

std::string portrait_csv(const std::vector<PortraitRecord>& records) {
  std::string out = "x,y,E,dxdt,dydt\n";
  for (const auto& r : records) {
    out += format_double(r.x);
    out += ',';
    out += format_double(r.y);
    out += ',';
    out += format_double(r.energy);
    out += ',';
    out += format_double(r.dudt1);
    out += ',';
    out += format_double(r.dudt2);
    out += '\n';
  }
  return out;
}

std::string stationary_states_csv(const TwoPointClassification& c) {
  std::string out = "tag,stability,x,y\n";
  for (const auto& s : c.states) {
    const auto emit = [&](double x, double y) {
      out += to_string(s.tag);
      out += ',';
      out += to_string(s.stability);
      out += ',';
      out += format_double(x);
      out += ',';
      out += format_double(y);
      out += '\n';
    };
    if (s.is_family && !s.planar) {
      constexpr int kSamples = 33;
      for (int k = 0; k < kSamples; ++k)
        emit(s.family_point(s.r_min + (s.r_max - s.r_min) * k / (kSamples - 1))[0],
             s.family_point(s.r_min + (s.r_max - s.r_min) * k / (kSamples - 1))[1]);
    } else {
      for (const auto& p : s.points) emit(p[0], p[1]);
    }
  }
  return out;
}

json minimize_json(const MinimizeResult& r) {
  return {{"energy", r.energy},
          {"masses", {r.masses[0], r.masses[1]}},
          {"u", {r.state.u[0], r.state.u[1]}}};
}

json check_json(const AggregationReport& agg, const SegregationReport& seg) {
  return {{"aggregation",
           {{"case_a", agg.case_a},
            {"case_b", {agg.case_b[0], agg.case_b[1]}},
            {"case_c", agg.case_c},
            {"cross_sign", agg.cross_sign},
            {"boundary", agg.boundary}}},
          {"segregation",
           {{"holds", seg.holds},
            {"boundary", seg.boundary},
            {"lhs", seg.lhs},
            {"rhs", seg.rhs}}}};
}

json manifest_json(const std::string& command, const RunConfig& config,
                   const std::vector<std::string>& outputs) {
  const json resolved = config.resolved_json();
  return {{"command", command},
          {"config", resolved},
          {"config_hash", content_hash(resolved.dump())},
          {"seed", config.seed},
          {"outputs", outputs}};
}

}  // namespace graphflow
