#include "rstn/report.hpp"

#include <cmath>
#include <cstdio>

namespace rstn {

using nlohmann::json;

std::string content_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string config_string(IsingConfig sigma, int n_vertices) {
  std::string out;
  for (int x = 0; x < n_vertices; ++x) out += ((sigma >> x) & 1u) ? '-' : '+';
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json moded(double value, Mode mode) {
  json out = {{"mode", to_string(mode)}};
  if (std::isfinite(value))
    out["value"] = value;
  else
    out["value"] = std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
  return out;
}

namespace {

json log_weight_json(LogWeight w, Mode mode) { return moded(w.log(), mode); }

json matrix_json(const Eigen::MatrixXd& M) {
  json rows = json::array();
  for (long i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (long j = 0; j < M.cols(); ++j) row.push_back(M(i, j));
    rows.push_back(row);
  }
  return rows;
}

json header(const ScenarioDocument& doc) {
  json out;
  out["input_hash"] = content_hash(doc.text);
  if (doc.family) out["family"] = family_to_json(*doc.family);
  out["mode"] = to_string(doc.scenario.mode);
  return out;
}

}  // namespace

json analyze_report(const ScenarioDocument& doc, bool with_terms, EngineOptions options) {
  const Scenario& s = doc.scenario;
  const Mode mode = s.mode;
  IsingModel model(s, options);
  const PurityResult pr = analyze_purity(model, mode);
  const std::uint64_t dim = dim_boundary_region(s, s.region_C);
  const int K = s.n_sectors(), N = s.graph.n_vertices;

  json out = header(doc);
  out["purity"] = moded(pr.purity, mode);
  out["dim_C"] = dim;
  out["ratio"] = moded(pr.purity * static_cast<double>(dim), mode);
  out["log_Z0"] = log_weight_json(pr.z0, mode);
  out["log_Z1"] = log_weight_json(pr.z1, mode);
  json weights = json::array();
  for (int m = 0; m < K; ++m) weights.push_back({{"sector", m}, {"log_K", log_weight_json(pr.weights[m], mode)}});
  out["sector_weights"] = weights;
  out["P"] = {{"mode", to_string(mode)}, {"matrix", matrix_json(pr.P)}};

  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(K, K);
  json pairs = json::array();
  for (int m = 0; m < K; ++m)
    for (int n = 0; n < K; ++n) {
      const auto& p = pr.pairs[m * K + n];
      if (!p.z0.is_zero()) Q(m, n) = (p.z1 / p.z0).value() * static_cast<double>(dim);
      json row = {{"m", m},
                  {"n", n},
                  {"log_Z0", log_weight_json(p.z0, mode)},
                  {"log_Z1", log_weight_json(p.z1, mode)},
                  {"ground_energy_0", moded(p.ground_energy_0, mode)},
                  {"ground_energy_1", moded(p.ground_energy_1, mode)},
                  {"ground_config_0", config_string(p.ground_config_0, N)},
                  {"ground_config_1", config_string(p.ground_config_1, N)},
                  {"degeneracy_0", p.degeneracy_0},
                  {"degeneracy_1", p.degeneracy_1}};
      pairs.push_back(row);
    }
  out["pairs"] = pairs;
  out["Q"] = {{"mode", to_string(mode)}, {"matrix", matrix_json(Q)}};

  if (with_terms) {
    json terms = json::array();
    for (int m = 0; m < K; ++m)
      for (int n = 0; n < K; ++n)
        for (const auto& t : model.terms(m, n))
          terms.push_back({{"m", t.m},
                           {"n", t.n},
                           {"sigma", config_string(t.sigma, N)},
                           {"variant", t.variant},
                           {"energy", moded(t.energy, Mode::exact)}});
    out["terms"] = terms;
  }
  return out;
}

json weights_report(const ScenarioDocument& doc, const WeightSolution& w, double ratio) {
  json out = header(doc);
  out["c"] = w.c;
  out["residual"] = moded(w.residual, doc.scenario.mode);
  out["method"] = w.method;
  out["ratio_with_weights"] = moded(ratio, doc.scenario.mode);
  return out;
}

json oracle_report(const ScenarioDocument& doc, const std::string& method, double engine_purity, double oracle_value,
                   double oracle_stderr, long samples, std::uint64_t seed) {
  json out = header(doc);
  out["method"] = method;
  out["engine_purity"] = moded(engine_purity, Mode::exact);
  out["oracle_purity"] = moded(oracle_value, Mode::exact);
  out["discrepancy"] = std::abs(engine_purity - oracle_value);
  if (method == "mc") {
    out["stderr"] = oracle_stderr;
    out["samples"] = samples;
    out["seed"] = seed;
    out["sigmas"] = oracle_stderr > 0.0 ? std::abs(engine_purity - oracle_value) / oracle_stderr : 0.0;
  } else {
    out["relative_discrepancy"] = std::abs(engine_purity - oracle_value) / std::abs(engine_purity);
  }
  return out;
}

json global_report(const GlobalAvgInput& in) {
  const GlobalEntropy e = global_entropy(in);
  return {{"n_outer", in.n_outer},
          {"n_A", in.n_A},
          {"core_purity", in.core_purity},
          {"h", in.h},
          {"purity", global_purity(in)},
          {"entropy", e.entropy},
          {"min_approximation", e.min_approximation},
          {"gap", e.gap}};
}

std::string terms_csv(const Scenario& s, EngineOptions options) {
  IsingModel model(s, options);
  std::string out = "m,n,sigma,variant,energy\n";
  for (int m = 0; m < s.n_sectors(); ++m)
    for (int n = 0; n < s.n_sectors(); ++n)
      for (const auto& t : model.terms(m, n))
        out += std::to_string(t.m) + "," + std::to_string(t.n) + "," + config_string(t.sigma, s.graph.n_vertices) + "," +
               std::to_string(t.variant) + "," + format_double(t.energy) + "\n";
  return out;
}

std::string sweep_csv(const std::vector<std::string>& parameters, const std::vector<SweepRow>& rows) {
  std::string out;
  for (const auto& p : parameters) out += p + ",";
  out += "purity,ratio,mode\n";
  for (const auto& r : rows) {
    for (double v : r.parameters) out += format_double(v) + ",";
    out += format_double(r.purity) + "," + format_double(r.ratio) + "," + to_string(r.mode) + "\n";
  }
  return out;
}

}  // namespace rstn
