#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rstn/global_average.hpp"
#include "rstn/holography.hpp"
#include "rstn/io.hpp"
#include "rstn/ising.hpp"
#include "rstn/oracle.hpp"

namespace rstn {

// FNV-1a 64-bit hash of the input text, as 16 hex digits.
std::string content_hash(const std::string& text);

std::string config_string(IsingConfig sigma, int n_vertices);  // "+-+" with vertex 0 first

nlohmann::json moded(double value, Mode mode);

nlohmann::json analyze_report(const ScenarioDocument& doc, bool with_terms, EngineOptions options = {});
nlohmann::json weights_report(const ScenarioDocument& doc, const WeightSolution& w, double ratio);
nlohmann::json oracle_report(const ScenarioDocument& doc, const std::string& method, double engine_purity,
                             double oracle_value, double oracle_stderr, long samples, std::uint64_t seed);
nlohmann::json global_report(const GlobalAvgInput& in);

std::string terms_csv(const Scenario& s, EngineOptions options = {});

struct SweepRow {
  std::vector<double> parameters;
  double purity = 0.0;
  double ratio = 0.0;
  Mode mode = Mode::exact;
};

std::string sweep_csv(const std::vector<std::string>& parameters, const std::vector<SweepRow>& rows);

std::string format_double(double v);

}  // namespace rstn
