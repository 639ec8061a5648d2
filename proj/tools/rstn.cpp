#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rstn/error.hpp"
#include "rstn/families.hpp"
#include "rstn/global_average.hpp"
#include "rstn/holography.hpp"
#include "rstn/io.hpp"
#include "rstn/oracle.hpp"
#include "rstn/report.hpp"

namespace {

using rstn::Error;
using rstn::ErrorKind;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::parse: return 2;
    case ErrorKind::validation:
    case ErrorKind::zero_weight:
    case ErrorKind::not_single_sector:
    case ErrorKind::unsupported: return 3;
    case ErrorKind::size_cap: return 4;
    case ErrorKind::infeasible: return 5;
    default: return 1;
  }
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out, std::ios::binary);
  if (!f) throw Error(ErrorKind::validation, "cannot write '" + out + "'");
  f << text;
}

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<double> out;
  auto number = [&](const std::string& tok) {
    try {
      std::size_t used = 0;
      const double v = std::stod(tok, &used);
      if (used != tok.size()) throw std::invalid_argument(tok);
      return v;
    } catch (const std::exception&) {
      throw Error(ErrorKind::parse, "parse: bad grid value '" + tok + "'");
    }
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    std::string tok;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    if (parts.size() != 3) throw Error(ErrorKind::parse, "parse: grid range must read lo:hi:count");
    const double lo = number(parts[0]), hi = number(parts[1]);
    const int n = static_cast<int>(number(parts[2]));
    if (n < 1) throw Error(ErrorKind::parse, "parse: grid count must be positive");
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return out;
  }
  std::stringstream ss(spec);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(number(tok));
  if (out.empty()) throw Error(ErrorKind::parse, "parse: empty grid");
  return out;
}

std::string normalize_param(const std::string& p) {
  if (p == "ν" || p == "nu") return "nu";
  return p;
}

rstn::ScenarioDocument load(const std::string& path, const std::string& mode) {
  rstn::ScenarioDocument doc = rstn::load_scenario(path);
  if (!mode.empty()) {
    const rstn::Mode m = rstn::parse_mode(mode);
    doc.scenario.mode = m;
    if (doc.family) doc.family->mode = m;
  }
  return doc;
}

// Unknown or inapplicable parameter names fail before any point is evaluated.
void check_params(const rstn::ScenarioDocument& doc, const std::vector<std::string>& names) {
  for (const auto& n : names) {
    if (n == "c_n") {
      if (doc.scenario.n_sectors() < 2) throw Error(ErrorKind::validation, "sweep: c_n needs at least two sectors");
      continue;
    }
    if (!doc.family) throw Error(ErrorKind::validation, "sweep: parameter '" + n + "' needs a family scenario");
    rstn::FamilyParams f = *doc.family;
    rstn::set_parameter(f, n, 0.5);
  }
}

rstn::Scenario apply_point(const rstn::ScenarioDocument& doc, const std::vector<std::string>& names,
                           const std::vector<double>& values) {
  std::optional<double> weight;
  rstn::Scenario s;
  if (doc.family) {
    rstn::FamilyParams f = *doc.family;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] == "c_n" && f.name != "two_sector")
        weight = values[i];
      else
        rstn::set_parameter(f, names[i], values[i]);
    }
    s = rstn::build_family(f);
  } else {
    s = doc.scenario;
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (names[i] != "c_n")
        throw Error(ErrorKind::validation, "sweep: parameter '" + names[i] + "' needs a family scenario");
      weight = values[i];
    }
  }
  if (weight) s = rstn::set_weight_parameter(s, *weight);
  rstn::validate_state(s);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random spin tensor network purity analysis"};
  app.require_subcommand(1);

  std::string file, out, mode;
  bool terms = false, csv = false, allow_override = false;
  int vertex_cap = 24;

  auto* analyze = app.add_subcommand("analyze", "Purity, dim H_C, ratio, P, Q and ground configurations");
  analyze->add_option("file", file, "Scenario JSON")->required();
  analyze->add_option("--mode", mode, "exact or high_spin");
  analyze->add_option("--out", out, "Output path");
  analyze->add_flag("--terms", terms, "Include every (m, n, sigma, variant) term");
  analyze->add_flag("--csv", csv, "Emit the term table as CSV instead of the JSON report");
  analyze->add_option("--vertex-cap", vertex_cap, "Enumeration cap on vertices");
  analyze->add_flag("--allow-override", allow_override, "Beyond the cap, use minimum-cut ground states");

  auto* solve = app.add_subcommand("solve-weights", "Sector weights with holographic purity");
  solve->add_option("file", file, "Scenario JSON")->required();
  solve->add_option("--mode", mode, "exact or high_spin");
  solve->add_option("--out", out, "Output path");

  std::vector<std::string> params, grids;
  auto* sweep = app.add_subcommand("sweep", "Purity and ratio over a parameter grid (CSV)");
  sweep->add_option("file", file, "Scenario JSON")->required();
  sweep->add_option("--param", params, "Parameter: s-scale, a, d, w, b, u, v, nu, c_n (repeatable)")->required();
  sweep->add_option("--grid", grids, "lo:hi:count or v1,v2,... (one per --param)")->required();
  sweep->add_option("--mode", mode, "exact or high_spin");
  sweep->add_option("--out", out, "Output CSV path");

  std::string method = "exact";
  long samples = 5000;
  std::uint64_t seed = 1;
  auto* oracle = app.add_subcommand("oracle", "Engine purity against an independent oracle");
  oracle->add_option("file", file, "Scenario JSON")->required();
  oracle->add_option("--method", method, "exact or mc")->check(CLI::IsMember({"exact", "mc"}));
  oracle->add_option("--samples", samples, "Monte Carlo samples");
  oracle->add_option("--seed", seed, "Monte Carlo seed");
  oracle->add_option("--out", out, "Output path");

  int n_outer = 0, n_a = 0;
  double core_purity = 1.0;
  std::optional<int> jmin, jmax;
  std::optional<double> h;
  auto* global = app.add_subcommand("global", "Global average over all vertex states");
  global->add_option("--n-outer", n_outer, "Outer boundary link count")->required();
  global->add_option("--n-a", n_a, "Links in region A")->required();
  global->add_option("--core-purity", core_purity, "Purity of the core state");
  global->add_option("--jmin", jmin, "Lower cutoff (twice-spin)");
  global->add_option("--jmax", jmax, "Upper cutoff (twice-spin)");
  global->add_option("--dim-h", h, "Per-link dimension h, instead of cutoffs");
  global->add_option("--out", out, "Output path");

  auto* validate = app.add_subcommand("validate", "Parse and validate a scenario");
  validate->add_option("file", file, "Scenario JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*analyze) {
      const auto doc = load(file, mode);
      const rstn::EngineOptions opt{vertex_cap, allow_override};
      if (csv)
        emit(rstn::terms_csv(doc.scenario, opt), out);
      else
        emit(rstn::analyze_report(doc, terms, opt).dump(2) + "\n", out);
    } else if (*solve) {
      const auto doc = load(file, mode);
      const auto w = rstn::solve_weights(doc.scenario);
      const double ratio = rstn::holography_report(rstn::with_weights(doc.scenario, w.c)).ratio;
      emit(rstn::weights_report(doc, w, ratio).dump(2) + "\n", out);
    } else if (*sweep) {
      const auto doc = load(file, mode);
      if (params.size() != grids.size()) throw Error(ErrorKind::parse, "parse: one --grid is required per --param");
      for (auto& p : params) p = normalize_param(p);
      check_params(doc, params);
      std::vector<std::vector<double>> axes;
      for (const auto& g : grids) axes.push_back(parse_grid(g));
      std::vector<rstn::SweepRow> rows;
      std::vector<std::size_t> idx(axes.size(), 0);
      while (true) {
        std::vector<double> point;
        for (std::size_t k = 0; k < axes.size(); ++k) point.push_back(axes[k][idx[k]]);
        try {
          const rstn::Scenario s = apply_point(doc, params, point);
          const auto rep = rstn::holography_report(s);
          rows.push_back({point, rep.purity, rep.ratio, s.mode});
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::validation) throw;
          std::cerr << "skipping point: " << e.what() << "\n";
        }
        std::size_t k = axes.size();
        while (k > 0 && ++idx[k - 1] == axes[k - 1].size()) idx[--k] = 0;
        if (k == 0) break;
      }
      emit(rstn::sweep_csv(params, rows), out);
    } else if (*oracle) {
      const auto doc = load(file, "exact");
      const double engine = rstn::purity(doc.scenario);
      if (method == "exact") {
        const auto r = rstn::exact_oracle_purity(doc.scenario);
        emit(rstn::oracle_report(doc, method, engine, r.purity, 0.0, 0, 0).dump(2) + "\n", out);
      } else {
        const auto r = rstn::mc_haar_purity(doc.scenario, samples, seed);
        emit(rstn::oracle_report(doc, method, engine, r.estimate, r.stderr_, samples, seed).dump(2) + "\n", out);
      }
    } else if (*global) {
      rstn::GlobalAvgInput in{n_outer, n_a, core_purity, 1.0};
      if (h) {
        in.h = *h;
      } else {
        if (!jmin || !jmax) throw Error(ErrorKind::validation, "global: give --dim-h or both --jmin and --jmax");
        in.h = rstn::cutoff_dimension(rstn::TwiceSpin{*jmin}, rstn::TwiceSpin{*jmax});
      }
      rstn::validate_global(in);
      emit(rstn::global_report(in).dump(2) + "\n", out);
    } else if (*validate) {
      const auto doc = rstn::load_scenario(file);
      std::cout << "ok " << rstn::content_hash(doc.text) << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
