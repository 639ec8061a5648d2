// One PASS/FAIL line per acceptance criterion, with measured values and runtime.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "rstn/error.hpp"
#include "rstn/families.hpp"
#include "rstn/global_average.hpp"
#include "rstn/holography.hpp"
#include "rstn/ising.hpp"
#include "rstn/observables.hpp"
#include "rstn/oracle.hpp"
#include "support/appendix_c_forms.hpp"
#include "support/generators.hpp"

namespace {

using namespace rstn;

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (dt >= budget_s) {
    o.pass = false;
    o.detail += "; over runtime budget";
  }
  if (!o.pass) ++failures;
  std::printf("%s %2d %s: %s [%.2f s / %.0f s]\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str(), dt, budget_s);
  std::fflush(stdout);
}

AppendixCParams coherent(int twice_s) {
  AppendixCParams p{.twice_s = twice_s};
  p.a = 0.3;
  p.d = 0.2;
  p.b = {0.05, 0.0};
  p.u = {0.1, 0.0};
  p.v = {0.05, 0.0};
  return p;
}

testgen::SixSums engine_sums(const AppendixCParams& p) {
  const Scenario s = appendix_c(p);
  IsingModel model(s);
  auto z = [&](int m, int n, bool one) {
    const SectorPairResult r = model.partition_pair(m, n, Mode::exact);
    return (one ? r.z1 : r.z0).value();
  };
  return {z(0, 0, false), z(1, 1, false), z(0, 1, false), z(0, 0, true), z(1, 1, true), z(0, 1, true)};
}

double max_rel(const testgen::SixSums& a, const testgen::SixSums& b, std::string* worst = nullptr) {
  const double d[6] = {testgen::rel_diff(a.z0jj, b.z0jj), testgen::rel_diff(a.z0kk, b.z0kk),
                       testgen::rel_diff(a.z0jk, b.z0jk), testgen::rel_diff(a.z1jj, b.z1jj),
                       testgen::rel_diff(a.z1kk, b.z1kk), testgen::rel_diff(a.z1jk, b.z1jk)};
  const char* names[6] = {"Z0jj", "Z0kk", "Z0jk", "Z1jj", "Z1kk", "Z1jk"};
  int k = 0;
  for (int i = 1; i < 6; ++i)
    if (d[i] > d[k]) k = i;
  if (worst) *worst = names[k];
  return d[k];
}

Outcome c1_partition_sums() {
  Outcome o;
  std::ostringstream ss;
  double worst_printed = 0.0, worst_derived = 0.0;
  std::string worst_name;
  for (int s2 : {4, 20, 100})
    for (const AppendixCParams& p : {AppendixCParams{.twice_s = s2}, coherent(s2)}) {
      const auto eng = engine_sums(p);
      std::string name;
      const double dp = max_rel(eng, testgen::appendix_c_printed(p), &name);
      if (dp > worst_printed) {
        worst_printed = dp;
        worst_name = name + " at s=" + std::to_string(s2 / 2);
      }
      worst_derived = std::max(worst_derived, max_rel(eng, testgen::appendix_c_derived(p)));
    }
  o.pass = worst_printed <= 1e-12;
  ss << "printed forms max rel diff " << fmt("%.3g", worst_printed) << " (" << worst_name
     << "); row-consistent forms max rel diff " << fmt("%.3g", worst_derived);
  o.detail = ss.str();
  return o;
}

Outcome c2_asymptotic() {
  Outcome o;
  std::ostringstream ss;
  for (double w : {0.2, 0.5, 0.8}) {
    double res[2];
    int i = 0;
    for (int s : {100, 1000}) {
      AppendixCParams p{.twice_s = 2 * s};
      p.a = p.d = (1.0 - w) / 2.0;
      const double two_term = (2 * w * w - 2 * w + 1) / (6.0 * s) + std::pow(1 - 2 * w, 3) / (36.0 * s * s);
      res[i++] = std::abs(purity(appendix_c(p)) - two_term);
    }
    const double bound = 10.0 * res[0] * 1e-3;
    if (!(res[1] <= bound)) o.pass = false;
    ss << "w=" << w << ": r(1000)=" << fmt("%.3g", res[1]) << " vs bound " << fmt("%.3g", bound) << "; ";
  }
  o.detail = ss.str();
  return o;
}

struct MinResult {
  double value, a, d;
};

MinResult minimize_purity(int twice_s, const std::string& region) {
  auto f = [&](double a, double d) -> double {
    if (a < 0 || d < 0 || a + d <= 1e-9 || a + d >= 1 - 1e-9) return INFINITY;
    AppendixCParams p{.twice_s = twice_s};
    p.a = a;
    p.d = d;
    p.region = region;
    return purity(appendix_c(p));
  };
  MinResult best{INFINITY, 0, 0};
  for (int i = 1; i < 50; ++i)
    for (int k = 1; i + k < 50; ++k) {
      const double v = f(i / 50.0, k / 50.0);
      if (v < best.value) best = {v, i / 50.0, k / 50.0};
    }
  for (double step = 0.01; step > 1e-5; step /= 2) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (auto [da, dd] : {std::pair{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}}) {
        const double a = best.a + da * step, d = best.d + dd * step;
        const double v = f(a, d);
        if (v < best.value) {
          best = {v, a, d};
          moved = true;
        }
      }
    }
  }
  return best;
}

Outcome c3_minimum() {
  Outcome o;
  std::ostringstream ss;
  const int s = 50;
  struct Target {
    const char* region;
    double value, a, d;
  };
  for (const Target& t : {Target{"x_link", 1.0 / (12.0 * s), 0.25, 0.25},
                          Target{"upper_right", 1.0 / (2.0 * s + 1), 1.0 / 3, 1.0 / 3}}) {
    const MinResult m = minimize_purity(2 * s, t.region);
    const double w = 1 - m.a - m.d, tw = 1 - t.a - t.d;
    const double dist = std::max({std::abs(m.a - t.a), std::abs(m.d - t.d), std::abs(w - tw)});
    const double rel = std::abs(m.value / t.value - 1);
    if (!(rel <= 0.03 && dist <= 0.05)) o.pass = false;
    ss << t.region << ": min " << fmt("%.6g", m.value) << " (target " << fmt("%.6g", t.value) << ", rel "
       << fmt("%.3g", rel) << ") at (" << fmt("%.3f", m.a) << "," << fmt("%.3f", m.d) << "," << fmt("%.3f", w)
       << "); ";
  }
  o.detail = ss.str();
  return o;
}

Outcome c4_two_sector() {
  Outcome o;
  std::ostringstream ss;
  for (double nu : {0.25, 0.5, 0.75})
    for (int twice_s : {103, nu == 0.5 ? 2001 : 1999}) {
      TwoSectorParams tp;
      tp.twice_s = twice_s;
      tp.twice_t = twice_for_ratio(twice_s, nu);
      const Scenario s = two_sector(tp);
      const WeightSolution w = solve_weights(s);
      const double target = 1.0 / (1.0 + std::pow(nu, -5));
      const double ratio = holography_report(with_weights(s, w.c)).ratio;
      const bool ok = std::abs(w.c[0] - target) <= 1e-3 && std::abs(ratio - 1) <= 1e-2;
      if (!ok) o.pass = false;
      const double nu_eff = double(dim_rep(TwiceSpin{tp.twice_t})) / dim_rep(TwiceSpin{twice_s});
      if (nu_eff != nu) o.pass = false;
      ss << "nu=" << nu_eff << " s=" << twice_s / 2.0 << ": c_j " << fmt("%.6f", w.c[0]) << " vs " << fmt("%.6f", target)
         << ", ratio " << fmt("%.5f", ratio) << "; ";
    }
  o.detail = ss.str();
  return o;
}

Outcome c5_oracle() {
  Outcome o;
  std::ostringstream ss;
  const std::pair<const char*, Scenario> cases[] = {{"spin-1/2 pair", tiny_oracle()},
                                                    {"two-vertex s=1", appendix_c(coherent(2))}};
  for (const auto& [name, s] : cases) {
    const double engine = purity(s);
    const double exact = exact_oracle_purity(s).purity;
    const McResult mc = mc_haar_purity(s, 5000, 20240601);
    const double dev = std::abs(mc.estimate - exact) / mc.stderr_;
    if (!(std::abs(engine - exact) <= 1e-10 && dev <= 3.0)) o.pass = false;
    ss << name << ": |engine-exact| " << fmt("%.2g", std::abs(engine - exact)) << ", mc " << fmt("%.6f", mc.estimate)
       << " +- " << fmt("%.2g", mc.stderr_) << " (" << fmt("%.2f", dev) << " sigma); ";
  }
  o.detail = ss.str();
  return o;
}

Outcome c6_swap_lemmas() {
  Outcome o;
  testgen::Rng rng(606);
  double worst = 0.0;
  int n = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const int tj = testgen::uniform_int(rng, 0, 6), tk = testgen::uniform_int(rng, 0, 6);
    const cplx gj = testgen::gaussian_c(rng), gk = testgen::gaussian_c(rng);
    const double both = std::norm(gj) * std::norm(gk);
    const double one_swap = tj == tk ? both / (tj + 1) : 0.0;
    worst = std::max(worst, std::abs(link_swap_trace(TwiceSpin{tj}, TwiceSpin{tk}, gj, gk, true) - one_swap) / both);
    worst = std::max(worst, std::abs(link_swap_trace(TwiceSpin{tj}, TwiceSpin{tk}, gj, gk, false) - both) / both);
    n += 2;
  }
  // exact_term against the Ising term on the two-vertex graph, which carries both lemmas on its internal link
  double worst_term = 0.0;
  for (int twice = 1; twice <= 3; ++twice) {
    AppendixCParams p = coherent(twice);
    const Scenario s = appendix_c(p);
    IsingModel model(s);
    for (int m = 0; m < 2; ++m)
      for (int k = 0; k < 2; ++k)
        for (IsingConfig sg = 0; sg < 4; ++sg)
          for (int variant : {0, 1}) {
            const double H = model.hamiltonian(m, k, sg, variant);
            const double ising = model.delta(m, k, sg, variant) && std::isfinite(H)
                                     ? std::exp(model.sector_weight(m).log() + model.sector_weight(k).log() - H)
                                     : 0.0;
            worst_term = std::max(worst_term, std::abs(exact_term(s, m, k, sg, variant) - ising) / std::max(1.0, ising));
          }
  }
  o.pass = worst <= 1e-12 && worst_term <= 1e-12;
  o.detail = std::to_string(n) + " link traces, max rel err " + fmt("%.2g", worst) + "; exact_term vs Ising terms " +
             fmt("%.2g", worst_term);
  return o;
}

Outcome c7_area() {
  Outcome o;
  std::ostringstream ss;
  const int K = 64;
  std::vector<double> ap(K);
  for (int n = 0; n < K; ++n) ap[n] = 1.0 + (n + 1);
  const double mean_pf = area_prefactor(ap), var_pf = variance_prefactor(ap);
  const double mean_rel = std::abs(mean_pf * 3.0 * K / 4.0 - 1), var_rel = std::abs(var_pf * 9.0 * K * K / 2.0 - 1);
  ss << "K=64: mean prefactor rel " << fmt("%.3g", mean_rel) << ", variance prefactor rel " << fmt("%.3g", var_rel) << "; ";
  if (!(mean_rel <= 0.1 && var_rel <= 0.1)) o.pass = false;

  const double A1 = 100.0, A2 = 1.0;
  const double two_mean = area_prefactor({A1, A2}), two_var = variance_prefactor({A1, A2});
  const double two_mean_rel = std::abs(two_mean / (1 - 2 * A2 / A1) - 1), two_var_rel = std::abs(two_var / (4 * A2 / A1) - 1);
  ss << "A1/A2=100: mean prefactor " << fmt("%.5f", two_mean) << " (rel " << fmt("%.2g", two_mean_rel)
     << "), variance prefactor " << fmt("%.5f", two_var) << " vs 4A2/A1=" << fmt("%.3f", 4 * A2 / A1) << " (rel "
     << fmt("%.3g", two_var_rel) << "); ";
  if (!(two_mean_rel <= 0.05 && two_var_rel <= 0.05)) o.pass = false;

  testgen::Rng rng(707);
  int violations = 0, single_link_violations = 0;
  std::string example;
  for (int trial = 0; trial < 1000; ++trial) {
    const Scenario s = testgen::random_scenario(rng);
    const auto A = sector_areas(s);
    const double sum = std::accumulate(A.begin(), A.end(), 0.0);
    const double avg = area_average(s, AreaOptions{.weights = WeightSource::holographic});
    const double tol = 1e-12 * (1 + sum);
    if (avg < sum / A.size() - tol || avg > sum + tol) {
      ++violations;
      if (s.region_C.links.size() == 1) ++single_link_violations;
      if (example.empty()) {
        const auto p = area_weights(s, AreaOptions{.weights = WeightSource::holographic});
        std::ostringstream ex;
        ex << ", e.g. |C|=" << s.region_C.links.size() << " areas (";
        for (std::size_t i = 0; i < A.size(); ++i) ex << (i ? "," : "") << A[i];
        ex << ") weights (";
        for (std::size_t i = 0; i < p.size(); ++i) ex << (i ? "," : "") << fmt("%.3f", p[i]);
        ex << ") give <A>=" << fmt("%.4f", avg) << " < mean " << fmt("%.4f", sum / A.size());
        example = ex.str();
      }
    }
  }
  ss << "mean <= <A> <= sum violated in " << violations << "/1000 scenarios (" << single_link_violations
     << " with a single-link region)" << example;
  if (violations) o.pass = false;
  o.detail = ss.str();
  return o;
}

Outcome c8_fixed_spin() {
  Outcome o;
  std::ostringstream ss;
  const HolographyReport rep = fixed_spin_criteria(once_fine_grained(), 0);
  const std::uint64_t all = all_vertices(once_fine_grained().graph).bits;
  bool found = false;
  for (const auto& f : rep.failing_subsets)
    if (f.X.bits == all && f.kind == FindingKind::violation) found = true;
  if (rep.is_holographic || !found) o.pass = false;
  ss << "fine-grained vertex: " << (rep.is_holographic ? "holographic" : "non-holographic") << ", X=all "
     << (found ? "among" : "not among") << " " << rep.failing_subsets.size() << " findings; ";
  int failing = 0;
  for (int twice : {20, 40, 100, 400}) {
    const Scenario s = appendix_c(AppendixCParams{.twice_s = twice});
    for (int m = 0; m < 2; ++m)
      if (!fixed_spin_criteria(s, m).failing_subsets.empty()) ++failing;
  }
  if (failing) o.pass = false;
  ss << "two-vertex sectors at s in {10,20,50,200}: " << failing << " failing";
  o.detail = ss.str();
  return o;
}

Outcome c9_gradient() {
  Outcome o;
  testgen::Rng rng(909);
  testgen::GenOptions opt;
  opt.single_sector = true;
  opt.max_vertices = 4;
  double worst = 0.0;
  int done = 0;
  while (done < 20) {
    const Scenario s = testgen::random_scenario(rng, opt);
    const Eigen::MatrixXcd rho = s.intertwiner.blocks.at({0, 0});
    const Eigen::MatrixXcd X = testgen::random_hermitian(rng, static_cast<int>(rho.rows()), true);
    const double h = 1e-4;
    const double fd = (purity_map(s, rho + h * X) - purity_map(s, rho - h * X)) / (2 * h);
    const double g = purity_gradient(s, X);
    worst = std::max(worst, std::abs(g - fd) / std::max({std::abs(g), std::abs(fd), 1e-300}));
    ++done;
  }
  o.pass = worst <= 1e-6;
  o.detail = "20 scenarios, max rel diff " + fmt("%.3g", worst);
  return o;
}

Outcome c10_global() {
  Outcome o;
  std::ostringstream ss;
  const double log2 = std::log(2.0);
  const double hs[] = {4, 5, 7, 10, 30, 100, 1e3, 1e4, 1e5, 1e6};
  const double cores[] = {1.0, 0.9, 0.5, 0.2, 0.1, 1e-2, 1e-3, 1e-5, 1e-8, 1e-12};
  int points = 0, over = 0, unresolved = 0;
  double worst = 0.0;
  for (double h : hs)
    for (int n = 1; n <= 20; ++n)
      for (int k = 0; k < 5; ++k)
        for (double core : cores) {
          const int a = (k * n + 2) / 4;
          const GlobalEntropy e = global_entropy(GlobalAvgInput{n, a, core, h});
          ++points;
          worst = std::max(worst, e.gap);
          if (e.gap < log2) continue;
          // log 2 - gap is at least log1p(core h^-n), below double resolution here
          if (e.gap == log2 && core * std::pow(h, -n) < 1e-16)
            ++unresolved;
          else
            ++over;
        }
  ss << points << " grid points, max gap " << fmt("%.17g", worst) << " (log 2 = " << fmt("%.17g", log2) << "), "
     << over << " at or above log 2, " << unresolved << " equal to log 2 only within double rounding; ";
  if (over) o.pass = false;

  const double full = global_purity(GlobalAvgInput{6, 6, 1.0, 4.0});
  const double empty = global_purity(GlobalAvgInput{6, 0, 0.3, 4.0});
  const double big = global_entropy(GlobalAvgInput{8, 3, 1.0, 1e6}).entropy / (3 * std::log(1e6));
  const bool ex = std::abs(full - 1) < 1e-14 && std::abs(empty - 1) < 1e-14 && std::abs(big - 1) < 1e-3;
  if (!ex) o.pass = false;
  ss << "examples: full " << fmt("%.15g", full) << ", n_A=0 " << fmt("%.15g", empty) << ", S/(3 log h) "
     << fmt("%.8f", big);
  o.detail = ss.str();
  return o;
}

Outcome c11_properties() {
  Outcome o;
  testgen::Rng rng(1111);
  testgen::GenOptions opt;
  opt.max_vertices = 6;
  opt.max_twice = 16;
  opt.max_sectors = 3;
  int bad_purity = 0, bad_P = 0, bad_H = 0, bad_var = 0, bad_threads = 0;
  const int trials = 300;
  for (int trial = 0; trial < trials; ++trial) {
    const Scenario s = testgen::random_scenario(rng, opt);
    setenv("RSTN_THREADS", "1", 1);
    const double p = purity(s);
    const Eigen::MatrixXd P = distribution(s);
    setenv("RSTN_THREADS", "8", 1);
    if (purity(s) != p || !(distribution(s) == P)) ++bad_threads;
    unsetenv("RSTN_THREADS");

    const double dim = static_cast<double>(dim_boundary_region(s, s.region_C));
    if (!(p <= 1 + 1e-12 && p * dim >= 1 - 1e-9)) ++bad_purity;
    if (!(std::abs(P.sum() - 1) <= 1e-12 && (P - P.transpose()).cwiseAbs().maxCoeff() <= 1e-14 && P.minCoeff() >= 0))
      ++bad_P;

    IsingModel model(s);
    for (int m = 0; m < s.n_sectors(); ++m)
      for (int n = 0; n < s.n_sectors(); ++n)
        for (IsingConfig sg = 0; sg < (IsingConfig{1} << s.graph.n_vertices); ++sg) {
          const double h0 = model.hamiltonian(m, n, sg, 0), h1 = model.hamiltonian(m, n, sg, 1);
          if (!std::isfinite(h0) || !std::isfinite(h1)) continue;
          double shift = 0.0;
          for (int e : s.region_C.links)
            shift += (((sg >> s.graph.boundary(e).vertex) & 1u) ? -1.0 : 1.0) *
                     std::log(double(dim_rep(s.sectors[m].spins[e])));
          if (std::abs(h1 - h0 - shift) > 1e-10 * (1 + std::abs(h0))) ++bad_H;
        }
    if (area_variance(s) < 0 || area_variance(s, AreaOptions{.weights = WeightSource::holographic}) < 0) ++bad_var;
  }
  o.pass = !(bad_purity || bad_P || bad_H || bad_var || bad_threads);
  o.detail = std::to_string(trials) + " scenarios; violations: purity bounds " + std::to_string(bad_purity) + ", P " +
             std::to_string(bad_P) + ", H1-H0 off C " + std::to_string(bad_H) + ", variance " +
             std::to_string(bad_var) + ", thread determinism " + std::to_string(bad_threads);
  return o;
}

}  // namespace

int main() {
  criterion(1, "two-vertex partition sums", 1, c1_partition_sums);
  criterion(2, "asymptotic purity", 1, c2_asymptotic);
  criterion(3, "two-vertex purity minimum", 60, c3_minimum);
  criterion(4, "two-sector weights", 1, c4_two_sector);
  criterion(5, "oracle equivalence", 120, c5_oracle);
  criterion(6, "swap-trace lemmas", 1, c6_swap_lemmas);
  criterion(7, "area statistics", 10, c7_area);
  criterion(8, "fixed-spin criteria", 1, c8_fixed_spin);
  criterion(9, "purity gradient", 10, c9_gradient);
  criterion(10, "global average", 5, c10_global);
  criterion(11, "property suite", 60, c11_properties);
  std::printf("%d of 11 criteria failed\n", failures);
  return failures ? 1 : 0;
}
