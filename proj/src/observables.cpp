#include "rstn/observables.hpp"

#include <cmath>
#include <numeric>

#include "rstn/error.hpp"
#include "rstn/holography.hpp"

namespace rstn {

double DiagonalObservable::lambda(int link, TwiceSpin j) const {
  auto it = lambdas.find({link, j.twice});
  return it == lambdas.end() ? 1.0 : it->second;
}

namespace {

struct BoundaryLinkData {
  int vertex;
  int jm, jn;
  double lx_m, ly_n, lxy_m;  // lambda_X(j_m), lambda_Y(j_n), lambda_X(j_m) lambda_Y(j_m)
  double log_d;
};

std::vector<BoundaryLinkData> prepare(const Scenario& s, const DiagonalObservable& X, const DiagonalObservable& Y,
                                      int m, int n) {
  std::vector<BoundaryLinkData> out;
  for (const auto& [key, val] : X.lambdas)
    if (!(val >= 0.0)) throw Error(ErrorKind::validation, "observable: eigenvalues must be nonnegative");
  for (const auto& [key, val] : Y.lambdas)
    if (!(val >= 0.0)) throw Error(ErrorKind::validation, "observable: eigenvalues must be nonnegative");
  for (int e = s.graph.n_internal(); e < s.graph.n_links(); ++e) {
    const TwiceSpin jm = s.sectors[m].spins[e], jn = s.sectors[n].spins[e];
    out.push_back({s.graph.boundary(e).vertex, jm.twice, jn.twice, X.lambda(e, jm), Y.lambda(e, jn),
                   X.lambda(e, jm) * Y.lambda(e, jm), std::log(static_cast<double>(dim_rep(jm)))});
  }
  return out;
}

LogWeight evaluate(const std::vector<BoundaryLinkData>& links, IsingConfig sigma) {
  double w = 1.0, log_den = 0.0;
  for (const auto& l : links) {
    if ((sigma >> l.vertex) & 1u) {
      if (l.jm != l.jn) return LogWeight::zero();
      w *= l.lxy_m;
      log_den += l.log_d;
    } else {
      w *= l.lx_m * l.ly_n;
    }
  }
  return LogWeight::from_value(w) * LogWeight::from_log(-log_den);
}

double sum_sq(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

}  // namespace

LogWeight boundary_factor(const Scenario& s, const DiagonalObservable& X, const DiagonalObservable& Y, int m, int n,
                          IsingConfig sigma) {
  return evaluate(prepare(s, X, Y, m, n), sigma);
}

double observable_expectation(const Scenario& s, const DiagonalObservable& X, const DiagonalObservable& Y,
                              EngineOptions options) {
  validate_state(s);
  IsingModel model(s, options);
  const int K = s.n_sectors();
  LogWeight num = LogWeight::zero(), den = LogWeight::zero();
  for (int m = 0; m < K; ++m)
    for (int n = 0; n < K; ++n) {
      const LogWeight kk = model.sector_weight(m) * model.sector_weight(n);
      if (kk.is_zero()) continue;
      const auto links = prepare(s, X, Y, m, n);
      num += kk * model.partition_with_boundary(m, n, [&](IsingConfig sg) { return evaluate(links, sg); }, s.mode);
      den += kk * model.partition_pair(m, n, s.mode).z0;
    }
  if (den.is_zero()) throw Error(ErrorKind::degenerate, "observable: Z_0 vanishes");
  return (num / den).value();
}

double area_eigenvalue(TwiceSpin j, bool casimir) {
  const double jj = 0.5 * j.twice;
  return casimir ? std::sqrt(jj * (jj + 1.0)) : jj;
}

DiagonalObservable area_observable(const Scenario& s, const std::vector<int>& links, bool casimir) {
  DiagonalObservable X;
  for (int e : links)
    for (const auto& sec : s.sectors) {
      const TwiceSpin j = sec.spins.at(e);
      X.lambdas[{e, j.twice}] = area_eigenvalue(j, casimir);
    }
  return X;
}

std::vector<double> sector_areas(const Scenario& s, bool casimir) {
  std::vector<double> out;
  for (const auto& sec : s.sectors) {
    double a = 0.0;
    for (int e : s.region_C.links) a += area_eigenvalue(sec.spins[e], casimir);
    out.push_back(a);
  }
  return out;
}

std::vector<double> area_weights(const Scenario& s, const AreaOptions& options) {
  const int K = s.n_sectors();
  std::vector<double> p(K, 0.0);
  if (options.weights == WeightSource::holographic) {
    double total = 0.0;
    for (int m = 0; m < K; ++m) {
      p[m] = static_cast<double>(dim_boundary_region_sector(s, m, s.region_C));
      total += p[m];
    }
    for (double& v : p) v /= total;
    return p;
  }
  const Eigen::MatrixXd P = distribution(s);
  for (int m = 0; m < K; ++m) p[m] = P.row(m).sum();
  return p;
}

double area_average(const Scenario& s, const AreaOptions& options) {
  const auto A = sector_areas(s, options.casimir);
  const auto p = area_weights(s, options);
  return std::inner_product(A.begin(), A.end(), p.begin(), 0.0);
}

double area_variance(const Scenario& s, const AreaOptions& options) {
  const auto A = sector_areas(s, options.casimir);
  const auto p = area_weights(s, options);
  double mean = 0.0, var = 0.0;
  for (std::size_t i = 0; i < A.size(); ++i) mean += p[i] * A[i];
  for (std::size_t i = 0; i < A.size(); ++i) var += p[i] * (A[i] - mean) * (A[i] - mean);
  return var;
}

double area_average_cxy(const Scenario& s, bool casimir, EngineOptions options) {
  double total = 0.0;
  const DiagonalObservable I;
  for (int e : s.region_C.links) total += observable_expectation(s, area_observable(s, {e}, casimir), I, options);
  return total;
}

double area_variance_cxy(const Scenario& s, bool casimir, EngineOptions options) {
  const DiagonalObservable I;
  double square = 0.0, cross = 0.0;
  for (int e : s.region_C.links)
    for (int f : s.region_C.links) {
      const DiagonalObservable Ae = area_observable(s, {e}, casimir), Af = area_observable(s, {f}, casimir);
      DiagonalObservable prod = Ae;
      for (const auto& [key, val] : Af.lambdas) {
        auto it = prod.lambdas.find(key);
        if (it == prod.lambdas.end()) prod.lambdas[key] = val;
        else it->second *= val;
      }
      square += observable_expectation(s, prod, I, options);
      cross += observable_expectation(s, Ae, Af, options);
    }
  return square - cross;
}

double area_prefactor(const std::vector<double>& areas) {
  const double sum = std::accumulate(areas.begin(), areas.end(), 0.0);
  return sum_sq(areas) / (sum * sum);
}

double variance_prefactor(const std::vector<double>& areas) {
  const double sum = std::accumulate(areas.begin(), areas.end(), 0.0);
  double cube = 0.0;
  for (double a : areas) cube += a * a * a;
  const double e2 = sum_sq(areas) / (sum * sum);
  return cube / (sum * sum * sum) - e2 * e2;
}

}  // namespace rstn
