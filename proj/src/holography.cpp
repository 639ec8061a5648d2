#include "rstn/holography.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <string>

#include "rstn/error.hpp"

namespace rstn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  if (b != 0 && a > std::numeric_limits<std::uint64_t>::max() / b)
    throw Error(ErrorKind::validation, "dimension of the boundary region overflows 64 bits");
  return a * b;
}

// Nelder-Mead on R^k.
std::vector<double> nelder_mead(const std::function<double(const std::vector<double>&)>& f, std::vector<double> x0,
                                double step, int iters) {
  const std::size_t k = x0.size();
  std::vector<std::vector<double>> pts(k + 1, x0);
  for (std::size_t i = 0; i < k; ++i) pts[i + 1][i] += step;
  std::vector<double> val(k + 1);
  for (std::size_t i = 0; i <= k; ++i) val[i] = f(pts[i]);
  for (int it = 0; it < iters; ++it) {
    std::vector<std::size_t> order(k + 1);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return val[a] < val[b]; });
    std::vector<std::vector<double>> p2;
    std::vector<double> v2;
    for (auto i : order) {
      p2.push_back(pts[i]);
      v2.push_back(val[i]);
    }
    pts.swap(p2);
    val.swap(v2);
    if (std::abs(val[k] - val[0]) <= 1e-15 * (std::abs(val[0]) + 1e-300)) break;
    std::vector<double> cen(k, 0.0);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) cen[j] += pts[i][j] / k;
    auto along = [&](double t) {
      std::vector<double> p(k);
      for (std::size_t j = 0; j < k; ++j) p[j] = cen[j] + t * (pts[k][j] - cen[j]);
      return p;
    };
    const auto xr = along(-1.0);
    const double fr = f(xr);
    if (fr < val[0]) {
      const auto xe = along(-2.0);
      const double fe = f(xe);
      if (fe < fr) {
        pts[k] = xe;
        val[k] = fe;
      } else {
        pts[k] = xr;
        val[k] = fr;
      }
    } else if (fr < val[k - 1]) {
      pts[k] = xr;
      val[k] = fr;
    } else {
      const auto xc = along(fr < val[k] ? -0.5 : 0.5);
      const double fc = f(xc);
      if (fc < std::min(fr, val[k])) {
        pts[k] = xc;
        val[k] = fc;
      } else {
        for (std::size_t i = 1; i <= k; ++i) {
          for (std::size_t j = 0; j < k; ++j) pts[i][j] = pts[0][j] + 0.5 * (pts[i][j] - pts[0][j]);
          val[i] = f(pts[i]);
        }
      }
    }
  }
  std::size_t best = 0;
  for (std::size_t i = 1; i <= k; ++i)
    if (val[i] < val[best]) best = i;
  return pts[best];
}

std::vector<double> softmax(const std::vector<double>& z) {
  std::vector<double> c(z.size() + 1);
  double mx = 0.0;
  for (double v : z) mx = std::max(mx, v);
  double sum = std::exp(-mx);
  c.back() = std::exp(-mx);
  for (std::size_t i = 0; i < z.size(); ++i) {
    c[i] = std::exp(z[i] - mx);
    sum += c[i];
  }
  for (double& v : c) v /= sum;
  return c;
}

struct QuadraticForm {
  Eigen::MatrixXd beta;
  Eigen::VectorXd kt;  // K-tilde relative to its maximum

  Eigen::VectorXd alpha(const std::vector<double>& c) const {
    Eigen::VectorXd a(kt.size());
    for (int i = 0; i < kt.size(); ++i) a[i] = kt[i] * c[i];
    return a;
  }
  // <alpha, beta alpha> with alpha normalized to unit sum.
  double value(const std::vector<double>& c) const {
    const Eigen::VectorXd a = alpha(c);
    const double s = a.sum();
    return a.dot(beta * a) / (s * s);
  }
  double bilinear(const std::vector<double>& c1, const std::vector<double>& c2) const {
    return alpha(c1).dot(beta * alpha(c2));
  }
};

// Root of the form along the segment c(t) = (1-t) ca + t cb given opposite signs at the ends.
std::vector<double> segment_root(const QuadraticForm& q, const std::vector<double>& ca, const std::vector<double>& cb) {
  const double f0 = q.bilinear(ca, ca), f1 = q.bilinear(cb, cb), g = q.bilinear(ca, cb);
  const double A = f0 - 2.0 * g + f1, B = 2.0 * (g - f0), C = f0;
  double t;
  if (std::abs(A) < 1e-14 * (std::abs(B) + std::abs(C))) {
    t = -C / B;
  } else {
    const double disc = std::sqrt(std::max(0.0, B * B - 4.0 * A * C));
    const double qq = -0.5 * (B + std::copysign(disc, B));
    const double r1 = qq / A, r2 = C / qq;
    t = (r1 > 0.0 && r1 < 1.0) ? r1 : r2;
  }
  // Polish on the exact quadratic by bisection-safeguarded Newton.
  double lo = 0.0, hi = 1.0;
  auto f = [&](double x) { return (A * x + B) * x + C; };
  if (!(t > 0.0 && t < 1.0)) t = 0.5;
  for (int i = 0; i < 200; ++i) {
    const double ft = f(t);
    if ((ft < 0) == (f0 < 0)) lo = t; else hi = t;
    const double df = 2.0 * A * t + B;
    double nt = df != 0.0 ? t - ft / df : 0.5 * (lo + hi);
    if (!(nt > lo && nt < hi)) nt = 0.5 * (lo + hi);
    if (nt == t) break;
    t = nt;
  }
  std::vector<double> c(ca.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (1.0 - t) * ca[i] + t * cb[i];
  return c;
}

std::vector<double> normalized(std::vector<double> c) {
  const double s = std::accumulate(c.begin(), c.end(), 0.0);
  for (double& v : c) v /= s;
  return c;
}

std::uint64_t split_mix(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace

double default_tolerance(Mode mode) { return mode == Mode::high_spin ? 1e-2 : 1e-6; }

std::uint64_t dim_boundary_region(const Scenario& s, const Region& C) {
  std::uint64_t dim = 1;
  for (int e : C.links) {
    std::vector<int> seen;
    std::uint64_t sum = 0;
    for (const auto& sec : s.sectors) {
      const int t = sec.spins.at(e).twice;
      if (std::find(seen.begin(), seen.end(), t) != seen.end()) continue;
      seen.push_back(t);
      sum += static_cast<std::uint64_t>(t) + 1;
    }
    dim = checked_mul(dim, sum);
  }
  return dim;
}

std::uint64_t dim_boundary_region_sector(const Scenario& s, int m, const Region& C) {
  std::uint64_t dim = 1;
  for (int e : C.links) dim = checked_mul(dim, static_cast<std::uint64_t>(dim_rep(s.sectors.at(m).spins.at(e))));
  return dim;
}

HolographyReport holography_report(const Scenario& s, std::optional<double> tol, EngineOptions options) {
  const PurityResult pr = analyze_purity(s, options);
  HolographyReport rep;
  rep.mode = s.mode;
  rep.purity = pr.purity;
  rep.dim_target = dim_boundary_region(s, s.region_C);
  rep.ratio = rep.purity * static_cast<double>(rep.dim_target);
  rep.tolerance = tol.value_or(default_tolerance(s.mode));
  rep.is_holographic = std::abs(rep.ratio - 1.0) <= rep.tolerance;
  return rep;
}

HolographyReport fixed_spin_criteria(const Scenario& s, int sector, std::optional<double> tol, EngineOptions options) {
  validate_state(s);
  const Scenario one = restrict_to_sector(s, sector);
  IsingModel model(one, options);
  const int N = one.graph.n_vertices;
  if (N > options.vertex_cap) throw Error(ErrorKind::size_cap, "fixed-spin criteria: too many vertices for subset enumeration");
  HolographyReport rep = holography_report(one, tol, options);
  const auto& g = one.graph;
  const auto& spins = one.sectors[0].spins;
  const SectorLayout& lay = model.layout(0);
  auto logd = [&](int e) { return std::log(static_cast<double>(dim_rep(spins[e]))); };
  for (std::uint64_t bits = 1; bits < (std::uint64_t{1} << N); ++bits) {
    const VertexSubset X{bits};
    const BoundaryCounts bc = boundary_counts(g, X, one.region_C);
    double lhs = 0.0;
    for (int e : bc.cut_internal) lhs += logd(e);
    for (int e : bc.boundary_not_in_C) lhs += logd(e);
    for (int e : bc.boundary_in_C) lhs -= logd(e);
    const double s2 = model.sigma_I(0, 0, bits);
    double log_dims = 0.0;
    for (int x = 0; x < N; ++x)
      if (X.contains(x)) log_dims += std::log(static_cast<double>(lay.vertex_dims[x]));
    auto check = [&](FlipCondition cond, double rhs) {
      const double diff = lhs - rhs;
      const double eps = 1e-12 * std::max({1.0, std::abs(lhs), std::abs(rhs)});
      if (diff > eps) return;
      rep.failing_subsets.push_back({X, cond, diff < -eps ? FindingKind::violation : FindingKind::degeneracy, lhs, rhs});
    };
    check(FlipCondition::energy, -s2);
    check(FlipCondition::dimension, log_dims);
  }
  rep.is_holographic = rep.failing_subsets.empty() && std::abs(rep.ratio - 1.0) <= rep.tolerance;
  return rep;
}

QMatrixResult q_matrix(const Scenario& s, EngineOptions options) {
  const PurityResult pr = analyze_purity(s, options);
  const int K = s.n_sectors();
  const double dim = static_cast<double>(dim_boundary_region(s, s.region_C));
  QMatrixResult out;
  out.mode = s.mode;
  out.Q = Eigen::MatrixXd::Zero(K, K);
  out.beta = Eigen::MatrixXd::Zero(K, K);
  for (int m = 0; m < K; ++m)
    for (int n = 0; n < K; ++n) {
      const auto& p = pr.pairs[m * K + n];
      if (p.z0.is_zero()) continue;
      out.Q(m, n) = (p.z1 / p.z0).value() * dim;
      out.beta(m, n) = p.z1.value() * dim - p.z0.value();
    }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(out.Q);
  const auto sv = svd.singularValues();
  out.condition = sv.size() && sv[sv.size() - 1] > 0.0 ? sv[0] / sv[sv.size() - 1] : kInf;
  out.singular = !(out.condition <= 1e12);
  if (!out.singular) out.inverse_sum = out.Q.inverse().sum();
  return out;
}

std::vector<double> closed_form_weights(const Scenario& s) {
  const int K = s.n_sectors();
  std::vector<double> logw(K);
  for (int m = 0; m < K; ++m) {
    double l = 0.0;
    for (int e = 0; e < s.graph.n_links(); ++e) {
      const TwiceSpin j = s.sectors[m].spins[e];
      if (s.graph.is_internal(e))
        l += std::log(std::norm(s.amplitudes.amplitude(e, j)));
      else if (!s.region_C.contains(e))
        l += std::log(static_cast<double>(dim_rep(j)));
    }
    logw[m] = -l;
  }
  const double mx = *std::max_element(logw.begin(), logw.end());
  std::vector<double> c(K);
  for (int m = 0; m < K; ++m) c[m] = std::exp(logw[m] - mx);
  return normalized(c);
}

WeightSolution solve_weights(const Scenario& s, EngineOptions options) {
  const int K = s.n_sectors();
  if (K < 2) throw Error(ErrorKind::validation, "solve_weights: at least two sectors are required");
  const QMatrixResult qm = q_matrix(s, options);
  IsingModel model(s, options);
  std::vector<double> log_kt(K);
  for (int m = 0; m < K; ++m) {
    const double c = model.weight_fraction(m);
    if (!(c > 0.0)) throw Error(ErrorKind::zero_weight, "solve_weights: sector " + std::to_string(m) + " has zero weight");
    log_kt[m] = model.sector_weight(m).log() - std::log(c);
  }
  const double mx = *std::max_element(log_kt.begin(), log_kt.end());
  QuadraticForm q;
  q.beta = 0.5 * (qm.beta + qm.beta.transpose());
  q.kt.resize(K);
  for (int m = 0; m < K; ++m) q.kt[m] = std::exp(log_kt[m] - mx);

  auto from_alpha = [&](const Eigen::VectorXd& a) {
    std::vector<double> c(K);
    for (int m = 0; m < K; ++m) c[m] = a[m] / q.kt[m];
    return normalized(c);
  };
  auto finish = [&](std::vector<double> c, const char* method) {
    WeightSolution sol;
    sol.c = normalized(std::move(c));
    sol.residual = std::abs(q.value(sol.c));
    sol.method = method;
    return sol;
  };

  // Branch (i): a null vector of beta inside the positive orthant, closest to uniform weights.
  {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q.beta);
    const double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
    Eigen::MatrixXd null_basis(K, 0);
    for (int i = 0; i < K; ++i)
      if (std::abs(es.eigenvalues()[i]) <= 1e-10 * scale) {
        null_basis.conservativeResize(K, null_basis.cols() + 1);
        null_basis.col(null_basis.cols() - 1) = es.eigenvectors().col(i);
      }
    if (null_basis.cols() > 0) {
      const Eigen::VectorXd uniform = q.alpha(std::vector<double>(K, 1.0 / K));
      Eigen::VectorXd v = null_basis * (null_basis.transpose() * uniform);
      if (v.sum() < 0) v = -v;
      const double vmax = v.cwiseAbs().maxCoeff();
      if (vmax > 0.0 && v.minCoeff() > 1e-12 * vmax) return finish(from_alpha(v), "null-vector");
    }
  }

  // Branch (ii): quadratic along the segment between the most negative and most positive diagonal directions.
  {
    int nlo = 0, nhi = 0;
    for (int i = 1; i < K; ++i) {
      if (q.beta(i, i) < q.beta(nlo, nlo)) nlo = i;
      if (q.beta(i, i) > q.beta(nhi, nhi)) nhi = i;
    }
    if (q.beta(nlo, nlo) < 0.0 && q.beta(nhi, nhi) > 0.0) {
      for (double eps : {1e-3, 1e-6, 1e-9}) {
        std::vector<double> ca(K, eps / K), cb(K, eps / K);
        ca[nlo] += 1.0 - eps;
        cb[nhi] += 1.0 - eps;
        if (q.value(ca) < 0.0 && q.value(cb) > 0.0) return finish(segment_root(q, ca, cb), "segment");
      }
    }
  }

  // Fallback: deterministic multi-start search for both signs of the form on the simplex.
  std::uint64_t state = 0x5EEDull;
  std::vector<std::vector<double>> starts;
  starts.emplace_back(K - 1, 0.0);
  for (int i = 0; i < K - 1; ++i) {
    std::vector<double> z(K - 1, 0.0);
    z[i] = 3.0;
    starts.push_back(z);
    z[i] = -3.0;
    starts.push_back(z);
  }
  for (int r = 0; r < 8; ++r) {
    std::vector<double> z(K - 1);
    for (double& v : z) v = 6.0 * (static_cast<double>(split_mix(state) >> 11) * 0x1.0p-53 - 0.5);
    starts.push_back(z);
  }
  std::vector<double> cmin, cmax;
  double fmin = kInf, fmax = -kInf;
  for (const auto& z0 : starts) {
    auto lo = softmax(nelder_mead([&](const std::vector<double>& z) { return q.value(softmax(z)); }, z0, 0.5, 4000));
    auto hi = softmax(nelder_mead([&](const std::vector<double>& z) { return -q.value(softmax(z)); }, z0, 0.5, 4000));
    if (q.value(lo) < fmin) {
      fmin = q.value(lo);
      cmin = lo;
    }
    if (q.value(hi) > fmax) {
      fmax = q.value(hi);
      cmax = hi;
    }
  }
  if (fmin < 0.0 && fmax > 0.0) return finish(segment_root(q, cmin, cmax), "search");
  // No sign change: the best point is the extremum closest to zero, accepted if its ratio is within tolerance.
  WeightSolution best = finish(fmin >= 0.0 ? cmin : cmax, "minimum");
  const double ratio = holography_report(with_weights(s, best.c), std::nullopt, options).ratio;
  if (std::abs(ratio - 1.0) <= default_tolerance(s.mode)) return best;
  std::string where;
  for (double v : best.c) where += (where.empty() ? "" : ", ") + std::to_string(v);
  throw Error(ErrorKind::infeasible, std::string("solve_weights: the beta form does not change sign on the simplex; best residual ") +
                                         std::to_string(best.residual) + " at c = (" + where + "), ratio " +
                                         std::to_string(ratio) + "; no holographic superposition exists");
}

}  // namespace rstn
