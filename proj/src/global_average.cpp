#include "rstn/global_average.hpp"

#include <algorithm>
#include <cmath>

#include "rstn/error.hpp"

namespace rstn {

namespace {

double log_add(double a, double b) {
  const double hi = std::max(a, b), lo = std::min(a, b);
  if (lo == -INFINITY) return hi;
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

double cutoff_dimension(TwiceSpin lower, TwiceSpin upper) {
  if (lower.twice < 0 || upper < lower) throw Error(ErrorKind::validation, "global: invalid cutoff pair");
  const double dl = dim_rep(lower), du = dim_rep(upper);
  return (du * (du + 1.0) - dl * (dl - 1.0)) / 2.0;
}

GlobalAvgInput make_global_input(int n_outer, int n_A, double core_purity, TwiceSpin lower, TwiceSpin upper) {
  GlobalAvgInput in{n_outer, n_A, core_purity, cutoff_dimension(lower, upper)};
  validate_global(in);
  return in;
}

void validate_global(const GlobalAvgInput& in) {
  if (in.n_outer < 0 || in.n_A < 0) throw Error(ErrorKind::validation, "global: link counts must be nonnegative");
  if (in.n_A > in.n_outer) throw Error(ErrorKind::validation, "global: n_A exceeds n_outer");
  if (!(in.core_purity > 0.0 && in.core_purity <= 1.0))
    throw Error(ErrorKind::validation, "global: core purity must lie in (0, 1]");
  if (!(in.h >= 1.0) || !std::isfinite(in.h)) throw Error(ErrorKind::validation, "global: h must be at least 1");
}

double global_log_purity(const GlobalAvgInput& in) {
  validate_global(in);
  const double lh = std::log(in.h), lp = std::log(in.core_purity);
  const double num = log_add((in.n_outer - in.n_A) * lh, lp + in.n_A * lh);
  const double den = log_add(in.n_outer * lh, lp);
  return num - den;
}

double global_purity(const GlobalAvgInput& in) { return std::exp(global_log_purity(in)); }

GlobalEntropy global_entropy(const GlobalAvgInput& in) {
  GlobalEntropy out;
  out.entropy = -global_log_purity(in);
  const double lh = std::log(in.h);
  const double lp = std::log(in.core_purity);
  const double u = (in.n_outer - in.n_A) * lh, v = lp + in.n_A * lh;
  out.min_approximation = std::min(u, v) - lp;
  // entropy - min = log1p(p h^-n) - log1p(exp(-|u - v|))
  out.gap = std::abs(std::log1p(std::exp(lp - in.n_outer * lh)) - std::log1p(std::exp(-std::abs(u - v))));
  return out;
}

}  // namespace rstn
