#pragma once

#include <map>
#include <utility>
#include <vector>

#include "rstn/ising.hpp"
#include "rstn/log_weight.hpp"
#include "rstn/scenario.hpp"

namespace rstn {

// Spin-diagonal factorized boundary operator: eigenvalue lambda(e, j) on outer link e, identity elsewhere.
struct DiagonalObservable {
  std::map<std::pair<int, int>, double> lambdas;  // (link id, twice-spin) -> eigenvalue, nonnegative

  double lambda(int link, TwiceSpin j) const;
};

enum class WeightSource { distribution, holographic };

struct AreaOptions {
  bool casimir = false;  // sqrt(j(j+1)) eigenvalues instead of j
  WeightSource weights = WeightSource::distribution;
};

LogWeight boundary_factor(const Scenario& s, const DiagonalObservable& X, const DiagonalObservable& Y, int m, int n,
                          IsingConfig sigma);

// <X (x) Y> = sum K_m K_n Z_XY / sum K_m K_n Z_0 in the scenario's mode.
double observable_expectation(const Scenario& s, const DiagonalObservable& X, const DiagonalObservable& Y,
                              EngineOptions options = {});

double area_eigenvalue(TwiceSpin j, bool casimir);
DiagonalObservable area_observable(const Scenario& s, const std::vector<int>& links, bool casimir);

std::vector<double> sector_areas(const Scenario& s, bool casimir = false);        // A_{C,n}
std::vector<double> area_weights(const Scenario& s, const AreaOptions& options);  // p_n

double area_average(const Scenario& s, const AreaOptions& options = {});
double area_variance(const Scenario& s, const AreaOptions& options = {});

// Same moments assembled from c_XY partition sums.
double area_average_cxy(const Scenario& s, bool casimir = false, EngineOptions options = {});
double area_variance_cxy(const Scenario& s, bool casimir = false, EngineOptions options = {});

// Sequence forms with weights proportional to the areas.
double area_prefactor(const std::vector<double>& areas);      // exp(-S_2)
double variance_prefactor(const std::vector<double>& areas);  // exp(-S_3) - exp(-2 S_2)

}  // namespace rstn
