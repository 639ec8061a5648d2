#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rstn/ising.hpp"
#include "rstn/scenario.hpp"

namespace rstn {

enum class FlipCondition { energy, dimension };
enum class FindingKind { violation, degeneracy };

// One region X that fails a flip condition, with both sides in log form.
struct SubsetFinding {
  VertexSubset X;
  FlipCondition condition = FlipCondition::energy;
  FindingKind kind = FindingKind::violation;
  double lhs_log = 0.0;  // log of prod over cut(X) of d^h
  double rhs_log = 0.0;  // -S_2((rho^I)_X) or log prod_{x in X} D_x
};

struct HolographyReport {
  Mode mode = Mode::exact;
  double purity = 0.0;
  std::uint64_t dim_target = 1;
  double ratio = 0.0;
  double tolerance = 0.0;
  bool is_holographic = false;
  std::vector<SubsetFinding> failing_subsets;
};

struct WeightSolution {
  std::vector<double> c;
  double residual = 0.0;  // |<alpha, beta alpha>| with sum(alpha) = 1
  std::string method;     // null-vector, segment, search
};

struct QMatrixResult {
  Mode mode = Mode::exact;
  Eigen::MatrixXd Q;
  Eigen::MatrixXd beta;  // Z1 * dim - Z0 per sector pair
  double condition = 0.0;
  bool singular = false;
  std::optional<double> inverse_sum;
};

double default_tolerance(Mode mode);

std::uint64_t dim_boundary_region(const Scenario& s, const Region& C);
std::uint64_t dim_boundary_region_sector(const Scenario& s, int m, const Region& C);

HolographyReport holography_report(const Scenario& s, std::optional<double> tol = std::nullopt, EngineOptions options = {});
HolographyReport fixed_spin_criteria(const Scenario& s, int sector, std::optional<double> tol = std::nullopt,
                                     EngineOptions options = {});

QMatrixResult q_matrix(const Scenario& s, EngineOptions options = {});
WeightSolution solve_weights(const Scenario& s, EngineOptions options = {});

// c_n proportional to 1 / (prod over boundary links outside C of d * prod over internal links of |g|^2).
std::vector<double> closed_form_weights(const Scenario& s);

}  // namespace rstn
