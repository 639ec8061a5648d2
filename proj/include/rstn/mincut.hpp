#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace rstn {

// Energy E(sigma) = sum_x (up ? cost_up[x] : cost_down[x]) + sum_edges w * [endpoints differ],
// all costs nonnegative, +inf marks a forbidden choice.
struct CutProblem {
  int n = 0;
  std::vector<double> cost_up;
  std::vector<double> cost_down;
  struct Edge {
    int a = 0, b = 0;
    double w = 0.0;
  };
  std::vector<Edge> edges;
};

struct CutSolution {
  double energy = 0.0;
  std::uint64_t down = 0;  // smallest minimizing down set
};

// Exact minimizer by maximum flow; nullopt when every configuration is forbidden.
std::optional<CutSolution> solve_min_cut(const CutProblem& problem);

}  // namespace rstn
