#pragma once

#include "rstn/spin.hpp"

namespace rstn {

// Counts only: the global average sees no interior structure.
struct GlobalAvgInput {
  int n_outer = 0;
  int n_A = 0;
  double core_purity = 1.0;
  double h = 1.0;
};

// h = sum of d_j over lower <= j <= upper.
double cutoff_dimension(TwiceSpin lower, TwiceSpin upper);

GlobalAvgInput make_global_input(int n_outer, int n_A, double core_purity, TwiceSpin lower, TwiceSpin upper);

void validate_global(const GlobalAvgInput& in);

double global_log_purity(const GlobalAvgInput& in);
double global_purity(const GlobalAvgInput& in);

struct GlobalEntropy {
  double entropy = 0.0;
  double min_approximation = 0.0;
  double gap = 0.0;  // |entropy - min_approximation|
};

GlobalEntropy global_entropy(const GlobalAvgInput& in);

}  // namespace rstn
