#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "rstn/ising.hpp"
#include "rstn/scenario.hpp"

namespace rstn {

// Counter-based stream: the k-th draw is a pure function of (key, k).
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b);
  std::uint64_t next_u64();
  double uniform();  // in (0, 1)
  double normal();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x);

// Haar unitary: complex Gaussian matrix, Householder QR, phases of diag(R) moved into Q.
Eigen::MatrixXcd haar_unitary(int D, CounterRng& rng);

// First column of haar_unitary: a normalized complex Gaussian vector.
Eigen::VectorXcd haar_vector(int D, CounterRng& rng);

// One term of the sector-pair sum by explicit contraction of the doubled tensors:
// equals K_m K_n Delta exp(-H) for the same (m, n, sigma, variant).
double exact_term(const Scenario& s, int m, int n, IsingConfig sigma, int variant);

// Swap-trace of one internal link with spins (j, k) in the two copies, swapped or not.
double link_swap_trace(TwiceSpin j, TwiceSpin k, cplx g_j, cplx g_k, bool swapped);

struct OracleResult {
  double purity = 0.0;
  double z0 = 0.0;
  double z1 = 0.0;
};

// Purity from exact_term summed over every sector pair, configuration and variant.
OracleResult exact_oracle_purity(const Scenario& s);

struct McResult {
  double estimate = 0.0;
  double stderr_ = 0.0;
  double mean_numerator = 0.0;
  double mean_denominator = 0.0;
  long samples = 0;
};

// Monte Carlo over per-vertex Haar states; mean(Tr rho_C^2) / mean((Tr rho)^2) with jackknife error.
McResult mc_haar_purity(const Scenario& s, long samples, std::uint64_t seed);

}  // namespace rstn
