#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <Eigen/Dense>

#include "rstn/log_weight.hpp"
#include "rstn/scenario.hpp"

namespace rstn {

// Ising configuration: bit x set means sigma_x = -1 (vertex swapped).
using IsingConfig = std::uint64_t;

struct EngineOptions {
  int vertex_cap = 24;
  bool allow_override = false;  // beyond the cap, high_spin mode via minimum cut
};

struct SectorPairResult {
  Mode mode = Mode::exact;
  LogWeight z0 = LogWeight::zero();
  LogWeight z1 = LogWeight::zero();
  double ground_energy_0 = 0.0;  // +inf when no admissible configuration
  double ground_energy_1 = 0.0;
  IsingConfig ground_config_0 = 0;
  IsingConfig ground_config_1 = 0;
  std::uint64_t degeneracy_0 = 0;  // 0 when not computed
  std::uint64_t degeneracy_1 = 0;
};

// One admissible term of a sector-pair sum.
struct TermRecord {
  int m = 0, n = 0;
  IsingConfig sigma = 0;
  int variant = 0;
  double energy = 0.0;
};

class IsingModel {
 public:
  explicit IsingModel(const Scenario& s, EngineOptions options = {});
  ~IsingModel();
  IsingModel(const IsingModel&) = delete;
  IsingModel& operator=(const IsingModel&) = delete;

  const Scenario& scenario() const noexcept { return s_; }
  int n_vertices() const noexcept { return s_.graph.n_vertices; }
  int n_sectors() const noexcept { return s_.n_sectors(); }
  double weight_fraction(int m) const { return c_.at(m); }
  const SectorLayout& layout(int m) const { return layouts_.at(m); }

  int delta(int m, int n, IsingConfig sigma, int variant) const;
  double sigma_I(int m, int n, IsingConfig sigma) const;
  double hamiltonian(int m, int n, IsingConfig sigma, int variant) const;
  double hamiltonian_bulk_boundary(int m, IsingConfig sigma, int variant) const;

  SectorPairResult partition_pair(int m, int n) const { return partition_pair(m, n, s_.mode); }
  SectorPairResult partition_pair(int m, int n, Mode mode) const;
  LogWeight sector_weight(int m) const;

  // Sum over sigma of Delta_0 * exp(-(internal cut energy + Sigma_I)) * boundary(sigma).
  // In high_spin mode only the variant-0 ground configuration contributes.
  LogWeight partition_with_boundary(int m, int n, const std::function<LogWeight(IsingConfig)>& boundary, Mode mode) const;

  // Every admissible term (Delta = 1, finite energy) of the pair, in sigma order.
  std::vector<TermRecord> terms(int m, int n) const;

  // Internal cut energy plus Sigma_I: the part of H_0 not carried by boundary links.
  double bulk_energy(int m, int n, IsingConfig sigma) const;

 private:
  struct PairCache;

  double boundary_energy(int m, IsingConfig sigma, int variant) const;
  double cut_energy(int m, IsingConfig sigma) const;
  int delta_links(int m, int n, IsingConfig sigma, int variant) const;
  double sigma_I_direct(int m, int n, IsingConfig down) const;
  const PairCache& cache(int m, int n) const;
  double cached_sigma_I(const PairCache& pc, int m, int n, IsingConfig sigma) const;
  int lookup_sector(int m, int n, IsingConfig down) const;
  void check_size(Mode mode) const;

  Scenario s_;
  EngineOptions opt_;
  std::vector<SectorLayout> layouts_;
  std::vector<double> c_;
  std::vector<std::vector<double>> log_d_;
  std::vector<int> link_vertex_;  // source vertex per link
  std::vector<int> link_target_;  // target vertex per internal link, -1 for boundary
  std::vector<char> in_C_;
  std::map<std::vector<int>, int> label_index_;
  mutable std::map<std::pair<int, int>, std::unique_ptr<PairCache>> caches_;
  mutable std::mutex cache_mutex_;
};

struct PurityResult {
  Mode mode = Mode::exact;
  double purity = 0.0;
  LogWeight z0 = LogWeight::zero();
  LogWeight z1 = LogWeight::zero();
  std::vector<LogWeight> weights;      // K_m
  Eigen::MatrixXd P;                   // P(m,n)
  std::vector<SectorPairResult> pairs;  // row-major K x K
};

PurityResult analyze_purity(const Scenario& s, EngineOptions options = {});
PurityResult analyze_purity(const IsingModel& model, Mode mode);

int delta_factor(const Scenario& s, int m, int n, IsingConfig sigma, int variant);
LogWeight sigma_I(const Scenario& s, int m, int n, IsingConfig sigma);  // weight exp(-Sigma_I)
double hamiltonian(const Scenario& s, int m, int n, IsingConfig sigma, int variant);
double hamiltonian_bulk_boundary(const Scenario& s, int m, IsingConfig sigma, int variant);
SectorPairResult partition_pair(const Scenario& s, int m, int n, EngineOptions options = {});
LogWeight sector_weight(const Scenario& s, int m);
Eigen::MatrixXd distribution(const Scenario& s, EngineOptions options = {});
double purity(const Scenario& s, EngineOptions options = {});

// Fixed-sector purity map F(rho) = sum over down sets S of alpha_S Tr(rho_S^2)/Tr(rho)^2,
// evaluated through the engine with rho in place of the single block.
double purity_map(const Scenario& s, const Eigen::MatrixXcd& rho);

// Directional derivative of purity_map at the scenario's block along a Hermitian direction.
double purity_gradient(const Scenario& s, const Eigen::MatrixXcd& direction);

// Lexicographic order of configurations read as (sigma_0, sigma_1, ...), + before -.
inline bool lex_less(IsingConfig a, IsingConfig b) {
  const IsingConfig d = a ^ b;
  if (d == 0) return false;
  const IsingConfig low = d & (~d + 1);
  return (a & low) == 0;
}

}  // namespace rstn
