#pragma once

#include <complex>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "rstn/graph.hpp"
#include "rstn/spin.hpp"

namespace rstn {

using cplx = std::complex<double>;

enum class Mode { exact, high_spin };

const char* to_string(Mode mode) noexcept;

// One spin per link id.
struct SectorAssignment {
  std::vector<TwiceSpin> spins;

  bool operator==(const SectorAssignment&) const = default;
};

// Amplitudes g per (link, twice-spin); unlisted pairs default to 1.
struct LinkAmplitudes {
  std::map<std::pair<int, int>, cplx> g;

  cplx amplitude(int link, TwiceSpin j) const;
  bool operator==(const LinkAmplitudes&) const = default;
};

// Dense blocks of rho^I indexed by sector pairs; absent blocks are zero.
struct IntertwinerBlockState {
  std::map<std::pair<int, int>, Eigen::MatrixXcd> blocks;
  bool vertex_product = false;

  const Eigen::MatrixXcd* block(int m, int n) const;
};

// Core state on the inner boundary, summarized by its purity.
struct CoreSpec {
  double purity = 1.0;

  bool operator==(const CoreSpec&) const = default;
};

struct Scenario {
  ColoredGraph graph;
  Region region_C;
  std::vector<SectorAssignment> sectors;
  LinkAmplitudes amplitudes;
  IntertwinerBlockState intertwiner;
  std::optional<CoreSpec> core;
  TwiceSpin lower_cutoff{0};
  TwiceSpin upper_cutoff{0};
  Mode mode = Mode::exact;

  int n_sectors() const noexcept { return static_cast<int>(sectors.size()); }
};

// Per-sector vertex labels and intertwiner basis layout.
struct SectorLayout {
  std::vector<std::array<TwiceSpin, 4>> labels;  // per vertex, color ordered
  std::vector<int> vertex_dims;                   // intertwiner dimension per vertex
  std::vector<long> strides;                      // vertex 0 most significant
  long total_dim = 0;
};

SectorLayout sector_layout(const ColoredGraph& graph, const SectorAssignment& sector);

double link_state_purity(TwiceSpin j);

// Tr block(m,m).
double sector_trace(const Scenario& s, int m);

// Whole rho^I assembled over the direct sum of sector spaces.
Eigen::MatrixXcd assemble_intertwiner(const Scenario& s);

void validate_state(const Scenario& s);

// Sets the sector weights to c (renormalized), rescaling off-diagonal blocks so that
// every normalized block rho_mn / sqrt(c_m c_n) is unchanged.
Scenario with_weights(const Scenario& s, const std::vector<double>& c);

// Single-sector scenario holding only sector m with unit weight.
Scenario restrict_to_sector(const Scenario& s, int m);

bool operator==(const Scenario& a, const Scenario& b);

}  // namespace rstn
