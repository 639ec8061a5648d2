#include "rstn/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "rstn/error.hpp"

namespace rstn {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::validation, msg); }

constexpr double kTol = 1e-10;

std::string pair_name(int m, int n) { return "(" + std::to_string(m) + "," + std::to_string(n) + ")"; }

}  // namespace

const char* to_string(Mode mode) noexcept { return mode == Mode::exact ? "exact" : "high_spin"; }

cplx LinkAmplitudes::amplitude(int link, TwiceSpin j) const {
  auto it = g.find({link, j.twice});
  return it == g.end() ? cplx{1.0, 0.0} : it->second;
}

const Eigen::MatrixXcd* IntertwinerBlockState::block(int m, int n) const {
  auto it = blocks.find({m, n});
  return it == blocks.end() ? nullptr : &it->second;
}

SectorLayout sector_layout(const ColoredGraph& graph, const SectorAssignment& sector) {
  SectorLayout out;
  const auto legs = vertex_legs(graph);
  const int n = graph.n_vertices;
  out.labels.resize(n);
  out.vertex_dims.resize(n);
  out.strides.assign(n, 1);
  for (int x = 0; x < n; ++x) {
    for (int c = 0; c < 4; ++c) out.labels[x][c] = sector.spins.at(legs[x][c]);
    const auto& l = out.labels[x];
    out.vertex_dims[x] = intertwiner_dimension(l[0], l[1], l[2], l[3]);
  }
  long total = 1;
  for (int x = n - 1; x >= 0; --x) {
    out.strides[x] = total;
    total *= out.vertex_dims[x];
  }
  out.total_dim = total;
  return out;
}

double link_state_purity(TwiceSpin j) { return 1.0 / dim_rep(j); }

double sector_trace(const Scenario& s, int m) {
  const auto* b = s.intertwiner.block(m, m);
  return b ? b->trace().real() : 0.0;
}

Eigen::MatrixXcd assemble_intertwiner(const Scenario& s) {
  std::vector<long> offset(s.n_sectors() + 1, 0);
  for (int m = 0; m < s.n_sectors(); ++m)
    offset[m + 1] = offset[m] + sector_layout(s.graph, s.sectors[m]).total_dim;
  Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(offset.back(), offset.back());
  for (const auto& [key, blk] : s.intertwiner.blocks)
    full.block(offset[key.first], offset[key.second], blk.rows(), blk.cols()) = blk;
  return full;
}

void validate_state(const Scenario& s) {
  validate(s.graph);
  validate_region(s.graph, s.region_C);
  if (s.sectors.empty()) fail("state: no sectors declared");
  if (s.lower_cutoff.twice < 0 || s.upper_cutoff < s.lower_cutoff) fail("cutoff: invalid cutoff pair");
  const int L = s.graph.n_links();
  std::vector<SectorLayout> layouts;
  for (int m = 0; m < s.n_sectors(); ++m) {
    const auto& sec = s.sectors[m];
    if (static_cast<int>(sec.spins.size()) != L)
      fail("state: sector " + std::to_string(m) + " does not assign exactly one spin per link");
    for (int e = 0; e < L; ++e) {
      const TwiceSpin j = sec.spins[e];
      if (j.twice < 0) fail("state: negative spin in sector " + std::to_string(m));
      if (j < s.lower_cutoff || s.upper_cutoff < j)
        fail("cutoff: spin on link " + std::to_string(e) + " of sector " + std::to_string(m) + " outside [lower, upper]");
    }
    for (int k = 0; k < m; ++k)
      if (s.sectors[k] == sec) fail("state: sectors " + std::to_string(k) + " and " + std::to_string(m) + " coincide");
    layouts.push_back(sector_layout(s.graph, sec));
  }
  for (const auto& [key, val] : s.amplitudes.g) {
    if (key.first < 0 || key.first >= L) fail("amplitudes: unknown link " + std::to_string(key.first));
    if (!std::isfinite(val.real()) || !std::isfinite(val.imag())) fail("amplitudes: non-finite value");
  }
  for (int e = 0; e < s.graph.n_internal(); ++e) {
    double sq = 0.0;
    std::vector<int> seen;
    for (const auto& sec : s.sectors) {
      const int t = sec.spins[e].twice;
      if (std::find(seen.begin(), seen.end(), t) != seen.end()) continue;
      seen.push_back(t);
      sq += std::norm(s.amplitudes.amplitude(e, sec.spins[e]));
    }
    if (!(sq > 0.0) || !std::isfinite(sq)) fail("amplitudes: internal link " + std::to_string(e) + " has zero total weight");
  }
  for (const auto& [key, blk] : s.intertwiner.blocks) {
    const auto [m, n] = key;
    if (m < 0 || n < 0 || m >= s.n_sectors() || n >= s.n_sectors()) fail("intertwiner: block " + pair_name(m, n) + " names a missing sector");
    if (blk.rows() != layouts[m].total_dim || blk.cols() != layouts[n].total_dim)
      fail("intertwiner: block " + pair_name(m, n) + " has shape " + std::to_string(blk.rows()) + "x" +
           std::to_string(blk.cols()) + ", expected " + std::to_string(layouts[m].total_dim) + "x" +
           std::to_string(layouts[n].total_dim));
    if (!blk.allFinite()) fail("intertwiner: block " + pair_name(m, n) + " has non-finite entries");
  }
  for (const auto& [key, blk] : s.intertwiner.blocks) {
    const auto [m, n] = key;
    const auto* other = s.intertwiner.block(n, m);
    const double scale = std::max(1.0, blk.cwiseAbs().maxCoeff());
    if (other == nullptr) {
      if (blk.size() > 0 && blk.cwiseAbs().maxCoeff() > kTol) fail("hermiticity: block " + pair_name(n, m) + " missing");
      continue;
    }
    if (blk.size() > 0 && (blk - other->adjoint()).cwiseAbs().maxCoeff() > kTol * scale)
      fail("hermiticity: block " + pair_name(m, n) + " is not the adjoint of " + pair_name(n, m));
  }
  double total = 0.0;
  for (int m = 0; m < s.n_sectors(); ++m) total += sector_trace(s, m);
  if (std::abs(total - 1.0) > kTol) fail("trace: total trace of rho^I is " + std::to_string(total) + ", expected 1");
  const Eigen::MatrixXcd full = assemble_intertwiner(s);
  if (full.rows() > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(full, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kTol) fail("psd: rho^I has eigenvalue " + std::to_string(es.eigenvalues().minCoeff()));
  }
  if (s.core && !(s.core->purity > 0.0 && s.core->purity <= 1.0)) fail("core: purity must lie in (0,1]");
}

Scenario with_weights(const Scenario& s, const std::vector<double>& c) {
  if (static_cast<int>(c.size()) != s.n_sectors()) throw Error(ErrorKind::validation, "weights: wrong length");
  double sum = 0.0;
  for (double v : c) {
    if (!(v >= 0.0)) throw Error(ErrorKind::validation, "weights: negative weight");
    sum += v;
  }
  if (!(sum > 0.0)) throw Error(ErrorKind::validation, "weights: all zero");
  std::vector<double> old(s.n_sectors()), scale(s.n_sectors());
  for (int m = 0; m < s.n_sectors(); ++m) {
    old[m] = sector_trace(s, m);
    const double target = c[m] / sum;
    if (old[m] <= 0.0 && target > 0.0)
      throw Error(ErrorKind::validation, "weights: sector " + std::to_string(m) + " carries no state to rescale");
    scale[m] = old[m] > 0.0 ? std::sqrt(target / old[m]) : 0.0;
  }
  Scenario out = s;
  for (auto& [key, blk] : out.intertwiner.blocks) blk *= scale[key.first] * scale[key.second];
  return out;
}

Scenario restrict_to_sector(const Scenario& s, int m) {
  if (m < 0 || m >= s.n_sectors()) throw Error(ErrorKind::validation, "restrict: no sector " + std::to_string(m));
  const double c = sector_trace(s, m);
  if (!(c > 0.0)) throw Error(ErrorKind::zero_weight, "restrict: sector " + std::to_string(m) + " has zero weight");
  Scenario out = s;
  out.sectors = {s.sectors[m]};
  out.intertwiner.blocks.clear();
  out.intertwiner.blocks[{0, 0}] = *s.intertwiner.block(m, m) / c;
  return out;
}

namespace {

bool same_graph(const ColoredGraph& a, const ColoredGraph& b) {
  if (a.n_vertices != b.n_vertices || a.n_internal() != b.n_internal() || a.n_boundary() != b.n_boundary()) return false;
  for (int e = 0; e < a.n_internal(); ++e) {
    const auto &x = a.internal_links[e], &y = b.internal_links[e];
    if (x.from != y.from || x.to != y.to || x.color != y.color) return false;
  }
  for (int e = 0; e < a.n_boundary(); ++e) {
    const auto &x = a.boundary_links[e], &y = b.boundary_links[e];
    if (x.vertex != y.vertex || x.color != y.color || x.side != y.side) return false;
  }
  return true;
}

}  // namespace

bool operator==(const Scenario& a, const Scenario& b) {
  if (!same_graph(a.graph, b.graph) || a.region_C.links != b.region_C.links || a.sectors != b.sectors ||
      !(a.amplitudes == b.amplitudes) || a.core != b.core || a.lower_cutoff != b.lower_cutoff ||
      a.upper_cutoff != b.upper_cutoff || a.mode != b.mode ||
      a.intertwiner.vertex_product != b.intertwiner.vertex_product ||
      a.intertwiner.blocks.size() != b.intertwiner.blocks.size())
    return false;
  for (const auto& [key, blk] : a.intertwiner.blocks) {
    const auto* other = b.intertwiner.block(key.first, key.second);
    if (!other || other->rows() != blk.rows() || other->cols() != blk.cols() || *other != blk) return false;
  }
  return true;
}

}  // namespace rstn
