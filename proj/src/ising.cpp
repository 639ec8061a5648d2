#include "rstn/ising.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rstn/error.hpp"
#include "rstn/mincut.hpp"
#include "rstn/parallel.hpp"

namespace rstn {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kSigmaTableBits = 20;
constexpr std::uint64_t kLeaf = 256;

bool is_down(IsingConfig sigma, int x) { return (sigma >> x) & 1u; }

// Offsets of every digit tuple over the listed vertices, first vertex most significant.
std::vector<long> digit_offsets(const SectorLayout& lay, const std::vector<int>& vertices) {
  std::vector<long> out{0};
  for (int x : vertices) {
    std::vector<long> next;
    next.reserve(out.size() * lay.vertex_dims[x]);
    for (long base : out)
      for (int i = 0; i < lay.vertex_dims[x]; ++i) next.push_back(base + i * lay.strides[x]);
    out.swap(next);
  }
  return out;
}

struct Ground {
  double energy = kInf;
  IsingConfig config = 0;
  std::uint64_t count = 0;

  void add(double e, IsingConfig c) { merge(Ground{e, c, 1}); }

  void merge(const Ground& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const double tol = 1e-12 * std::max(1.0, std::abs(energy));
    if (std::abs(o.energy - energy) <= tol) {
      count += o.count;
      if (lex_less(o.config, config)) config = o.config;
      energy = std::min(energy, o.energy);
    } else if (o.energy < energy) {
      *this = o;
    }
  }
};

struct Acc {
  LogWeight z0 = LogWeight::zero();
  LogWeight z1 = LogWeight::zero();
  Ground g0, g1;

  void merge(const Acc& o) {
    z0 += o.z0;
    z1 += o.z1;
    g0.merge(o.g0);
    g1.merge(o.g1);
  }
};

template <class Leaf>
Acc tree_reduce(std::uint64_t lo, std::uint64_t count, const Leaf& leaf) {
  if (count <= kLeaf) {
    Acc a;
    for (std::uint64_t i = lo; i < lo + count; ++i) leaf(i, a);
    return a;
  }
  Acc left = tree_reduce(lo, count / 2, leaf);
  left.merge(tree_reduce(lo + count / 2, count - count / 2, leaf));
  return left;
}

// Reduction over [0, total) whose shape depends only on total, never on worker count.
template <class Leaf>
Acc parallel_reduce(std::uint64_t total, const Leaf& leaf) {
  int depth = 0;
  while (depth < 8 && (total >> (depth + 1)) >= kLeaf) ++depth;
  const std::uint64_t chunks = std::uint64_t{1} << depth;
  std::vector<Acc> parts(chunks);
  const std::uint64_t size = total / chunks;
  parallel_for(chunks, [&](std::size_t c) { parts[c] = tree_reduce(c * size, size, leaf); });
  for (std::uint64_t width = 1; width < chunks; width *= 2)
    for (std::uint64_t i = 0; i + width < chunks; i += 2 * width) parts[i].merge(parts[i + width]);
  return parts[0];
}

}  // namespace

struct IsingModel::PairCache {
  IsingConfig nontrivial = 0;
  std::vector<int> bits;       // vertex of each compressed bit
  std::vector<double> table;   // Sigma_I per compressed down set, empty if too large
};

IsingModel::IsingModel(const Scenario& s, EngineOptions options) : s_(s), opt_(options) {
  validate(s_.graph);
  const int L = s_.graph.n_links();
  for (int m = 0; m < s_.n_sectors(); ++m) {
    if (static_cast<int>(s_.sectors[m].spins.size()) != L)
      throw Error(ErrorKind::validation, "state: sector " + std::to_string(m) + " does not assign every link");
    layouts_.push_back(sector_layout(s_.graph, s_.sectors[m]));
    c_.push_back(sector_trace(s_, m));
    std::vector<double> ld(L);
    for (int e = 0; e < L; ++e) ld[e] = std::log(static_cast<double>(dim_rep(s_.sectors[m].spins[e])));
    log_d_.push_back(std::move(ld));
    std::vector<int> key;
    for (const auto& lab : layouts_.back().labels)
      for (const auto& j : lab) key.push_back(j.twice);
    label_index_.emplace(std::move(key), m);
  }
  link_vertex_.resize(L);
  link_target_.assign(L, -1);
  in_C_.assign(L, 0);
  for (int e = 0; e < L; ++e) {
    link_vertex_[e] = link_source(s_.graph, e);
    if (s_.graph.is_internal(e)) link_target_[e] = s_.graph.internal_links[e].to;
  }
  for (int e : s_.region_C.links) in_C_.at(e) = 1;
}

IsingModel::~IsingModel() = default;

double IsingModel::boundary_energy(int m, IsingConfig sigma, int variant) const {
  double e_sum = 0.0;
  for (int e = s_.graph.n_internal(); e < s_.graph.n_links(); ++e) {
    const bool flipped = variant == 1 && in_C_[e];
    if (is_down(sigma, link_vertex_[e]) != flipped) e_sum += log_d_[m][e];
  }
  return e_sum;
}

double IsingModel::cut_energy(int m, IsingConfig sigma) const {
  double e_sum = 0.0;
  for (int e = 0; e < s_.graph.n_internal(); ++e)
    if (is_down(sigma, link_vertex_[e]) != is_down(sigma, link_target_[e])) e_sum += log_d_[m][e];
  return e_sum;
}

int IsingModel::delta_links(int m, int n, IsingConfig sigma, int variant) const {
  const auto& jm = s_.sectors[m].spins;
  const auto& jn = s_.sectors[n].spins;
  for (int e = 0; e < s_.graph.n_links(); ++e) {
    if (jm[e] == jn[e]) continue;
    bool active;
    if (s_.graph.is_internal(e)) {
      active = is_down(sigma, link_vertex_[e]) != is_down(sigma, link_target_[e]);
    } else {
      active = is_down(sigma, link_vertex_[e]) != (variant == 1 && in_C_[e]);
    }
    if (active) return 0;
  }
  return 1;
}

int IsingModel::delta(int m, int n, IsingConfig sigma, int variant) const {
  if (!delta_links(m, n, sigma, variant)) return 0;
  if (s_.intertwiner.vertex_product)
    for (int x = 0; x < n_vertices(); ++x)
      if (is_down(sigma, x) && layouts_[m].labels[x] != layouts_[n].labels[x]) return 0;
  return 1;
}

int IsingModel::lookup_sector(int m, int n, IsingConfig down) const {
  std::vector<int> key;
  key.reserve(4 * n_vertices());
  for (int x = 0; x < n_vertices(); ++x) {
    const auto& lab = is_down(down, x) ? layouts_[n].labels[x] : layouts_[m].labels[x];
    for (const auto& j : lab) key.push_back(j.twice);
  }
  auto it = label_index_.find(key);
  return it == label_index_.end() ? -1 : it->second;
}

double IsingModel::sigma_I_direct(int m, int n, IsingConfig down) const {
  if (!(c_[m] > 0.0) || !(c_[n] > 0.0))
    throw Error(ErrorKind::zero_weight, "Sigma_I: sector " + std::to_string(c_[m] > 0.0 ? n : m) + " has zero weight");
  // Mixed sectors: labels of n on down vertices with m elsewhere, and the reverse.
  const int q = lookup_sector(m, n, down);
  const int qp = lookup_sector(n, m, down);
  if (q < 0 || qp < 0) return kInf;
  const auto* A = s_.intertwiner.block(q, m);
  const auto* B = s_.intertwiner.block(qp, n);
  if (!A || !B) return kInf;
  std::vector<int> dn, up;
  for (int x = 0; x < n_vertices(); ++x) (is_down(down, x) ? dn : up).push_back(x);
  const auto oq_d = digit_offsets(layouts_[q], dn), oq_u = digit_offsets(layouts_[q], up);
  const auto om_d = digit_offsets(layouts_[m], dn), om_u = digit_offsets(layouts_[m], up);
  const auto oqp_d = digit_offsets(layouts_[qp], dn), oqp_u = digit_offsets(layouts_[qp], up);
  const auto on_d = digit_offsets(layouts_[n], dn), on_u = digit_offsets(layouts_[n], up);
  // R_m[b,a] = sum_c A[(b,c),(a,c)], R_n[a,b] = sum_c B[(a,c),(b,c)].
  const long nb = static_cast<long>(oq_d.size()), na = static_cast<long>(om_d.size());
  Eigen::MatrixXcd Rm = Eigen::MatrixXcd::Zero(nb, na), Rn = Eigen::MatrixXcd::Zero(na, nb);
  for (long b = 0; b < nb; ++b)
    for (long a = 0; a < na; ++a) {
      cplx acc{0.0, 0.0};
      for (std::size_t c = 0; c < om_u.size(); ++c) acc += (*A)(oq_d[b] + oq_u[c], om_d[a] + om_u[c]);
      Rm(b, a) = acc;
      cplx acc2{0.0, 0.0};
      for (std::size_t c = 0; c < on_u.size(); ++c) acc2 += (*B)(oqp_d[a] + oqp_u[c], on_d[b] + on_u[c]);
      Rn(a, b) = acc2;
    }
  const cplx num = (Rm * Rn).trace();
  const double norm = c_[m] * c_[n];
  if (std::abs(num.imag()) > 1e-10 * norm + 1e-8 * std::abs(num.real()))
    throw Error(ErrorKind::unsupported,
                "Sigma_I: complex two-copy intertwiner trace for sectors (" + std::to_string(m) + "," +
                    std::to_string(n) + "); coherences between sectors differing on both sides of the cut are not supported");
  if (num.real() < -1e-10 * norm)
    throw Error(ErrorKind::unsupported, "Sigma_I: negative two-copy intertwiner trace");
  const double val = num.real() / norm;
  return val > 0.0 ? -std::log(val) : kInf;
}

const IsingModel::PairCache& IsingModel::cache(int m, int n) const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto& slot = caches_[{m, n}];
  if (slot) return *slot;
  auto pc = std::make_unique<PairCache>();
  for (int x = 0; x < n_vertices(); ++x) {
    const bool trivial = layouts_[m].vertex_dims[x] == 1 && layouts_[n].vertex_dims[x] == 1 &&
                         layouts_[m].labels[x] == layouts_[n].labels[x];
    if (!trivial) {
      pc->nontrivial |= IsingConfig{1} << x;
      pc->bits.push_back(x);
    }
  }
  if (static_cast<int>(pc->bits.size()) <= kSigmaTableBits) {
    const std::size_t size = std::size_t{1} << pc->bits.size();
    pc->table.resize(size);
    std::vector<int> bits = pc->bits;
    parallel_for(size, [&, bits](std::size_t k) {
      IsingConfig down = 0;
      for (std::size_t b = 0; b < bits.size(); ++b)
        if ((k >> b) & 1u) down |= IsingConfig{1} << bits[b];
      pc->table[k] = sigma_I_direct(m, n, down);
    });
  }
  slot = std::move(pc);
  return *slot;
}

double IsingModel::cached_sigma_I(const PairCache& pc, int m, int n, IsingConfig sigma) const {
  const IsingConfig down = sigma & pc.nontrivial;
  if (pc.table.empty()) return sigma_I_direct(m, n, down);
  std::size_t k = 0;
  for (std::size_t b = 0; b < pc.bits.size(); ++b)
    if ((down >> pc.bits[b]) & 1u) k |= std::size_t{1} << b;
  return pc.table[k];
}

double IsingModel::sigma_I(int m, int n, IsingConfig sigma) const { return sigma_I_direct(m, n, sigma); }

double IsingModel::hamiltonian(int m, int n, IsingConfig sigma, int variant) const {
  return boundary_energy(m, sigma, variant) + cut_energy(m, sigma) + sigma_I(m, n, sigma);
}

double IsingModel::bulk_energy(int m, int n, IsingConfig sigma) const {
  return cut_energy(m, sigma) + cached_sigma_I(cache(m, n), m, n, sigma);
}

double IsingModel::hamiltonian_bulk_boundary(int m, IsingConfig sigma, int variant) const {
  double e_sum = 0.0;
  for (int e = s_.graph.n_internal(); e < s_.graph.n_links(); ++e)
    if (is_down(sigma, link_vertex_[e])) e_sum += log_d_[m][e];
  e_sum += cut_energy(m, sigma);
  // Bulk pinning: b = -1 on every vertex for variant 1, +1 for variant 0.
  for (int x = 0; x < n_vertices(); ++x)
    if (is_down(sigma, x) != (variant == 1)) e_sum += std::log(static_cast<double>(layouts_[m].vertex_dims[x]));
  return e_sum;
}

LogWeight IsingModel::sector_weight(int m) const {
  if (!(c_.at(m) > 0.0)) return LogWeight::zero();
  double log_k = std::log(c_[m]);
  for (int e = 0; e < s_.graph.n_links(); ++e) {
    if (s_.graph.is_internal(e)) {
      const double g2 = std::norm(s_.amplitudes.amplitude(e, s_.sectors[m].spins[e]));
      if (!(g2 > 0.0)) return LogWeight::zero();
      log_k += std::log(g2);
    } else {
      log_k += log_d_[m][e];
    }
  }
  return LogWeight::from_log(log_k);
}

void IsingModel::check_size(Mode mode) const {
  if (n_vertices() <= opt_.vertex_cap) return;
  if (!opt_.allow_override)
    throw Error(ErrorKind::size_cap, "enumeration: " + std::to_string(n_vertices()) + " vertices exceed the cap of " +
                                         std::to_string(opt_.vertex_cap));
  if (mode != Mode::high_spin)
    throw Error(ErrorKind::size_cap, "enumeration: beyond the vertex cap only high_spin mode is available");
}

SectorPairResult IsingModel::partition_pair(int m, int n, Mode mode) const {
  check_size(mode);
  SectorPairResult out;
  out.mode = mode;
  const int N = n_vertices();

  if (N > opt_.vertex_cap) {
    // High-spin ground states by minimum cut; requires Sigma_I to reduce to hard constraints.
    for (int x = 0; x < N; ++x)
      if (layouts_[m].vertex_dims[x] != 1 || layouts_[n].vertex_dims[x] != 1)
        throw Error(ErrorKind::size_cap, "enumeration: beyond the cap, intertwiner spaces must be one-dimensional");
    for (const auto& [key, blk] : s_.intertwiner.blocks)
      if (key.first != key.second && blk.size() > 0 && blk.cwiseAbs().maxCoeff() > 0.0)
        throw Error(ErrorKind::size_cap, "enumeration: beyond the cap, rho^I must be sector-diagonal");
    if (!(c_[m] > 0.0) || !(c_[n] > 0.0)) throw Error(ErrorKind::zero_weight, "partition: zero-weight sector");
    const auto& jm = s_.sectors[m].spins;
    const auto& jn = s_.sectors[n].spins;
    for (int variant = 0; variant < 2; ++variant) {
      CutProblem p;
      p.n = N;
      p.cost_up.assign(N, 0.0);
      p.cost_down.assign(N, 0.0);
      for (int x = 0; x < N; ++x)
        if (layouts_[m].labels[x] != layouts_[n].labels[x]) p.cost_down[x] = kInf;
      for (int e = s_.graph.n_internal(); e < s_.graph.n_links(); ++e) {
        const int x = link_vertex_[e];
        const bool flipped = variant == 1 && in_C_[e];
        double& slot = flipped ? p.cost_up[x] : p.cost_down[x];
        slot = jm[e] == jn[e] ? slot + log_d_[m][e] : kInf;
      }
      for (int e = 0; e < s_.graph.n_internal(); ++e)
        p.edges.push_back({link_vertex_[e], link_target_[e], jm[e] == jn[e] ? log_d_[m][e] : kInf});
      const auto sol = solve_min_cut(p);
      double& ge = variant == 0 ? out.ground_energy_0 : out.ground_energy_1;
      IsingConfig& gc = variant == 0 ? out.ground_config_0 : out.ground_config_1;
      LogWeight& z = variant == 0 ? out.z0 : out.z1;
      if (sol) {
        ge = sol->energy;
        gc = sol->down;
        z = LogWeight::from_energy(sol->energy);
      } else {
        ge = kInf;
        z = LogWeight::zero();
      }
    }
    return out;
  }

  const PairCache& pc = cache(m, n);
  auto leaf = [&](IsingConfig sigma, Acc& acc) {
    const int d0 = delta(m, n, sigma, 0);
    const int d1 = delta(m, n, sigma, 1);
    if (!d0 && !d1) return;
    const double sig = cached_sigma_I(pc, m, n, sigma);
    if (!std::isfinite(sig)) return;
    const double bulk = cut_energy(m, sigma) + sig;
    if (d0) {
      const double e = bulk + boundary_energy(m, sigma, 0);
      acc.z0 += LogWeight::from_energy(e);
      acc.g0.add(e, sigma);
    }
    if (d1) {
      const double e = bulk + boundary_energy(m, sigma, 1);
      acc.z1 += LogWeight::from_energy(e);
      acc.g1.add(e, sigma);
    }
  };
  const Acc acc = parallel_reduce(std::uint64_t{1} << N, leaf);
  out.ground_energy_0 = acc.g0.energy;
  out.ground_energy_1 = acc.g1.energy;
  out.ground_config_0 = acc.g0.config;
  out.ground_config_1 = acc.g1.config;
  out.degeneracy_0 = acc.g0.count;
  out.degeneracy_1 = acc.g1.count;
  if (mode == Mode::exact) {
    out.z0 = acc.z0;
    out.z1 = acc.z1;
  } else {
    out.z0 = acc.g0.count ? LogWeight::from_energy(acc.g0.energy) : LogWeight::zero();
    out.z1 = acc.g1.count ? LogWeight::from_energy(acc.g1.energy) : LogWeight::zero();
  }
  return out;
}

LogWeight IsingModel::partition_with_boundary(int m, int n, const std::function<LogWeight(IsingConfig)>& boundary,
                                              Mode mode) const {
  check_size(mode);
  if (mode == Mode::high_spin) {
    const auto pr = partition_pair(m, n, mode);
    if (!std::isfinite(pr.ground_energy_0)) return LogWeight::zero();
    const IsingConfig g = pr.ground_config_0;
    return LogWeight::from_energy(bulk_energy(m, n, g)) * boundary(g);
  }
  const PairCache& pc = cache(m, n);
  auto leaf = [&](IsingConfig sigma, Acc& acc) {
    if (!delta(m, n, sigma, 0)) return;
    const double sig = cached_sigma_I(pc, m, n, sigma);
    if (!std::isfinite(sig)) return;
    acc.z0 += LogWeight::from_energy(cut_energy(m, sigma) + sig) * boundary(sigma);
  };
  return parallel_reduce(std::uint64_t{1} << n_vertices(), leaf).z0;
}

std::vector<TermRecord> IsingModel::terms(int m, int n) const {
  if (n_vertices() > 16) throw Error(ErrorKind::size_cap, "terms: more than 16 vertices");
  std::vector<TermRecord> out;
  const PairCache& pc = cache(m, n);
  for (IsingConfig sigma = 0; sigma < (IsingConfig{1} << n_vertices()); ++sigma)
    for (int variant = 0; variant < 2; ++variant) {
      if (!delta(m, n, sigma, variant)) continue;
      const double e = boundary_energy(m, sigma, variant) + cut_energy(m, sigma) + cached_sigma_I(pc, m, n, sigma);
      if (std::isfinite(e)) out.push_back({m, n, sigma, variant, e});
    }
  return out;
}

PurityResult analyze_purity(const IsingModel& model, Mode mode) {
  const int K = model.n_sectors();
  PurityResult out;
  out.mode = mode;
  out.weights.resize(K);
  for (int m = 0; m < K; ++m) out.weights[m] = model.sector_weight(m);
  out.pairs.resize(static_cast<std::size_t>(K) * K);
  std::vector<LogWeight> w0(out.pairs.size(), LogWeight::zero());
  for (int m = 0; m < K; ++m)
    for (int n = 0; n < K; ++n) {
      if (out.weights[m].is_zero() || out.weights[n].is_zero()) continue;
      auto& pr = out.pairs[m * K + n];
      pr = model.partition_pair(m, n, mode);
      const LogWeight kk = out.weights[m] * out.weights[n];
      w0[m * K + n] = kk * pr.z0;
      out.z0 += w0[m * K + n];
      out.z1 += kk * pr.z1;
    }
  if (out.z0.is_zero()) throw Error(ErrorKind::degenerate, "distribution: Z_0 vanishes");
  out.P = Eigen::MatrixXd::Zero(K, K);
  for (int m = 0; m < K; ++m)
    for (int n = 0; n < K; ++n) out.P(m, n) = (w0[m * K + n] / out.z0).value();
  out.purity = (out.z1 / out.z0).value();
  return out;
}

PurityResult analyze_purity(const Scenario& s, EngineOptions options) {
  validate_state(s);
  IsingModel model(s, options);
  return analyze_purity(model, s.mode);
}

int delta_factor(const Scenario& s, int m, int n, IsingConfig sigma, int variant) {
  return IsingModel(s).delta(m, n, sigma, variant);
}

LogWeight sigma_I(const Scenario& s, int m, int n, IsingConfig sigma) {
  return LogWeight::from_energy(IsingModel(s).sigma_I(m, n, sigma));
}

double hamiltonian(const Scenario& s, int m, int n, IsingConfig sigma, int variant) {
  return IsingModel(s).hamiltonian(m, n, sigma, variant);
}

double hamiltonian_bulk_boundary(const Scenario& s, int m, IsingConfig sigma, int variant) {
  return IsingModel(s).hamiltonian_bulk_boundary(m, sigma, variant);
}

SectorPairResult partition_pair(const Scenario& s, int m, int n, EngineOptions options) {
  return IsingModel(s, options).partition_pair(m, n);
}

LogWeight sector_weight(const Scenario& s, int m) { return IsingModel(s).sector_weight(m); }

Eigen::MatrixXd distribution(const Scenario& s, EngineOptions options) { return analyze_purity(s, options).P; }

double purity(const Scenario& s, EngineOptions options) { return analyze_purity(s, options).purity; }

double purity_map(const Scenario& s, const Eigen::MatrixXcd& rho) {
  if (s.n_sectors() != 1) throw Error(ErrorKind::not_single_sector, "purity map: scenario has several sectors");
  Scenario t = s;
  t.intertwiner.blocks.clear();
  t.intertwiner.blocks[{0, 0}] = rho;
  IsingModel model(t);
  return model.partition_pair(0, 0, Mode::exact).z1.value();
}

namespace {

// Partial trace keeping the vertices in `keep`.
Eigen::MatrixXcd reduce_to(const Eigen::MatrixXcd& rho, const SectorLayout& lay, std::uint64_t keep) {
  const int N = static_cast<int>(lay.vertex_dims.size());
  long dk = 1, dt = 1;
  std::vector<int> kv, tv;
  for (int x = 0; x < N; ++x) {
    if ((keep >> x) & 1u) {
      kv.push_back(x);
      dk *= lay.vertex_dims[x];
    } else {
      tv.push_back(x);
      dt *= lay.vertex_dims[x];
    }
  }
  auto index_of = [&](long a, long c) {
    long idx = 0;
    for (int i = static_cast<int>(kv.size()) - 1; i >= 0; --i) {
      const int x = kv[i];
      idx += (a % lay.vertex_dims[x]) * lay.strides[x];
      a /= lay.vertex_dims[x];
    }
    for (int i = static_cast<int>(tv.size()) - 1; i >= 0; --i) {
      const int x = tv[i];
      idx += (c % lay.vertex_dims[x]) * lay.strides[x];
      c /= lay.vertex_dims[x];
    }
    return idx;
  };
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(dk, dk);
  for (long a = 0; a < dk; ++a)
    for (long b = 0; b < dk; ++b)
      for (long c = 0; c < dt; ++c) out(a, b) += rho(index_of(a, c), index_of(b, c));
  return out;
}

}  // namespace

double purity_gradient(const Scenario& s, const Eigen::MatrixXcd& X) {
  if (s.n_sectors() != 1) throw Error(ErrorKind::not_single_sector, "purity gradient: scenario has several sectors");
  const auto* blk = s.intertwiner.block(0, 0);
  if (!blk) throw Error(ErrorKind::zero_weight, "purity gradient: empty intertwiner block");
  const Eigen::MatrixXcd& rho = *blk;
  const SectorLayout lay = sector_layout(s.graph, s.sectors[0]);
  const auto& g = s.graph;
  const int N = g.n_vertices;
  const double T = rho.trace().real();
  const double trX = X.trace().real();
  double total = 0.0;
  for (std::uint64_t S = 0; S < (std::uint64_t{1} << N); ++S) {
    // alpha_S: inverse dimensions over cut internal links and boundary links in (boundary of S) xor C.
    double log_alpha = 0.0;
    for (int e = 0; e < g.n_links(); ++e) {
      const TwiceSpin j = s.sectors[0].spins[e];
      bool counted;
      if (g.is_internal(e)) {
        const auto& l = g.internal_links[e];
        counted = ((S >> l.from) & 1u) != ((S >> l.to) & 1u);
      } else {
        counted = (((S >> g.boundary(e).vertex) & 1u) != 0) != s.region_C.contains(e);
      }
      if (counted) log_alpha -= std::log(static_cast<double>(dim_rep(j)));
    }
    const std::uint64_t down = S;
    const Eigen::MatrixXcd rS = reduce_to(rho, lay, down);
    const Eigen::MatrixXcd xS = reduce_to(X, lay, down);
    const double inner = (rS.adjoint() * xS).trace().real();
    const double pur = rS.squaredNorm();
    total += std::exp(log_alpha) * (2.0 / (T * T)) * (inner - (trX / T) * pur);
  }
  return total;
}

}  // namespace rstn
