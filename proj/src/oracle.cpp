#include "rstn/oracle.hpp"

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "rstn/error.hpp"
#include "rstn/parallel.hpp"
#include "rstn/spin.hpp"

namespace rstn {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream_a, std::uint64_t stream_b)
    : key_(splitmix64(seed ^ splitmix64(splitmix64(stream_a) ^ (stream_b * 0xD1B54A32D192ED03ull)))) {}

std::uint64_t CounterRng::next_u64() { return splitmix64(key_ + 0x9E3779B97F4A7C15ull * ++counter_); }

double CounterRng::uniform() { return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53; }

double CounterRng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  const double r = std::sqrt(-2.0 * std::log(uniform()));
  const double phi = 2.0 * std::numbers::pi * uniform();
  spare_ = r * std::sin(phi);
  has_spare_ = true;
  return r * std::cos(phi);
}

Eigen::MatrixXcd haar_unitary(int D, CounterRng& rng) {
  Eigen::MatrixXcd G(D, D);
  for (int j = 0; j < D; ++j)
    for (int i = 0; i < D; ++i) G(i, j) = cplx(rng.normal(), rng.normal()) / std::sqrt(2.0);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(G);
  Eigen::MatrixXcd Q = qr.householderQ() * Eigen::MatrixXcd::Identity(D, D);
  const Eigen::MatrixXcd& R = qr.matrixQR();
  for (int i = 0; i < D; ++i) {
    const double a = std::abs(R(i, i));
    if (a > 0.0) Q.col(i) *= R(i, i) / a;
  }
  return Q;
}

Eigen::VectorXcd haar_vector(int D, CounterRng& rng) {
  Eigen::VectorXcd g(D);
  for (int i = 0; i < D; ++i) g(i) = cplx(rng.normal(), rng.normal()) / std::sqrt(2.0);
  return g / g.norm();
}

namespace {

using Label = std::array<int, 4>;

// Sector bookkeeping rebuilt from the raw scenario.
struct SectorTable {
  std::vector<std::vector<Label>> labels;  // [sector][vertex]
  std::vector<std::vector<int>> dims;      // [sector][vertex]
  std::vector<std::vector<long>> strides;  // [sector][vertex]
  std::vector<long> total;
  std::map<std::vector<Label>, int> index;

  explicit SectorTable(const Scenario& s) {
    const auto legs = vertex_legs(s.graph);
    const int N = s.graph.n_vertices;
    for (int q = 0; q < s.n_sectors(); ++q) {
      std::vector<Label> lab(N);
      std::vector<int> dm(N);
      for (int x = 0; x < N; ++x) {
        std::array<TwiceSpin, 4> js{};
        for (int c = 0; c < 4; ++c) {
          js[c] = s.sectors[q].spins.at(legs[x][c]);
          lab[x][c] = js[c].twice;
        }
        dm[x] = intertwiner_dimension(js[0], js[1], js[2], js[3]);
      }
      std::vector<long> st(N, 1);
      long t = 1;
      for (int x = N - 1; x >= 0; --x) {
        st[x] = t;
        t *= dm[x];
      }
      index.emplace(lab, q);
      labels.push_back(std::move(lab));
      dims.push_back(std::move(dm));
      strides.push_back(std::move(st));
      total.push_back(t);
    }
  }

  int find(const std::vector<Label>& lab) const {
    auto it = index.find(lab);
    return it == index.end() ? -1 : it->second;
  }
};

cplx rho_element(const Scenario& s, int q, long i, int r, long j) {
  const auto* b = s.intertwiner.block(q, r);
  return b ? (*b)(i, j) : cplx{0.0, 0.0};
}

// Amplitude of the link state at semilink pair ((js, ms), (jt, mt)); ms, mt are basis indices.
cplx gamma(int js, int ms, int jt, int mt, cplx g) {
  if (js != jt) return {0.0, 0.0};
  if ((-js + 2 * ms) + (-jt + 2 * mt) != 0) return {0.0, 0.0};
  const double sign = (ms % 2 == 0) ? 1.0 : -1.0;  // (-1)^(j+m), j+m = ms
  return g * sign / std::sqrt(static_cast<double>(js + 1));
}

struct Semi {
  int j, mu;
  bool operator==(const Semi&) const = default;
};

cplx internal_factor(int j, int k, cplx gj, cplx gk, bool down_s, bool down_t) {
  cplx acc{0.0, 0.0};
  for (int a1 = 0; a1 <= j; ++a1)
    for (int b1 = 0; b1 <= j; ++b1)
      for (int a2 = 0; a2 <= k; ++a2)
        for (int b2 = 0; b2 <= k; ++b2) {
          const Semi x1s{j, a1}, x1t{j, b1}, x2s{k, a2}, x2t{k, b2};
          const Semi y1s = down_s ? x2s : x1s, y1t = down_t ? x2t : x1t;
          const Semi y2s = down_s ? x1s : x2s, y2t = down_t ? x1t : x2t;
          const cplx g_y1 = y1s.j == j ? gj : gk;
          const cplx g_y2 = y2s.j == k ? gk : gj;
          acc += gamma(x1s.j, x1s.mu, x1t.j, x1t.mu, gj) * std::conj(gamma(y1s.j, y1s.mu, y1t.j, y1t.mu, g_y1)) *
                 gamma(x2s.j, x2s.mu, x2t.j, x2t.mu, gk) * std::conj(gamma(y2s.j, y2s.mu, y2t.j, y2t.mu, g_y2));
        }
  return acc;
}

double boundary_factor_count(int j, int k, bool swapped) {
  double count = 0.0;
  for (int a1 = 0; a1 <= j; ++a1)
    for (int a2 = 0; a2 <= k; ++a2) {
      const Semi x1{j, a1}, x2{k, a2};
      const Semi y1 = swapped ? x2 : x1, y2 = swapped ? x1 : x2;
      if (x1 == y1 && x2 == y2) count += 1.0;
    }
  return count;
}

constexpr double kMaxWork = 1e7;

}  // namespace

double link_swap_trace(TwiceSpin j, TwiceSpin k, cplx g_j, cplx g_k, bool swapped) {
  return internal_factor(j.twice, k.twice, g_j, g_k, swapped, false).real();
}

double exact_term(const Scenario& s, int m, int n, IsingConfig sigma, int variant) {
  const SectorTable tab(s);
  const int N = s.graph.n_vertices;
  const auto& jm = s.sectors.at(m).spins;
  const auto& jn = s.sectors.at(n).spins;

  double work = static_cast<double>(tab.total[m]) * static_cast<double>(tab.total[n]);
  for (int e = 0; e < s.graph.n_internal(); ++e) work += std::pow(double(dim_rep(jm[e])) * dim_rep(jn[e]), 2);
  if (work > kMaxWork) throw Error(ErrorKind::size_cap, "oracle: doubled space too large for explicit contraction");

  auto down = [&](int x) { return ((sigma >> x) & 1u) != 0; };

  // Intertwiner tensors: copy 1 column in sector m, copy 2 column in sector n.
  std::vector<Label> lab1p(N), lab2p(N);
  for (int x = 0; x < N; ++x) {
    lab1p[x] = down(x) ? tab.labels[n][x] : tab.labels[m][x];
    lab2p[x] = down(x) ? tab.labels[m][x] : tab.labels[n][x];
  }
  const int q1 = tab.find(lab1p), q2 = tab.find(lab2p);
  cplx inter{0.0, 0.0};
  if (q1 >= 0 && q2 >= 0) {
    for (long i1 = 0; i1 < tab.total[m]; ++i1)
      for (long i2 = 0; i2 < tab.total[n]; ++i2) {
        long y1 = 0, y2 = 0;
        for (int x = 0; x < N; ++x) {
          const long d1 = (i1 / tab.strides[m][x]) % tab.dims[m][x];
          const long d2 = (i2 / tab.strides[n][x]) % tab.dims[n][x];
          y1 += (down(x) ? d2 : d1) * tab.strides[q1][x];
          y2 += (down(x) ? d1 : d2) * tab.strides[q2][x];
        }
        inter += rho_element(s, q1, y1, m, i1) * rho_element(s, q2, y2, n, i2);
      }
  }

  cplx total = inter;
  for (int e = 0; e < s.graph.n_internal(); ++e) {
    const auto& l = s.graph.internal_links[e];
    total *= internal_factor(jm[e].twice, jn[e].twice, s.amplitudes.amplitude(e, jm[e]),
                             s.amplitudes.amplitude(e, jn[e]), down(l.from), down(l.to));
  }
  for (int e = s.graph.n_internal(); e < s.graph.n_links(); ++e) {
    const bool swapped = down(s.graph.boundary(e).vertex) != (variant == 1 && s.region_C.contains(e));
    total *= boundary_factor_count(jm[e].twice, jn[e].twice, swapped);
  }
  return total.real();
}

OracleResult exact_oracle_purity(const Scenario& s) {
  const int N = s.graph.n_vertices;
  if (N > 16) throw Error(ErrorKind::size_cap, "oracle: too many vertices for explicit enumeration");
  const int K = s.n_sectors();
  OracleResult out;
  for (int m = 0; m < K; ++m)
    for (int n = 0; n < K; ++n)
      for (IsingConfig sg = 0; sg < (IsingConfig{1} << N); ++sg) {
        out.z0 += exact_term(s, m, n, sg, 0);
        out.z1 += exact_term(s, m, n, sg, 1);
      }
  if (!(out.z0 > 0.0)) throw Error(ErrorKind::degenerate, "oracle: Z_0 vanishes");
  out.purity = out.z1 / out.z0;
  return out;
}

namespace {

struct VertexSpace {
  struct Block {
    long offset;
    int dim_I;
    std::array<long, 4> leg_stride;
    long leg_total;
  };
  std::map<Label, Block> blocks;
  long dim = 0;
};

struct McTerm {
  std::vector<long> vertex_index;
  long zeta;
  cplx gamma;
  long iC, iCc;
};

}  // namespace

McResult mc_haar_purity(const Scenario& s, long samples, std::uint64_t seed) {
  if (samples < 2) throw Error(ErrorKind::validation, "oracle: at least two samples are required");
  const SectorTable tab(s);
  const int N = s.graph.n_vertices;
  const int K = s.n_sectors();

  std::vector<VertexSpace> spaces(N);
  for (int x = 0; x < N; ++x) {
    for (int q = 0; q < K; ++q) {
      const Label& lab = tab.labels[q][x];
      if (tab.dims[q][x] == 0 || spaces[x].blocks.count(lab)) continue;
      VertexSpace::Block b{0, tab.dims[q][x], {}, 1};
      for (int c = 3; c >= 0; --c) {
        b.leg_stride[c] = b.leg_total;
        b.leg_total *= lab[c] + 1;
      }
      spaces[x].blocks.emplace(lab, b);
    }
    long off = 0;
    for (auto& [lab, b] : spaces[x].blocks) {
      b.offset = off;
      off += b.dim_I * b.leg_total;
    }
    spaces[x].dim = off;
    if (off > 512) throw Error(ErrorKind::size_cap, "oracle: vertex Hilbert space above 512");
  }

  // Boundary spaces: direct sum over the spins carried by each link.
  const int L = s.graph.n_links();
  std::vector<std::map<int, long>> spin_offset(L);
  std::vector<long> link_dim(L, 0), stride(L, 0);
  long dimC = 1, dimCc = 1;
  for (int e = s.graph.n_internal(); e < L; ++e) {
    for (int q = 0; q < K; ++q) spin_offset[e].emplace(s.sectors[q].spins[e].twice, 0);
    for (auto& [j, off] : spin_offset[e]) {
      off = link_dim[e];
      link_dim[e] += j + 1;
    }
  }
  for (int e = L - 1; e >= s.graph.n_internal(); --e) {
    long& d = s.region_C.contains(e) ? dimC : dimCc;
    stride[e] = d;
    d *= link_dim[e];
  }
  if (static_cast<double>(dimC) * static_cast<double>(dimCc) > double(1 << 22))
    throw Error(ErrorKind::size_cap, "oracle: boundary Hilbert space too large");

  const Eigen::MatrixXcd rho = assemble_intertwiner(s);
  std::vector<long> sector_offset(K + 1, 0);
  for (int q = 0; q < K; ++q) sector_offset[q + 1] = sector_offset[q] + tab.total[q];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(rho);
  const double lmax = eig.eigenvalues().cwiseAbs().maxCoeff();
  std::vector<Eigen::VectorXcd> zeta;
  for (int r = 0; r < eig.eigenvalues().size(); ++r)
    if (eig.eigenvalues()(r) > 1e-13 * lmax) zeta.push_back(eig.eigenvectors().col(r) * std::sqrt(eig.eigenvalues()(r)));

  // Every nonzero amplitude of <zeta|<Gamma|Psi> as a term list.
  std::vector<McTerm> terms;
  for (int q = 0; q < K; ++q) {
    if (tab.total[q] == 0) continue;
    const auto& js = s.sectors[q].spins;
    std::vector<long> radix;
    radix.push_back(tab.total[q]);
    for (int e = 0; e < L; ++e) radix.push_back(js[e].twice + 1);
    long count = 1;
    for (long r : radix) count *= r;
    if (count > (1L << 24)) throw Error(ErrorKind::size_cap, "oracle: sector amplitude table too large");
    for (long t = 0; t < count; ++t) {
      long rem = t;
      std::vector<long> digit(radix.size());
      for (std::size_t k = radix.size(); k-- > 0;) {
        digit[k] = rem % radix[k];
        rem /= radix[k];
      }
      const long i = digit[0];
      McTerm term{std::vector<long>(N), sector_offset[q] + i, {1.0, 0.0}, 0, 0};
      // Magnetic index on each leg: source end digit, target end mirrored.
      std::vector<std::array<long, 4>> leg_mu(N);
      for (int e = 0; e < L; ++e) {
        const long mu = digit[1 + e];
        if (s.graph.is_internal(e)) {
          const auto& l = s.graph.internal_links[e];
          const int j = js[e].twice;
          term.gamma *= std::conj(gamma(j, static_cast<int>(mu), j, j - static_cast<int>(mu), s.amplitudes.amplitude(e, js[e])));
          leg_mu[l.from][l.color - 1] = mu;
          leg_mu[l.to][l.color - 1] = j - mu;
        } else {
          const auto& b = s.graph.boundary(e);
          leg_mu[b.vertex][b.color - 1] = mu;
          const long local = spin_offset[e].at(js[e].twice) + mu;
          (s.region_C.contains(e) ? term.iC : term.iCc) += local * stride[e];
        }
      }
      if (term.gamma == cplx{0.0, 0.0}) continue;
      for (int x = 0; x < N; ++x) {
        const auto& blk = spaces[x].blocks.at(tab.labels[q][x]);
        const long ix = (i / tab.strides[q][x]) % tab.dims[q][x];
        long idx = blk.offset + ix * blk.leg_total;
        for (int c = 0; c < 4; ++c) idx += leg_mu[x][c] * blk.leg_stride[c];
        term.vertex_index[x] = idx;
      }
      terms.push_back(std::move(term));
    }
  }

  std::vector<double> num(samples), den(samples);
  parallel_for(static_cast<std::size_t>(samples), [&](std::size_t sample) {
    std::vector<Eigen::VectorXcd> psi(N);
    for (int x = 0; x < N; ++x) {
      CounterRng rng(seed, sample, static_cast<std::uint64_t>(x));
      psi[x] = haar_vector(static_cast<int>(spaces[x].dim), rng);
    }
    std::vector<cplx> amp(terms.size());
    for (std::size_t t = 0; t < terms.size(); ++t) {
      cplx a = terms[t].gamma;
      for (int x = 0; x < N; ++x) a *= psi[x](terms[t].vertex_index[x]);
      amp[t] = a;
    }
    Eigen::MatrixXcd rhoC = Eigen::MatrixXcd::Zero(dimC, dimC);
    double tr = 0.0;
    Eigen::MatrixXcd M(dimC, dimCc);
    for (const auto& z : zeta) {
      M.setZero();
      for (std::size_t t = 0; t < terms.size(); ++t) M(terms[t].iC, terms[t].iCc) += std::conj(z(terms[t].zeta)) * amp[t];
      rhoC.noalias() += M * M.adjoint();
      tr += M.squaredNorm();
    }
    num[sample] = rhoC.squaredNorm();
    den[sample] = tr * tr;
  });

  double sn = 0.0, sd = 0.0;
  for (long k = 0; k < samples; ++k) {
    sn += num[k];
    sd += den[k];
  }
  if (!(sd > 0.0)) throw Error(ErrorKind::degenerate, "oracle: every sample projects to zero");
  McResult out;
  out.samples = samples;
  out.mean_numerator = sn / samples;
  out.mean_denominator = sd / samples;
  out.estimate = sn / sd;
  std::vector<double> theta(samples);
  double mean_theta = 0.0;
  for (long k = 0; k < samples; ++k) {
    theta[k] = (sn - num[k]) / (sd - den[k]);
    mean_theta += theta[k];
  }
  mean_theta /= samples;
  double var = 0.0;
  for (long k = 0; k < samples; ++k) var += (theta[k] - mean_theta) * (theta[k] - mean_theta);
  out.stderr_ = std::sqrt(var * (samples - 1) / samples);
  return out;
}

}  // namespace rstn
