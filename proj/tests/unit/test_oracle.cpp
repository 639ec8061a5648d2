#include <gtest/gtest.h>

#include <cmath>

#include "rstn/error.hpp"
#include "rstn/families.hpp"
#include "rstn/ising.hpp"
#include "rstn/oracle.hpp"
#include "support/generators.hpp"

namespace {

using namespace rstn;

// Explicit two-copy link state g_j |j> (x) g_k |k>, each |j> maximally entangled across the link.
// Returns Tr[(rho_1 (x) rho_2) (SWAP on the left halves)] or its unswapped counterpart.
double explicit_swap_trace(int tj, int tk, cplx gj, cplx gk, bool swapped) {
  const int dj = tj + 1, dk = tk + 1;
  auto link_vec = [](int d) {
    Eigen::VectorXcd e = Eigen::VectorXcd::Zero(d * d);
    for (int a = 0; a < d; ++a) e(a * d + (d - 1 - a)) = ((a % 2) ? -1.0 : 1.0) / std::sqrt(double(d));
    return e;
  };
  auto reduced = [](const Eigen::VectorXcd& e, int d) {
    Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(d, d);
    for (int a = 0; a < d; ++a)
      for (int a2 = 0; a2 < d; ++a2)
        for (int b = 0; b < d; ++b) r(a, a2) += e(a * d + b) * std::conj(e(a2 * d + b));
    return r;
  };
  const Eigen::MatrixXcd r1 = reduced(link_vec(dj), dj) * std::norm(gj);
  const Eigen::MatrixXcd r2 = reduced(link_vec(dk), dk) * std::norm(gk);
  if (!swapped) return (r1.trace() * r2.trace()).real();
  if (dj != dk) return 0.0;
  return (r1 * r2).trace().real();
}

std::vector<Scenario> small_scenarios() {
  std::vector<Scenario> out = {tiny_oracle()};
  for (int twice : {1, 2}) {
    AppendixCParams p{.twice_s = twice};
    p.a = 0.3;
    p.d = 0.2;
    p.b = {0.05, 0.02};
    p.u = {0.1, -0.03};
    p.v = {0.05, 0.04};
    out.push_back(appendix_c(p));
  }
  testgen::Rng rng(71);
  testgen::GenOptions opt;
  opt.max_vertices = 3;
  opt.max_twice = 2;
  opt.max_sector_dim = 8;
  while (out.size() < 12) out.push_back(testgen::random_scenario(rng, opt));
  return out;
}

}  // namespace

TEST(LinkSwapTrace, MatchesExplicitContraction) {
  testgen::Rng rng(61);
  for (int tj = 0; tj <= 6; ++tj)
    for (int tk = 0; tk <= 6; ++tk) {
      const cplx gj = testgen::gaussian_c(rng), gk = testgen::gaussian_c(rng);
      for (bool sw : {false, true}) {
        const double expect = explicit_swap_trace(tj, tk, gj, gk, sw);
        EXPECT_NEAR(link_swap_trace(TwiceSpin{tj}, TwiceSpin{tk}, gj, gk, sw), expect, 1e-12 * (1 + std::abs(expect)));
      }
    }
}

TEST(LinkSwapTrace, Lemmas) {
  const cplx g{0.7, 0.2}, h{1.1, -0.4};
  EXPECT_NEAR(link_swap_trace(TwiceSpin{3}, TwiceSpin{3}, g, h, true), std::norm(g) * std::norm(h) / 4.0, 1e-14);
  EXPECT_EQ(link_swap_trace(TwiceSpin{3}, TwiceSpin{2}, g, h, true), 0.0);
  EXPECT_NEAR(link_swap_trace(TwiceSpin{3}, TwiceSpin{2}, g, h, false), std::norm(g) * std::norm(h), 1e-14);
}

TEST(ExactTerm, EqualsIsingTerm) {
  for (const Scenario& s : small_scenarios()) {
    IsingModel model(s);
    for (int m = 0; m < s.n_sectors(); ++m)
      for (int n = 0; n < s.n_sectors(); ++n)
        for (IsingConfig sg = 0; sg < (IsingConfig{1} << s.graph.n_vertices); ++sg)
          for (int variant : {0, 1}) {
            const double H = model.hamiltonian(m, n, sg, variant);
            const double ising = model.delta(m, n, sg, variant) && std::isfinite(H)
                                     ? std::exp(model.sector_weight(m).log() + model.sector_weight(n).log() - H)
                                     : 0.0;
            const double oracle = exact_term(s, m, n, sg, variant);
            EXPECT_NEAR(oracle, ising, 1e-10 * std::max(1.0, std::abs(ising)));
          }
  }
}

TEST(ExactOracle, PurityMatchesEngine) {
  for (const Scenario& s : small_scenarios()) {
    const OracleResult r = exact_oracle_purity(s);
    EXPECT_NEAR(r.purity, purity(s), 1e-10);
  }
}

TEST(ExactOracle, SizeCap) {
  EXPECT_THROW(exact_term(appendix_c(AppendixCParams{.twice_s = 60}), 0, 0, 0, 0), Error);
}

TEST(MonteCarlo, AgreesWithExactWithinThreeSigma) {
  for (const Scenario& s : {tiny_oracle(), appendix_c(AppendixCParams{.twice_s = 1})}) {
    const McResult mc = mc_haar_purity(s, 2000, 12345);
    const double exact = exact_oracle_purity(s).purity;
    EXPECT_GT(mc.stderr_, 0.0);
    EXPECT_LT(std::abs(mc.estimate - exact), 3.0 * mc.stderr_) << mc.estimate << " vs " << exact;
  }
}

TEST(MonteCarlo, DisjointSeedsAgree) {
  const Scenario s = tiny_oracle();
  const McResult a = mc_haar_purity(s, 1000, 1);
  const McResult b = mc_haar_purity(s, 1000, 2);
  EXPECT_NE(a.estimate, b.estimate);
  EXPECT_LT(std::abs(a.estimate - b.estimate), 5.0 * std::hypot(a.stderr_, b.stderr_));
}

TEST(MonteCarlo, DeterministicGivenSeed) {
  const Scenario s = tiny_oracle();
  EXPECT_EQ(mc_haar_purity(s, 200, 9).estimate, mc_haar_purity(s, 200, 9).estimate);
}

TEST(MonteCarlo, TooFewSamples) {
  EXPECT_THROW(mc_haar_purity(tiny_oracle(), 0, 1), Error);
  EXPECT_THROW(mc_haar_purity(tiny_oracle(), 1, 1), Error);
}

TEST(Haar, UnitaryAndSecondMoment) {
  CounterRng rng(7, 0, 0);
  for (int D : {1, 2, 5}) {
    const Eigen::MatrixXcd U = haar_unitary(D, rng);
    EXPECT_LT((U.adjoint() * U - Eigen::MatrixXcd::Identity(D, D)).norm(), 1e-12);
  }
  for (int D : {2, 4, 8, 16}) {
    const long M = 10000;
    const int D2 = D * D;
    Eigen::MatrixXcd avg = Eigen::MatrixXcd::Zero(D2, D2);
    for (long k = 0; k < M; ++k) {
      const Eigen::VectorXcd psi = haar_vector(D, rng);
      Eigen::VectorXcd pp(D2);
      for (int a = 0; a < D; ++a)
        for (int b = 0; b < D; ++b) pp(a * D + b) = psi(a) * psi(b);
      avg.noalias() += pp * pp.adjoint();
    }
    avg /= static_cast<double>(M);
    Eigen::MatrixXcd target = Eigen::MatrixXcd::Identity(D2, D2);
    for (int a = 0; a < D; ++a)
      for (int b = 0; b < D; ++b) target(a * D + b, b * D + a) += 1.0;
    target /= static_cast<double>(D * (D + 1));
    const double op_norm = Eigen::JacobiSVD<Eigen::MatrixXcd>(avg - target).singularValues()(0);
    EXPECT_LT(op_norm, 0.1) << D;
  }
}

TEST(CounterRng, StreamsAreIndependentOfOrder) {
  CounterRng a(3, 1, 2), b(3, 1, 2), c(3, 2, 1);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
  EXPECT_NE(CounterRng(3, 1, 2).next_u64(), c.next_u64());
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform();
    EXPECT_GT(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}
