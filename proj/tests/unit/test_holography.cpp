#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "rstn/error.hpp"
#include "rstn/families.hpp"
#include "rstn/holography.hpp"
#include "support/appendix_c_forms.hpp"
#include "support/generators.hpp"

namespace {

using namespace rstn;

SectorAssignment spins(std::initializer_list<int> twice) {
  SectorAssignment out;
  for (int t : twice) out.spins.push_back(TwiceSpin{t});
  return out;
}

// Two-vertex graph whose sectors permute the spins on L's boundary links, with equal spins on C.
Scenario permuted_sectors(int T, int K) {
  Scenario s = appendix_c(AppendixCParams{.twice_s = T});
  const std::vector<SectorAssignment> all = {spins({T, T, T + 2, 3 * T, T, T, 3 * T}),
                                             spins({T, T + 2, T, 3 * T, T, T, 3 * T}),
                                             spins({T, 3 * T, T, T + 2, T, T, 3 * T})};
  s.sectors.assign(all.begin(), all.begin() + K);
  s.intertwiner.blocks.clear();
  for (int m = 0; m < K; ++m) {
    const long D = sector_layout(s.graph, s.sectors[m]).total_dim;
    s.intertwiner.blocks[{m, m}] = Eigen::MatrixXcd::Identity(D, D) / static_cast<double>(D * K);
  }
  s.mode = Mode::high_spin;
  testgen::set_cutoffs(s);
  return s;
}

double isometry_constraint(double nu, double a) {
  return (1 + nu) * (std::pow(1 + std::pow(nu, 6) * a, -2) + std::pow(nu, -1) * std::pow(1 + std::pow(nu, -6) / a, -2));
}

}  // namespace

TEST(DimBoundaryRegion, Examples) {
  for (int twice : {2, 20, 100}) {
    const Scenario s = appendix_c(AppendixCParams{.twice_s = twice});
    EXPECT_EQ(dim_boundary_region(s, s.region_C), static_cast<std::uint64_t>(6 * twice));
    EXPECT_EQ(dim_boundary_region(s, Region{}), 1u);
    const Scenario one = restrict_to_sector(s, 0);
    EXPECT_EQ(dim_boundary_region(one, Region{{4, 6}}), static_cast<std::uint64_t>((twice + 1) * (3 * twice - 1)));
    EXPECT_EQ(dim_boundary_region_sector(s, 1, s.region_C), static_cast<std::uint64_t>(3 * twice + 1));
  }
}

TEST(HolographyReport, RatioNotBelowOne) {
  for (int twice : {1, 4, 20}) {
    const auto rep = holography_report(appendix_c(AppendixCParams{.twice_s = twice}));
    EXPECT_GE(rep.ratio, 1.0 - rep.tolerance);
    EXPECT_EQ(rep.tolerance, 1e-6);
  }
  EXPECT_EQ(default_tolerance(Mode::high_spin), 1e-2);
}

TEST(FixedSpinCriteria, OnceFineGrainedVertexViolates) {
  const auto rep = fixed_spin_criteria(once_fine_grained(1), 0);
  EXPECT_FALSE(rep.is_holographic);
  bool found = false;
  for (const auto& f : rep.failing_subsets)
    if (f.X.bits == 31u && f.condition == FlipCondition::dimension && f.kind == FindingKind::violation) {
      found = true;
      EXPECT_NEAR(f.lhs_log, 2 * std::log(2.0), 1e-12);
      EXPECT_NEAR(f.rhs_log, 5 * std::log(2.0), 1e-12);
    }
  EXPECT_TRUE(found);
}

TEST(FixedSpinCriteria, TwoVertexSectorsPassAtLargeSpin) {
  for (int twice : {20, 60, 200}) {
    const Scenario s = appendix_c(AppendixCParams{.twice_s = twice});
    EXPECT_TRUE(fixed_spin_criteria(s, 0).failing_subsets.empty()) << twice;
    EXPECT_TRUE(fixed_spin_criteria(s, 1).failing_subsets.empty()) << twice;
  }
}

TEST(FixedSpinCriteria, EqualityIsADegeneracy) {
  Scenario s;
  s.graph.n_vertices = 1;
  for (int c = 1; c <= 4; ++c) s.graph.boundary_links.push_back({0, c, Side::outer});
  s.sectors = {spins({1, 1, 1, 1})};
  s.region_C = Region{{0, 1}};
  Eigen::MatrixXcd rho = Eigen::MatrixXcd::Zero(2, 2);
  rho(0, 0) = 1.0;
  s.intertwiner.blocks[{0, 0}] = rho;
  testgen::set_cutoffs(s);
  const auto rep = fixed_spin_criteria(s, 0);
  ASSERT_EQ(rep.failing_subsets.size(), 2u);
  EXPECT_EQ(rep.failing_subsets[0].condition, FlipCondition::energy);
  EXPECT_EQ(rep.failing_subsets[0].kind, FindingKind::degeneracy);
  EXPECT_EQ(rep.failing_subsets[1].condition, FlipCondition::dimension);
  EXPECT_EQ(rep.failing_subsets[1].kind, FindingKind::violation);
  EXPECT_FALSE(rep.is_holographic);
}

TEST(QMatrix, SingleHolographicSector) {
  Scenario s = restrict_to_sector(appendix_c(AppendixCParams{.twice_s = 40}), 0);
  s.mode = Mode::high_spin;
  const auto q = q_matrix(s);
  ASSERT_EQ(q.Q.rows(), 1);
  EXPECT_NEAR(q.Q(0, 0), 1.0, 1e-12);
  ASSERT_TRUE(q.inverse_sum.has_value());
  EXPECT_NEAR(*q.inverse_sum, 1.0, 1e-12);
}

TEST(QMatrix, DiagonalWithHolographicSectors) {
  const Scenario s = two_sector(TwoSectorParams{});
  const auto q = q_matrix(s);
  EXPECT_EQ(q.Q(0, 1), 0.0);
  EXPECT_EQ(q.Q(1, 0), 0.0);
  const double dim = static_cast<double>(dim_boundary_region(s, s.region_C));
  EXPECT_NEAR(q.Q(0, 0), dim / dim_boundary_region_sector(s, 0, s.region_C), 1e-9);
  ASSERT_TRUE(q.inverse_sum.has_value());
  EXPECT_NEAR(*q.inverse_sum, 1.0, 1e-12);
}

TEST(QMatrix, TwoVertexAgainstClosedForms) {
  AppendixCParams p{.twice_s = 100};
  p.a = 0.3;
  p.d = 0.2;
  p.u = {0.1, 0.0};
  p.v = {0.05, 0.0};
  const auto z = testgen::appendix_c_derived(p);
  const auto q = q_matrix(appendix_c(p));
  const double dim = 6.0 * p.twice_s;
  EXPECT_LT(testgen::rel_diff(q.Q(0, 0), z.z1jj / z.z0jj * dim), 1e-12);
  EXPECT_LT(testgen::rel_diff(q.Q(1, 1), z.z1kk / z.z0kk * dim), 1e-12);
  EXPECT_LT(testgen::rel_diff(q.Q(0, 1), z.z1jk / z.z0jk * dim), 1e-12);
  EXPECT_LT(testgen::rel_diff(q.beta(0, 1), z.z1jk * dim - z.z0jk), 1e-12);
}

TEST(SolveWeights, TwoDisjointSectors) {
  for (double nu : {0.25, 0.5, 0.75}) {
    TwoSectorParams tp;
    tp.twice_s = nu == 0.5 ? 2001 : 1999;
    tp.twice_t = twice_for_ratio(tp.twice_s, nu);
    const Scenario s = two_sector(tp);
    const WeightSolution w = solve_weights(s);
    EXPECT_EQ(w.method, "null-vector");
    EXPECT_NEAR(w.c[0] + w.c[1], 1.0, 1e-12);
    EXPECT_NEAR(w.c[0], 1.0 / (1.0 + std::pow(nu, -5)), 1e-3);
    EXPECT_LT(w.residual, 1e-9);
    EXPECT_LT(w.c[0], w.c[1]);
    const double a = w.c[1] / w.c[0];
    EXPECT_NEAR(isometry_constraint(nu, a), 1.0, 1e-6) << nu;
    const auto rep = holography_report(with_weights(s, w.c));
    EXPECT_NEAR(rep.ratio, 1.0, 1e-3);
    const auto cf = closed_form_weights(s);
    EXPECT_NEAR(cf[0], w.c[0], 1e-9);
  }
}

TEST(SolveWeights, HalfRatioGivesOneOverThirtyThree) {
  const Scenario s = two_sector(TwoSectorParams{.twice_s = 201, .twice_t = 100});
  EXPECT_NEAR(solve_weights(s).c[0], 1.0 / 33.0, 1e-3);
}

TEST(SolveWeights, PermutedSectorsShareWeightEqually) {
  for (int K : {2, 3}) {
    const Scenario s = permuted_sectors(6, K);
    ASSERT_NO_THROW(validate_state(s));
    const WeightSolution w = solve_weights(s);
    for (double c : w.c) EXPECT_NEAR(c, 1.0 / K, 1e-12);
  }
}

TEST(SolveWeights, InfeasibleWhenTargetUnreachable) {
  const int T = 20;
  Scenario s = appendix_c(AppendixCParams{.twice_s = T});
  s.sectors[1] = spins({T, T, T, 3 * T - 2, T, T, 3 * T});
  s.intertwiner.blocks[{1, 1}] = Eigen::MatrixXcd::Identity(2, 2) * 0.25;
  s.region_C = Region{{3, 6}};
  s.mode = Mode::high_spin;
  ASSERT_NO_THROW(validate_state(s));
  try {
    solve_weights(s);
    FAIL() << "expected infeasible";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::infeasible);
    EXPECT_NE(std::string(e.what()).find("best residual"), std::string::npos);
  }
}

TEST(SolveWeights, NeedsTwoSectors) {
  EXPECT_THROW(solve_weights(restrict_to_sector(appendix_c({}), 0)), Error);
}

TEST(ClosedFormWeights, LargerGeometryGetsSmallerWeight) {
  testgen::Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int T = testgen::uniform_int(rng, 4, 200);
    int U = testgen::uniform_int(rng, 2, 200);
    if (U == T) ++U;
    const Scenario s = two_sector(TwoSectorParams{.twice_s = T, .twice_t = U});
    const auto c = closed_form_weights(s);
    EXPECT_NEAR(c[0] + c[1], 1.0, 1e-12);
    EXPECT_EQ(T > U, c[0] < c[1]);
  }
}
