#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include "rstn/spin.hpp"

namespace {

using rstn::TwiceSpin;

// Dimension of the SU(2)-invariant subspace of V_j1 (x) ... (x) V_j4, from the null space of
// the total Casimir restricted to the zero total magnetic number sector.
int casimir_null_dimension(const std::array<int, 4>& tw) {
  std::vector<std::array<int, 4>> basis;
  std::map<std::array<int, 4>, int> index;
  std::array<int, 4> mm{};
  for (mm[0] = -tw[0]; mm[0] <= tw[0]; mm[0] += 2)
    for (mm[1] = -tw[1]; mm[1] <= tw[1]; mm[1] += 2)
      for (mm[2] = -tw[2]; mm[2] <= tw[2]; mm[2] += 2)
        for (mm[3] = -tw[3]; mm[3] <= tw[3]; mm[3] += 2)
          if (mm[0] + mm[1] + mm[2] + mm[3] == 0) {
            index[mm] = static_cast<int>(basis.size());
            basis.push_back(mm);
          }
  const int n = static_cast<int>(basis.size());
  if (n == 0) return 0;
  auto raise = [](int twice_j, int twice_m) {
    const double j = twice_j / 2.0, m = twice_m / 2.0;
    return std::sqrt(j * (j + 1) - m * (m + 1));
  };
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  for (int r = 0; r < n; ++r) {
    const auto& st = basis[r];
    double diag = 0.0;
    for (int i = 0; i < 4; ++i) diag += tw[i] / 2.0 * (tw[i] / 2.0 + 1.0);
    for (int i = 0; i < 4; ++i)
      for (int k = i + 1; k < 4; ++k) diag += 2.0 * (st[i] / 2.0) * (st[k] / 2.0);
    C(r, r) += diag;
    for (int i = 0; i < 4; ++i)
      for (int k = 0; k < 4; ++k) {
        if (i == k) continue;
        // J+_i J-_k term, each unordered pair counted through both orders.
        if (st[i] + 2 > tw[i] || st[k] - 2 < -tw[k]) continue;
        auto to = st;
        to[i] += 2;
        to[k] -= 2;
        C(index.at(to), r) += raise(tw[i], st[i]) * raise(tw[k], st[k] - 2);
      }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(C);
  int zeros = 0;
  for (int i = 0; i < n; ++i)
    if (std::abs(es.eigenvalues()[i]) < 1e-9) ++zeros;
  return zeros;
}

int dimension(int a, int b, int c, int d) {
  return rstn::intertwiner_dimension(TwiceSpin{a}, TwiceSpin{b}, TwiceSpin{c}, TwiceSpin{d});
}

}  // namespace

TEST(DimRep, Examples) {
  EXPECT_EQ(rstn::dim_rep(TwiceSpin{0}), 1);
  EXPECT_EQ(rstn::dim_rep(TwiceSpin{60}), 61);
  EXPECT_EQ(rstn::dim_rep(TwiceSpin{1}), 2);
}

TEST(IntertwinerDimension, Examples) {
  EXPECT_EQ(dimension(1, 1, 1, 1), 2);
  for (int T = 1; T <= 40; ++T) EXPECT_EQ(dimension(T, T, T, 3 * T), 1) << "twice s = " << T;
  EXPECT_EQ(dimension(1, 0, 0, 0), 0);
}

TEST(IntertwinerDimension, OneLegPairTrivial) {
  for (int j = 0; j <= 12; ++j) {
    EXPECT_EQ(dimension(j, j, 0, 0), 1);
    EXPECT_EQ(dimension(j, 0, 0, 0), j == 0 ? 1 : 0);
  }
}

TEST(IntertwinerDimension, PairExchangeSymmetry) {
  for (int a = 0; a <= 6; ++a)
    for (int b = 0; b <= 6; ++b)
      for (int c = 0; c <= 6; ++c)
        for (int d = 0; d <= 6; ++d) EXPECT_EQ(dimension(a, b, c, d), dimension(b, a, d, c));
}

TEST(IntertwinerDimension, MatchesCasimirNullSpace) {
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; b <= 4; ++b)
      for (int c = 0; c <= 4; ++c)
        for (int d = 0; d <= 4; ++d)
          EXPECT_EQ(dimension(a, b, c, d), casimir_null_dimension({a, b, c, d})) << a << " " << b << " " << c << " " << d;
}

TEST(IntertwinerBasis, ChannelSpinsIncreasing) {
  const auto basis = rstn::intertwiner_basis({TwiceSpin{3}, TwiceSpin{5}, TwiceSpin{4}, TwiceSpin{2}});
  ASSERT_EQ(basis.dimension(), 3);
  EXPECT_EQ(basis.channel_spins[0].twice, 2);
  EXPECT_EQ(basis.channel_spins[1].twice, 4);
  EXPECT_EQ(basis.channel_spins[2].twice, 6);
}
