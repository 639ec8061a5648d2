#pragma once

#include <array>
#include <compare>
#include <vector>

namespace rstn {

// Spin label j stored as the integer 2j.
struct TwiceSpin {
  int twice = 0;

  constexpr int dim() const noexcept { return twice + 1; }
  auto operator<=>(const TwiceSpin&) const = default;
};

constexpr int dim_rep(TwiceSpin j) noexcept { return j.twice + 1; }

// Intertwiner space of a 4-valent vertex in the (1,2)(3,4) recoupling channel.
struct IntertwinerBasis {
  std::array<TwiceSpin, 4> incoming{};
  std::vector<TwiceSpin> channel_spins;

  int dimension() const noexcept { return static_cast<int>(channel_spins.size()); }
};

std::vector<TwiceSpin> channel_spins(TwiceSpin j1, TwiceSpin j2, TwiceSpin j3, TwiceSpin j4);
int intertwiner_dimension(TwiceSpin j1, TwiceSpin j2, TwiceSpin j3, TwiceSpin j4);
IntertwinerBasis intertwiner_basis(const std::array<TwiceSpin, 4>& incoming);

}  // namespace rstn
