#include "rstn/spin.hpp"

#include <algorithm>
#include <cstdlib>

#include "rstn/error.hpp"

namespace rstn {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::size_cap: return "size-cap";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::singular: return "singular";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::zero_weight: return "zero-weight";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::not_single_sector: return "not-single-sector";
  }
  return "unknown";
}

std::vector<TwiceSpin> channel_spins(TwiceSpin j1, TwiceSpin j2, TwiceSpin j3, TwiceSpin j4) {
  std::vector<TwiceSpin> out;
  const int a = j1.twice, b = j2.twice, c = j3.twice, d = j4.twice;
  if (((a + b) - (c + d)) % 2 != 0) return out;
  const int lo = std::max(std::abs(a - b), std::abs(c - d));
  const int hi = std::min(a + b, c + d);
  for (int k = lo; k <= hi; k += 2) out.push_back(TwiceSpin{k});
  return out;
}

int intertwiner_dimension(TwiceSpin j1, TwiceSpin j2, TwiceSpin j3, TwiceSpin j4) {
  return static_cast<int>(channel_spins(j1, j2, j3, j4).size());
}

IntertwinerBasis intertwiner_basis(const std::array<TwiceSpin, 4>& incoming) {
  IntertwinerBasis basis;
  basis.incoming = incoming;
  basis.channel_spins = channel_spins(incoming[0], incoming[1], incoming[2], incoming[3]);
  return basis;
}

}  // namespace rstn
