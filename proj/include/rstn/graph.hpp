#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace rstn {

enum class Side { outer, inner };

struct InternalLink {
  int from = 0;
  int to = 0;
  int color = 1;
};

struct BoundaryLink {
  int vertex = 0;
  int color = 1;
  Side side = Side::outer;
};

// Link ids: internal links first, then boundary links, in declaration order.
struct ColoredGraph {
  int n_vertices = 0;
  std::vector<InternalLink> internal_links;
  std::vector<BoundaryLink> boundary_links;

  int n_internal() const noexcept { return static_cast<int>(internal_links.size()); }
  int n_boundary() const noexcept { return static_cast<int>(boundary_links.size()); }
  int n_links() const noexcept { return n_internal() + n_boundary(); }
  bool is_internal(int link) const noexcept { return link < n_internal(); }
  const BoundaryLink& boundary(int link) const { return boundary_links.at(link - n_internal()); }
};

struct Region {
  std::vector<int> links;  // sorted outer boundary link ids

  bool contains(int link) const;
};

// Bit x set means vertex x belongs to the subset (Ising spin down).
struct VertexSubset {
  std::uint64_t bits = 0;

  bool contains(int v) const noexcept { return (bits >> v) & 1u; }
  int size() const noexcept { return __builtin_popcountll(bits); }
};

inline constexpr int kMaxVertices = 64;

void validate(const ColoredGraph& graph);
void validate_region(const ColoredGraph& graph, const Region& region);

// Link id at each color slot (index color-1) of every vertex.
std::vector<std::array<int, 4>> vertex_legs(const ColoredGraph& graph);

// Vertex at which each link starts (internal: from, boundary: its vertex).
int link_source(const ColoredGraph& graph, int link);

struct BoundaryCounts {
  std::vector<int> cut_internal;
  std::vector<int> boundary_in_C;
  std::vector<int> boundary_not_in_C;
};

BoundaryCounts boundary_counts(const ColoredGraph& graph, VertexSubset X, const Region& C);

VertexSubset all_vertices(const ColoredGraph& graph);

}  // namespace rstn
