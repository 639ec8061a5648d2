#include "rstn/graph.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

#include "rstn/error.hpp"

namespace rstn {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::validation, msg); }

}  // namespace

bool Region::contains(int link) const {
  return std::binary_search(links.begin(), links.end(), link);
}

void validate(const ColoredGraph& g) {
  if (g.n_vertices <= 0) fail("graph: no vertices");
  if (g.n_vertices > kMaxVertices) fail("graph: more than 64 vertices");
  std::vector<std::array<int, 4>> slots(g.n_vertices, {-1, -1, -1, -1});
  auto place = [&](int v, int color, int link) {
    if (v < 0 || v >= g.n_vertices) fail("graph: link " + std::to_string(link) + " references missing vertex");
    if (color < 1 || color > 4) fail("graph: link " + std::to_string(link) + " has color outside 1..4");
    if (slots[v][color - 1] != -1)
      fail("graph: color clash at vertex " + std::to_string(v) + " (color " + std::to_string(color) + ")");
    slots[v][color - 1] = link;
  };
  std::set<std::pair<int, int>> pairs;
  for (int e = 0; e < g.n_internal(); ++e) {
    const auto& l = g.internal_links[e];
    if (l.from == l.to) fail("graph: self-loop on link " + std::to_string(e));
    place(l.from, l.color, e);
    place(l.to, l.color, e);
    if (!pairs.insert(std::minmax(l.from, l.to)).second)
      fail("graph: multi-link between vertices " + std::to_string(l.from) + " and " + std::to_string(l.to));
  }
  for (int b = 0; b < g.n_boundary(); ++b) {
    const auto& l = g.boundary_links[b];
    place(l.vertex, l.color, g.n_internal() + b);
  }
  for (int v = 0; v < g.n_vertices; ++v)
    for (int c = 0; c < 4; ++c)
      if (slots[v][c] == -1) fail("graph: valence of vertex " + std::to_string(v) + " is not 4");
}

void validate_region(const ColoredGraph& g, const Region& r) {
  for (std::size_t i = 0; i < r.links.size(); ++i) {
    const int e = r.links[i];
    if (i > 0 && r.links[i - 1] >= e) fail("region: link ids must be sorted and distinct");
    if (e < g.n_internal() || e >= g.n_links()) fail("region: link " + std::to_string(e) + " is not a boundary link");
    if (g.boundary(e).side != Side::outer) fail("region: link " + std::to_string(e) + " is on the inner boundary");
  }
}

std::vector<std::array<int, 4>> vertex_legs(const ColoredGraph& g) {
  std::vector<std::array<int, 4>> legs(g.n_vertices, {-1, -1, -1, -1});
  for (int e = 0; e < g.n_internal(); ++e) {
    const auto& l = g.internal_links[e];
    legs[l.from][l.color - 1] = e;
    legs[l.to][l.color - 1] = e;
  }
  for (int b = 0; b < g.n_boundary(); ++b) {
    const auto& l = g.boundary_links[b];
    legs[l.vertex][l.color - 1] = g.n_internal() + b;
  }
  return legs;
}

int link_source(const ColoredGraph& g, int link) {
  return g.is_internal(link) ? g.internal_links[link].from : g.boundary(link).vertex;
}

BoundaryCounts boundary_counts(const ColoredGraph& g, VertexSubset X, const Region& C) {
  BoundaryCounts out;
  for (int e = 0; e < g.n_internal(); ++e) {
    const auto& l = g.internal_links[e];
    if (X.contains(l.from) != X.contains(l.to)) out.cut_internal.push_back(e);
  }
  for (int b = 0; b < g.n_boundary(); ++b) {
    const int e = g.n_internal() + b;
    if (!X.contains(g.boundary_links[b].vertex)) continue;
    (C.contains(e) ? out.boundary_in_C : out.boundary_not_in_C).push_back(e);
  }
  return out;
}

VertexSubset all_vertices(const ColoredGraph& g) {
  return VertexSubset{g.n_vertices == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << g.n_vertices) - 1)};
}

}  // namespace rstn
