#include "rstn/mincut.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

namespace rstn {

namespace {

struct FlowGraph {
  struct Arc {
    int to;
    double cap;
    int rev;
  };
  std::vector<std::vector<Arc>> adj;
  std::vector<int> level, it;

  explicit FlowGraph(int n) : adj(n), level(n), it(n) {}

  void add(int u, int v, double cap_uv, double cap_vu) {
    adj[u].push_back({v, cap_uv, static_cast<int>(adj[v].size())});
    adj[v].push_back({u, cap_vu, static_cast<int>(adj[u].size()) - 1});
  }

  bool bfs(int s, int t) {
    std::fill(level.begin(), level.end(), -1);
    std::queue<int> q;
    level[s] = 0;
    q.push(s);
    while (!q.empty()) {
      const int u = q.front();
      q.pop();
      for (const auto& a : adj[u])
        if (a.cap > 0 && level[a.to] < 0) {
          level[a.to] = level[u] + 1;
          q.push(a.to);
        }
    }
    return level[t] >= 0;
  }

  double dfs(int u, int t, double f) {
    if (u == t) return f;
    for (int& i = it[u]; i < static_cast<int>(adj[u].size()); ++i) {
      auto& a = adj[u][i];
      if (a.cap <= 0 || level[a.to] != level[u] + 1) continue;
      const double pushed = dfs(a.to, t, std::min(f, a.cap));
      if (pushed > 0) {
        a.cap -= pushed;
        adj[a.to][a.rev].cap += pushed;
        return pushed;
      }
    }
    return 0;
  }

  double max_flow(int s, int t) {
    double flow = 0;
    while (bfs(s, t)) {
      std::fill(it.begin(), it.end(), 0);
      while (double f = dfs(s, t, std::numeric_limits<double>::infinity())) flow += f;
    }
    return flow;
  }
};

}  // namespace

std::optional<CutSolution> solve_min_cut(const CutProblem& p) {
  double finite_total = 0.0;
  auto acc = [&](double c) {
    if (std::isfinite(c)) finite_total += c;
  };
  for (int x = 0; x < p.n; ++x) {
    acc(p.cost_up[x]);
    acc(p.cost_down[x]);
  }
  for (const auto& e : p.edges) acc(e.w);
  const double big = 4.0 * finite_total + 1.0;
  auto cap = [&](double c) { return std::isfinite(c) ? c : big; };

  // Source side is "up": a vertex left on the source side pays cost_up via its arc to the sink.
  const int s = p.n, t = p.n + 1;
  FlowGraph g(p.n + 2);
  for (int x = 0; x < p.n; ++x) {
    if (p.cost_down[x] > 0) g.add(s, x, cap(p.cost_down[x]), 0);
    if (p.cost_up[x] > 0) g.add(x, t, cap(p.cost_up[x]), 0);
  }
  for (const auto& e : p.edges)
    if (e.w > 0) g.add(e.a, e.b, cap(e.w), cap(e.w));
  const double flow = g.max_flow(s, t);
  if (flow >= big * 0.5) return std::nullopt;

  // Vertices that still reach the sink in the residual graph form the smallest down set.
  std::vector<char> reach(p.n + 2, 0);
  std::queue<int> q;
  reach[t] = 1;
  q.push(t);
  while (!q.empty()) {
    const int v = q.front();
    q.pop();
    for (const auto& a : g.adj[v]) {
      const auto& back = g.adj[a.to][a.rev];
      if (back.cap > 0 && !reach[a.to]) {
        reach[a.to] = 1;
        q.push(a.to);
      }
    }
  }
  CutSolution out;
  for (int x = 0; x < p.n; ++x)
    if (reach[x]) out.down |= std::uint64_t{1} << x;
  double energy = 0.0;
  for (int x = 0; x < p.n; ++x) energy += ((out.down >> x) & 1u) ? p.cost_down[x] : p.cost_up[x];
  for (const auto& e : p.edges)
    if (((out.down >> e.a) ^ (out.down >> e.b)) & 1u) energy += e.w;
  out.energy = energy;
  return out;
}

}  // namespace rstn
