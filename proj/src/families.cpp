#include "rstn/families.hpp"

#include <cmath>

#include "rstn/error.hpp"

namespace rstn {

namespace {

SectorAssignment assign(std::initializer_list<int> twice) {
  SectorAssignment out;
  for (int t : twice) out.spins.push_back(TwiceSpin{t});
  return out;
}

ColoredGraph two_vertex_graph() {
  ColoredGraph g;
  g.n_vertices = 2;
  g.internal_links = {{0, 1, 4}};
  g.boundary_links = {{0, 1, Side::outer}, {0, 2, Side::outer}, {0, 3, Side::outer},
                      {1, 1, Side::outer}, {1, 2, Side::outer}, {1, 3, Side::outer}};
  return g;
}

Region region_by_name(const std::string& name) {
  if (name == "x_link" || name.empty()) return Region{{6}};
  if (name == "upper_right") return Region{{4}};
  throw Error(ErrorKind::validation, "family: unknown region '" + name + "'");
}

void set_cutoffs(Scenario& s) {
  int lo = s.sectors[0].spins[0].twice, hi = lo;
  for (const auto& sec : s.sectors)
    for (const auto& j : sec.spins) {
      lo = std::min(lo, j.twice);
      hi = std::max(hi, j.twice);
    }
  s.lower_cutoff = TwiceSpin{lo};
  s.upper_cutoff = TwiceSpin{hi};
}

double get(const FamilyParams& f, const std::string& key, double fallback) {
  auto it = f.values.find(key);
  return it == f.values.end() ? fallback : it->second;
}

int get_twice(const FamilyParams& f, const std::string& key, int fallback) {
  const double v = get(f, key, fallback);
  if (v != std::round(v) || v < 0) throw Error(ErrorKind::validation, "family: " + key + " must be a nonnegative integer");
  return static_cast<int>(v);
}

}  // namespace

Scenario appendix_c(const AppendixCParams& p) {
  const int T = p.twice_s;
  if (T < 1) throw Error(ErrorKind::validation, "family: appendix_c needs s >= 1/2");
  Scenario s;
  s.graph = two_vertex_graph();
  s.region_C = region_by_name(p.region);
  s.sectors = {assign({T, T, T, 3 * T, T, T, 3 * T - 2}), assign({T, T, T, 3 * T, T, T, 3 * T})};
  Eigen::MatrixXcd jj(2, 2), kk(1, 1), jk(2, 1);
  jj << p.a, p.b, std::conj(p.b), p.d;
  kk << p.w();
  jk << p.u, p.v;
  s.intertwiner.blocks[{0, 0}] = jj;
  s.intertwiner.blocks[{1, 1}] = kk;
  if (p.u != cplx{0.0, 0.0} || p.v != cplx{0.0, 0.0}) {
    s.intertwiner.blocks[{0, 1}] = jk;
    s.intertwiner.blocks[{1, 0}] = jk.adjoint();
  }
  s.mode = p.mode;
  set_cutoffs(s);
  return s;
}

int twice_for_ratio(int twice_s, double nu) {
  return static_cast<int>(std::lround(nu * (twice_s + 1))) - 1;
}

Scenario two_sector(const TwoSectorParams& p) {
  if (p.twice_s < 1 || p.twice_t < 1) throw Error(ErrorKind::validation, "family: two_sector needs spins >= 1/2");
  if (p.twice_s == p.twice_t) throw Error(ErrorKind::validation, "family: two_sector needs distinct scales");
  if (!(p.c_j >= 0.0 && p.c_j <= 1.0)) throw Error(ErrorKind::validation, "family: c_j must lie in [0, 1]");
  Scenario s;
  s.graph = two_vertex_graph();
  s.region_C = region_by_name(p.region);
  const int S = p.twice_s, T = p.twice_t;
  s.sectors = {assign({S, S, S, 3 * S, S, S, 3 * S - 2}), assign({T, T, T, 3 * T, T, T, 3 * T - 2})};
  s.intertwiner.blocks[{0, 0}] = Eigen::MatrixXcd::Identity(2, 2) * (p.c_j / 2.0);
  s.intertwiner.blocks[{1, 1}] = Eigen::MatrixXcd::Identity(2, 2) * ((1.0 - p.c_j) / 2.0);
  s.mode = p.mode;
  set_cutoffs(s);
  return s;
}

Scenario once_fine_grained(int twice_j, Mode mode) {
  Scenario s;
  s.graph.n_vertices = 5;
  s.graph.internal_links = {{0, 2, 2}, {0, 3, 3}, {0, 4, 1}, {1, 2, 4}, {1, 3, 1}, {1, 4, 2}, {2, 4, 3}, {3, 4, 4}};
  s.graph.boundary_links = {{0, 4, Side::outer}, {1, 3, Side::outer}, {2, 1, Side::outer}, {3, 2, Side::outer}};
  s.region_C = Region{{8}};
  SectorAssignment sec;
  sec.spins.assign(12, TwiceSpin{twice_j});
  s.sectors = {sec};
  const long D = sector_layout(s.graph, sec).total_dim;
  s.intertwiner.blocks[{0, 0}] = Eigen::MatrixXcd::Identity(D, D) / static_cast<double>(D);
  s.mode = mode;
  set_cutoffs(s);
  return s;
}

Scenario tiny_oracle() {
  Scenario s;
  s.graph = two_vertex_graph();
  s.region_C = Region{{6}};
  s.sectors = {assign({1, 1, 1, 1, 1, 1, 1})};
  Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(4);
  bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
  s.intertwiner.blocks[{0, 0}] = 0.7 * bell * bell.adjoint() + 0.3 * Eigen::MatrixXcd::Identity(4, 4) / 4.0;
  set_cutoffs(s);
  return s;
}

FamilyParams default_family(const std::string& name) {
  FamilyParams f;
  f.name = name;
  if (name == "appendix_c") {
    f.values = {{"twice_s", 20}, {"a", 0.25}, {"d", 0.25}};
    f.region = "x_link";
  } else if (name == "two_sector") {
    f.values = {{"twice_s", 201}, {"twice_t", 100}, {"c_j", 0.5}};
    f.region = "x_link";
    f.mode = Mode::high_spin;
  } else if (name == "once_fine_grained") {
    f.values = {{"twice_j", 1}};
  } else if (name != "tiny_oracle") {
    throw Error(ErrorKind::validation, "family: unknown family '" + name + "'");
  }
  return f;
}

Scenario build_family(const FamilyParams& f) {
  if (f.name == "appendix_c") {
    AppendixCParams p;
    p.twice_s = get_twice(f, "twice_s", 20);
    p.a = get(f, "a", 0.25);
    p.d = get(f, "d", 0.25);
    p.b = {get(f, "b_re", 0.0), get(f, "b_im", 0.0)};
    p.u = {get(f, "u_re", 0.0), get(f, "u_im", 0.0)};
    p.v = {get(f, "v_re", 0.0), get(f, "v_im", 0.0)};
    p.region = f.region.empty() ? "x_link" : f.region;
    p.mode = f.mode;
    return appendix_c(p);
  }
  if (f.name == "two_sector") {
    TwoSectorParams p;
    p.twice_s = get_twice(f, "twice_s", 201);
    p.twice_t = get_twice(f, "twice_t", 100);
    p.c_j = get(f, "c_j", 0.5);
    p.region = f.region.empty() ? "x_link" : f.region;
    p.mode = f.mode;
    return two_sector(p);
  }
  if (f.name == "once_fine_grained") return once_fine_grained(get_twice(f, "twice_j", 1), f.mode);
  if (f.name == "tiny_oracle") {
    Scenario s = tiny_oracle();
    s.mode = f.mode;
    return s;
  }
  throw Error(ErrorKind::validation, "family: unknown family '" + f.name + "'");
}

void set_parameter(FamilyParams& f, const std::string& name, double value) {
  auto unknown = [&] {
    throw Error(ErrorKind::validation, "sweep: parameter '" + name + "' does not apply to family '" + f.name + "'");
  };
  if (name == "s-scale") {
    const int twice = static_cast<int>(std::lround(2.0 * value));
    if (f.name == "appendix_c") {
      f.values["twice_s"] = twice;
    } else if (f.name == "two_sector") {
      const double nu = (get(f, "twice_t", 100) + 1.0) / (get(f, "twice_s", 201) + 1.0);
      f.values["twice_s"] = twice;
      f.values["twice_t"] = twice_for_ratio(twice, nu);
    } else if (f.name == "once_fine_grained") {
      f.values["twice_j"] = twice;
    } else {
      unknown();
    }
    return;
  }
  if (f.name == "appendix_c") {
    const double a = get(f, "a", 0.25), d = get(f, "d", 0.25);
    if (name == "a") {
      f.values["a"] = value;
    } else if (name == "d") {
      f.values["d"] = value;
    } else if (name == "w") {
      const double share = (a + d) > 0.0 ? a / (a + d) : 0.5;
      f.values["a"] = (1.0 - value) * share;
      f.values["d"] = (1.0 - value) * (1.0 - share);
    } else if (name == "b" || name == "u" || name == "v") {
      f.values[name + "_re"] = value;
      f.values[name + "_im"] = 0.0;
    } else {
      unknown();
    }
    return;
  }
  if (f.name == "two_sector") {
    if (name == "nu") {
      f.values["twice_t"] = twice_for_ratio(static_cast<int>(get(f, "twice_s", 201)), value);
    } else if (name == "c_n") {
      f.values["c_j"] = value;
    } else {
      unknown();
    }
    return;
  }
  unknown();
}

Scenario set_weight_parameter(const Scenario& s, double c0) {
  const int K = s.n_sectors();
  if (K < 2) throw Error(ErrorKind::validation, "sweep: c_n needs at least two sectors");
  if (!(c0 >= 0.0 && c0 <= 1.0)) throw Error(ErrorKind::validation, "sweep: c_n must lie in [0, 1]");
  std::vector<double> c(K);
  double rest = 0.0;
  for (int m = 1; m < K; ++m) rest += sector_trace(s, m);
  c[0] = c0;
  for (int m = 1; m < K; ++m) c[m] = rest > 0.0 ? (1.0 - c0) * sector_trace(s, m) / rest : (1.0 - c0) / (K - 1);
  return with_weights(s, c);
}

}  // namespace rstn
