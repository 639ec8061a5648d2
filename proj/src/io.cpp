#include "rstn/io.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "rstn/error.hpp"

namespace rstn {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& msg) { throw Error(ErrorKind::parse, "parse: " + msg); }

void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) bad(where + " must be an object");
  for (const auto& [key, val] : obj.items())
    if (!allowed.count(key)) bad("unknown key '" + key + "' in " + where);
}

const json& require(const json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) bad("missing key '" + key + "' in " + where);
  return *it;
}

int as_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) bad(where + " must be an integer");
  return v.get<int>();
}

double as_double(const json& v, const std::string& where) {
  if (!v.is_number()) bad(where + " must be a number");
  return v.get<double>();
}

int parse_index(const std::string& key, const std::string& where) {
  if (key.empty() || !std::all_of(key.begin(), key.end(), [](char c) { return c >= '0' && c <= '9'; }))
    bad(where + " key '" + key + "' is not a nonnegative integer");
  return std::stoi(key);
}

cplx as_complex(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2) bad(where + " must be a [re, im] pair");
  return {as_double(v[0], where), as_double(v[1], where)};
}

json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

Side parse_side(const json& v) {
  if (!v.is_string()) bad("boundary link side must be a string");
  const auto s = v.get<std::string>();
  if (s == "outer") return Side::outer;
  if (s == "inner") return Side::inner;
  bad("boundary link side must be outer or inner");
}

ColoredGraph parse_graph(const json& g) {
  check_keys(g, {"vertices", "internal_links", "boundary_links"}, "graph");
  ColoredGraph out;
  out.n_vertices = as_int(require(g, "vertices", "graph"), "graph.vertices");
  const auto& il = require(g, "internal_links", "graph");
  if (!il.is_array()) bad("graph.internal_links must be an array");
  for (const auto& l : il) {
    check_keys(l, {"from", "to", "color"}, "internal link");
    out.internal_links.push_back({as_int(require(l, "from", "internal link"), "from"),
                                  as_int(require(l, "to", "internal link"), "to"),
                                  as_int(require(l, "color", "internal link"), "color")});
  }
  const auto& bl = require(g, "boundary_links", "graph");
  if (!bl.is_array()) bad("graph.boundary_links must be an array");
  for (const auto& l : bl) {
    check_keys(l, {"vertex", "color", "side"}, "boundary link");
    BoundaryLink b{as_int(require(l, "vertex", "boundary link"), "vertex"),
                   as_int(require(l, "color", "boundary link"), "color"), Side::outer};
    if (l.contains("side")) b.side = parse_side(l["side"]);
    out.boundary_links.push_back(b);
  }
  return out;
}

Eigen::MatrixXcd parse_matrix(const json& rows, const std::string& where) {
  if (!rows.is_array()) bad(where + " must be an array of rows");
  const long r = static_cast<long>(rows.size());
  long c = -1;
  for (const auto& row : rows) {
    if (!row.is_array()) bad(where + " rows must be arrays");
    if (c < 0) c = static_cast<long>(row.size());
    if (static_cast<long>(row.size()) != c) bad(where + " rows have unequal lengths");
  }
  Eigen::MatrixXcd M(r, std::max(c, 0L));
  for (long i = 0; i < r; ++i)
    for (long j = 0; j < c; ++j) M(i, j) = as_complex(rows[i][j], where);
  return M;
}

Scenario parse_explicit(const json& doc) {
  check_keys(doc, {"graph", "sectors", "amplitudes", "intertwiner", "region_C", "core", "cutoffs", "mode"}, "scenario");
  Scenario s;
  s.graph = parse_graph(require(doc, "graph", "scenario"));
  const int L = s.graph.n_links();

  const auto& secs = require(doc, "sectors", "scenario");
  if (!secs.is_array()) bad("sectors must be an array");
  for (const auto& sec : secs) {
    check_keys(sec, {"spins"}, "sector");
    const auto& spins = require(sec, "spins", "sector");
    if (!spins.is_object()) bad("sector spins must be an object keyed by link id");
    SectorAssignment a;
    a.spins.assign(L, TwiceSpin{-1});
    for (const auto& [key, val] : spins.items()) {
      const int e = parse_index(key, "sector spins");
      if (e >= L) throw Error(ErrorKind::validation, "state: sector spin for unknown link " + key);
      a.spins[e] = TwiceSpin{as_int(val, "twice-spin")};
    }
    for (int e = 0; e < L; ++e)
      if (a.spins[e].twice < 0)
        throw Error(ErrorKind::validation, "state: sector does not assign a nonnegative spin to link " + std::to_string(e));
    s.sectors.push_back(std::move(a));
  }

  if (doc.contains("amplitudes")) {
    const auto& amp = doc["amplitudes"];
    if (!amp.is_object()) bad("amplitudes must be an object");
    for (const auto& [lkey, per] : amp.items()) {
      const int e = parse_index(lkey, "amplitudes");
      if (!per.is_object()) bad("amplitudes entries must be objects keyed by twice-spin");
      for (const auto& [jkey, val] : per.items()) s.amplitudes.g[{e, parse_index(jkey, "amplitudes")}] = as_complex(val, "amplitude");
    }
  }

  const auto& inter = require(doc, "intertwiner", "scenario");
  check_keys(inter, {"blocks", "vertex_product"}, "intertwiner");
  if (inter.contains("vertex_product")) {
    if (!inter["vertex_product"].is_boolean()) bad("intertwiner.vertex_product must be a boolean");
    s.intertwiner.vertex_product = inter["vertex_product"].get<bool>();
  }
  const auto& blocks = require(inter, "blocks", "intertwiner");
  if (!blocks.is_object()) bad("intertwiner.blocks must be an object keyed by \"m,n\"");
  for (const auto& [key, rows] : blocks.items()) {
    const auto comma = key.find(',');
    if (comma == std::string::npos) bad("block key '" + key + "' must read \"m,n\"");
    const int m = parse_index(key.substr(0, comma), "block"), n = parse_index(key.substr(comma + 1), "block");
    s.intertwiner.blocks[{m, n}] = parse_matrix(rows, "block " + key);
  }

  const auto& reg = require(doc, "region_C", "scenario");
  if (!reg.is_array()) bad("region_C must be an array of link ids");
  for (const auto& e : reg) s.region_C.links.push_back(as_int(e, "region_C entry"));
  std::sort(s.region_C.links.begin(), s.region_C.links.end());

  if (doc.contains("core") && !doc["core"].is_null()) {
    check_keys(doc["core"], {"purity"}, "core");
    s.core = CoreSpec{as_double(require(doc["core"], "purity", "core"), "core.purity")};
  }
  const auto& cut = require(doc, "cutoffs", "scenario");
  check_keys(cut, {"lower", "upper"}, "cutoffs");
  s.lower_cutoff = TwiceSpin{as_int(require(cut, "lower", "cutoffs"), "cutoffs.lower")};
  s.upper_cutoff = TwiceSpin{as_int(require(cut, "upper", "cutoffs"), "cutoffs.upper")};
  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) bad("mode must be a string");
    s.mode = parse_mode(doc["mode"].get<std::string>());
  }
  return s;
}

FamilyParams parse_family(const json& doc) {
  check_keys(doc, {"family", "params", "region", "mode"}, "family scenario");
  if (!doc["family"].is_string()) bad("family must be a string");
  FamilyParams f;
  try {
    f = default_family(doc["family"].get<std::string>());
  } catch (const Error& e) {
    bad(e.what());
  }
  if (doc.contains("region")) {
    if (!doc["region"].is_string()) bad("region must be a string");
    f.region = doc["region"].get<std::string>();
  }
  if (doc.contains("mode")) {
    if (!doc["mode"].is_string()) bad("mode must be a string");
    f.mode = parse_mode(doc["mode"].get<std::string>());
  }
  std::set<std::string> real_keys, complex_keys, int_keys;
  if (f.name == "appendix_c") {
    int_keys = {"twice_s"};
    real_keys = {"a", "d"};
    complex_keys = {"b", "u", "v"};
  } else if (f.name == "two_sector") {
    int_keys = {"twice_s", "twice_t"};
    real_keys = {"c_j"};
  } else if (f.name == "once_fine_grained") {
    int_keys = {"twice_j"};
  }
  if (doc.contains("params")) {
    const auto& p = doc["params"];
    if (!p.is_object()) bad("params must be an object");
    for (const auto& [key, val] : p.items()) {
      if (int_keys.count(key)) {
        f.values[key] = as_int(val, key);
      } else if (real_keys.count(key)) {
        f.values[key] = as_double(val, key);
      } else if (complex_keys.count(key)) {
        const cplx z = as_complex(val, key);
        f.values[key + "_re"] = z.real();
        f.values[key + "_im"] = z.imag();
      } else {
        bad("unknown key '" + key + "' in params of family " + f.name);
      }
    }
  }
  return f;
}

}  // namespace

Mode parse_mode(const std::string& name) {
  if (name == "exact") return Mode::exact;
  if (name == "high_spin") return Mode::high_spin;
  throw Error(ErrorKind::parse, "parse: mode must be exact or high_spin, got '" + name + "'");
}

ScenarioDocument parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    bad(std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) bad("top level must be an object");
  ScenarioDocument out;
  out.text = text;
  try {
    if (doc.contains("family")) {
      out.family = parse_family(doc);
      out.scenario = build_family(*out.family);
    } else {
      out.scenario = parse_explicit(doc);
    }
  } catch (const json::exception& e) {
    bad(e.what());
  }
  validate_state(out.scenario);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::parse, "parse: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioDocument load_scenario(const std::string& path) { return parse_scenario(read_file(path)); }

json scenario_to_json(const Scenario& s) {
  json g;
  g["vertices"] = s.graph.n_vertices;
  g["internal_links"] = json::array();
  for (const auto& l : s.graph.internal_links) g["internal_links"].push_back({{"from", l.from}, {"to", l.to}, {"color", l.color}});
  g["boundary_links"] = json::array();
  for (const auto& b : s.graph.boundary_links)
    g["boundary_links"].push_back(
        {{"vertex", b.vertex}, {"color", b.color}, {"side", b.side == Side::outer ? "outer" : "inner"}});
  json doc;
  doc["graph"] = g;
  doc["sectors"] = json::array();
  for (const auto& sec : s.sectors) {
    json spins = json::object();
    for (std::size_t e = 0; e < sec.spins.size(); ++e) spins[std::to_string(e)] = sec.spins[e].twice;
    doc["sectors"].push_back({{"spins", spins}});
  }
  json amp = json::object();
  for (const auto& [key, g_val] : s.amplitudes.g) amp[std::to_string(key.first)][std::to_string(key.second)] = complex_json(g_val);
  doc["amplitudes"] = amp;
  json blocks = json::object();
  for (const auto& [key, M] : s.intertwiner.blocks) {
    json rows = json::array();
    for (long i = 0; i < M.rows(); ++i) {
      json row = json::array();
      for (long j = 0; j < M.cols(); ++j) row.push_back(complex_json(M(i, j)));
      rows.push_back(row);
    }
    blocks[std::to_string(key.first) + "," + std::to_string(key.second)] = rows;
  }
  doc["intertwiner"] = {{"blocks", blocks}, {"vertex_product", s.intertwiner.vertex_product}};
  doc["region_C"] = s.region_C.links;
  if (s.core) doc["core"] = {{"purity", s.core->purity}};
  doc["cutoffs"] = {{"lower", s.lower_cutoff.twice}, {"upper", s.upper_cutoff.twice}};
  doc["mode"] = to_string(s.mode);
  return doc;
}

json family_to_json(const FamilyParams& f) {
  json doc;
  doc["family"] = f.name;
  json p = json::object();
  for (const auto& [key, val] : f.values) {
    if (key.size() > 3 && key.compare(key.size() - 3, 3, "_re") == 0) {
      const std::string base = key.substr(0, key.size() - 3);
      auto im = f.values.find(base + "_im");
      p[base] = json::array({val, im == f.values.end() ? 0.0 : im->second});
    } else if (key.size() > 3 && key.compare(key.size() - 3, 3, "_im") == 0) {
      continue;
    } else if (key.rfind("twice_", 0) == 0) {
      p[key] = static_cast<int>(val);
    } else {
      p[key] = val;
    }
  }
  doc["params"] = p;
  if (!f.region.empty()) doc["region"] = f.region;
  doc["mode"] = to_string(f.mode);
  return doc;
}

std::string dump_scenario(const Scenario& s) { return scenario_to_json(s).dump(2) + "\n"; }

void save_scenario(const Scenario& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::validation, "cannot write '" + path + "'");
  out << dump_scenario(s);
}

}  // namespace rstn
