#pragma once

#include <map>
#include <string>

#include "rstn/scenario.hpp"

namespace rstn {

// Two-vertex graph: L = 0, R = 1, internal L-R link of color 4, three boundary links each.
// Sector j carries (s, s, 3s - 1/2) on R's boundary, sector k carries (s, s, 3s).
struct AppendixCParams {
  int twice_s = 2;
  double a = 0.25, d = 0.25;
  cplx b{0.0, 0.0}, u{0.0, 0.0}, v{0.0, 0.0};
  std::string region = "x_link";  // or upper_right
  Mode mode = Mode::exact;

  double w() const { return 1.0 - a - d; }
};

Scenario appendix_c(const AppendixCParams& p);

// Two sectors of the same form as sector j above, at scales s and t, with rho_nn = c_n I/2.
struct TwoSectorParams {
  int twice_s = 403;
  int twice_t = 100;
  double c_j = 0.5;
  std::string region = "x_link";
  Mode mode = Mode::high_spin;
};

Scenario two_sector(const TwoSectorParams& p);
int twice_for_ratio(int twice_s, double nu);  // spin whose dimension is nu * d_s

// Five-vertex graph of one fine-graining step, homogeneous spin, maximally mixed intertwiners.
Scenario once_fine_grained(int twice_j = 1, Mode mode = Mode::exact);

// Two-vertex graph with all spins 1/2 and a fixed entangled mixed intertwiner state.
Scenario tiny_oracle();

// Named family plus numeric parameters, as stored in scenario files.
struct FamilyParams {
  std::string name;
  std::map<std::string, double> values;
  std::string region;
  Mode mode = Mode::exact;
};

Scenario build_family(const FamilyParams& f);
FamilyParams default_family(const std::string& name);

// Sweep parameters: s-scale, a, d, w, b, u, v, nu, c_n.
void set_parameter(FamilyParams& f, const std::string& name, double value);
Scenario set_weight_parameter(const Scenario& s, double c0);

}  // namespace rstn
