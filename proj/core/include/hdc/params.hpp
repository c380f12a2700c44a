#pragma once

namespace hdc {

// Non-dimensional model constants with calibrated defaults
// (length scale 5 mm, time scale 16 h).
struct ModelParameters {
  // endothelial random motility and chemotaxis, chi(c) = chi0 / (1 + alpha c)
  double D_n = 4.608e-4;
  double chi0 = 0.38;
  double alpha = 0.6;

  // TAF
  double D_c = 0.12;
  double xi_c = 0.002;
  double eta = 1.0e3;
  double lambda = 0.1;

  // drug
  double D_d = 0.5;
  double xi_d = 0.01;
  double rho_d = 0.5;

  // DNA damage repair
  double p_r = 0.2;

  // oxygen
  double D_o = 0.35;
  double xi_o = 0.025;
  double rho_o = 0.57;
  double S_o = 3.5;
  double o_max = 1.0;
  double o_hyp = 0.25;
  double o_apop = 0.05;

  // sprout branching
  double psi = 0.5;
  double c_br = 1.0;

  // tumour cells
  double th_death = 0.5;
  int th_multi = 3;
  int F_max = 10;
  double R_c = 0.005;

  double chemotaxis(double c) const { return chi0 / (1.0 + alpha * c); }

  friend bool operator==(const ModelParameters&, const ModelParameters&) = default;
};

}  // namespace hdc
