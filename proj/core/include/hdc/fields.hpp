#pragma once

#include <array>
#include <concepts>
#include <functional>
#include <iosfwd>
#include <span>

#include "hdc/grid.hpp"
#include "hdc/params.hpp"

namespace hdc {

/// Exact solution of Laplace's equation with c = 0 at y = 0, c = k at y = 1
/// and zero flux on the sides: c(x, y) = k y, sampled at every node.
ScalarField init_linear_taf(double k, const GridGeometry& geometry);

/// 1 at every node within `radius` of a listed position, 0 elsewhere.
/// Throws InvalidInput for positions outside the unit square.
ScalarField deposit_indicator(std::span<const Point> positions, const GridGeometry& geometry,
                              double radius);

struct UptakeSite {
  Point position;
  double rate = 0.0;
};

/// Per-node sum of site rates over the sites whose disc of `radius` covers the node.
std::vector<double> deposit_rates(std::span<const UptakeSite> sites, const GridGeometry& geometry,
                                  double radius);

using Reaction = std::function<double(double u, double x, double y, double t)>;

/// One Peaceman-Rachford ADI step of u_t = D lap(u) + f(u, x, y, t) with zero-flux
/// walls. The reaction is evaluated once, at U^k and time t, and used in both
/// half-steps. Throws NumericalFailure on non-finite input or output.
ScalarField adi_step(const ScalarField& field, double diff_coeff, const Reaction& reaction, double dt,
                     double t = 0.0);

/// Same scheme with the reaction already evaluated at U^k (one value per node).
ScalarField adi_step(const ScalarField& field, double diff_coeff, std::span<const double> reaction,
                     double dt);

/// dc/dt = D_c lap c - xi_c c + eta chi_hyp - lambda c chi_vessel; clamped at 0.
ScalarField step_taf(const ScalarField& c, std::span<const Point> hypoxic_positions,
                     std::span<const Point> vessel_positions, const ModelParameters& params, double dt);

/// dd/dt = D_d lap d - xi_d d - rho_d d chi_tumour + S_d(t) chi_vessel; clamped at 0.
ScalarField step_drug(const ScalarField& d, std::span<const Point> tumour_positions,
                      std::span<const Point> vessel_positions, double supply_rate,
                      const ModelParameters& params, double dt);

/// do/dt = D_o lap o - xi_o o - sum_a rho_a chi_a + S_o (o_max - o) chi_vessel; clamped to [0, o_max].
ScalarField step_oxygen(const ScalarField& o, std::span<const UptakeSite> tumour_uptake_sites,
                        std::span<const Point> vessel_positions, const ModelParameters& params,
                        double dt);

// Index order of the endothelial stencil: stay, left, right, down, up.
enum Direction : int { Stay = 0, Left = 1, Right = 2, Down = 3, Up = 4 };

struct MoveCoefficients {
  std::array<double, 5> p{};
  bool normalized = false;
  // Which correction rule fired on the (left, right) and (down, up) pairs.
  bool corrected_x = false;
  bool corrected_y = false;
  bool swapped_x = false;
  bool swapped_y = false;
};

/// Raw forward-Euler coefficients of the endothelial equation at node (i, j).
/// P1..P4 multiply n at the right, left, upper and lower neighbours, i.e. they
/// are proportional to the probabilities of moving left, right, down and up.
MoveCoefficients raw_move_coefficients(const ScalarField& c, int i, int j, double dt,
                                       const ModelParameters& params);

/// Negative-probability corrections on the (left, right) and (down, up) pairs,
/// then normalisation onto the probability simplex. Throws StepSizeViolation when P0 < 0.
MoveCoefficients correct_and_normalize(MoveCoefficients raw);

/// Raw coefficients followed by the negative-probability corrections and
/// normalisation. Throws StepSizeViolation when P0 < 0.
MoveCoefficients move_coefficients(const ScalarField& c, int i, int j, double dt,
                                   const ModelParameters& params);

/// "x,y,value" rows in row-major node order, 9 significant digits.
void write_field_csv(std::ostream& out, const ScalarField& field);

}  // namespace hdc
