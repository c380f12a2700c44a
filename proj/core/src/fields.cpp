#include "hdc/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "hdc/errors.hpp"

namespace hdc {

namespace {

void require_finite(const std::vector<double>& values, const GridGeometry& g, const char* what) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values[k])) {
      const auto n = g.node(k);
      throw NumericalFailure(what, n.i, n.j);
    }
  }
}

// Constant-coefficient tridiagonal system (1 + r) on the interior, (1 + r/2)
// on the two zero-flux end rows, -r/2 off the diagonal. Factored once per step.
class NeumannTridiagonal {
 public:
  NeumannTridiagonal(int n, double r) : off_(-0.5 * r), cprime_(n), inv_denom_(n) {
    const double edge = 1.0 + 0.5 * r;
    const double interior = 1.0 + r;
    for (int k = 0; k < n; ++k) {
      const double b = (k == 0 || k == n - 1) ? edge : interior;
      const double denom = k == 0 ? b : b - off_ * cprime_[k - 1];
      inv_denom_[k] = 1.0 / denom;
      cprime_[k] = off_ * inv_denom_[k];
    }
  }

  // Solves in place; rhs is overwritten with the solution.
  void solve(std::span<double> rhs) const {
    const int n = static_cast<int>(rhs.size());
    rhs[0] *= inv_denom_[0];
    for (int k = 1; k < n; ++k) rhs[k] = (rhs[k] - off_ * rhs[k - 1]) * inv_denom_[k];
    for (int k = n - 2; k >= 0; --k) rhs[k] -= cprime_[k] * rhs[k + 1];
  }

 private:
  double off_;
  std::vector<double> cprime_;
  std::vector<double> inv_denom_;
};

std::vector<double> indicator_values(std::span<const Point> positions, const GridGeometry& g,
                                     double radius) {
  std::vector<double> out(g.size(), 0.0);
  const double h = g.dx();
  const double reach = radius * (1.0 + 1e-12);
  for (const Point& p : positions) {
    if (!GridGeometry::contains(p) || !std::isfinite(p.x) || !std::isfinite(p.y))
      throw InvalidInput("indicator position outside the unit square");
    const int i_lo = std::max(0, static_cast<int>(std::floor((p.x - reach) / h - 0.5)));
    const int i_hi = std::min(g.nx() - 1, static_cast<int>(std::ceil((p.x + reach) / h - 0.5)));
    const int j_lo = std::max(0, static_cast<int>(std::floor((p.y - reach) / h - 0.5)));
    const int j_hi = std::min(g.ny() - 1, static_cast<int>(std::ceil((p.y + reach) / h - 0.5)));
    for (int j = j_lo; j <= j_hi; ++j)
      for (int i = i_lo; i <= i_hi; ++i)
        if (distance(g.centre(i, j), p) <= reach) out[g.index(i, j)] = 1.0;
  }
  return out;
}

}  // namespace

ScalarField init_linear_taf(double k, const GridGeometry& geometry) {
  if (!(k >= 0.0)) throw InvalidInput("TAF slope k must be non-negative");
  ScalarField c(geometry, FieldKind::Taf);
  for (int j = 0; j < geometry.ny(); ++j)
    for (int i = 0; i < geometry.nx(); ++i) c(i, j) = k * geometry.centre(i, j).y;
  return c;
}

ScalarField deposit_indicator(std::span<const Point> positions, const GridGeometry& geometry,
                              double radius) {
  ScalarField out(geometry, FieldKind::Indicator);
  out.values = indicator_values(positions, geometry, radius);
  return out;
}

std::vector<double> deposit_rates(std::span<const UptakeSite> sites, const GridGeometry& g,
                                  double radius) {
  std::vector<double> out(g.size(), 0.0);
  const double h = g.dx();
  const double reach = radius * (1.0 + 1e-12);
  for (const auto& site : sites) {
    const Point p = site.position;
    if (!GridGeometry::contains(p)) throw InvalidInput("uptake site outside the unit square");
    const int i_lo = std::max(0, static_cast<int>(std::floor((p.x - reach) / h - 0.5)));
    const int i_hi = std::min(g.nx() - 1, static_cast<int>(std::ceil((p.x + reach) / h - 0.5)));
    const int j_lo = std::max(0, static_cast<int>(std::floor((p.y - reach) / h - 0.5)));
    const int j_hi = std::min(g.ny() - 1, static_cast<int>(std::ceil((p.y + reach) / h - 0.5)));
    for (int j = j_lo; j <= j_hi; ++j)
      for (int i = i_lo; i <= i_hi; ++i)
        if (distance(g.centre(i, j), p) <= reach) out[g.index(i, j)] += site.rate;
  }
  return out;
}

ScalarField adi_step(const ScalarField& field, double diff_coeff, std::span<const double> reaction,
                     double dt) {
  const auto& g = field.geometry;
  if (!(dt > 0.0)) throw InvalidInput("adi_step: dt must be positive");
  if (!(diff_coeff >= 0.0)) throw InvalidInput("adi_step: diffusion coefficient must be non-negative");
  if (reaction.size() != g.size()) throw InvalidInput("adi_step: reaction size does not match grid");
  require_finite(field.values, g, "non-finite value entering ADI step");

  const int nx = g.nx();
  const int ny = g.ny();
  const double h = g.dx();
  const double half = 0.5 * diff_coeff * dt / (h * h);
  const double half_dt = 0.5 * dt;
  const NeumannTridiagonal solver_x(nx, 2.0 * half);
  const NeumannTridiagonal solver_y(ny, 2.0 * half);

  const auto& u = field.values;
  std::vector<double> mid(g.size());
  std::vector<double> line(std::max(nx, ny));

  // Implicit in x, explicit in y. Ghost rows mirror the edge row (zero flux).
  for (int j = 0; j < ny; ++j) {
    const int jm = j == 0 ? 0 : j - 1;
    const int jp = j == ny - 1 ? ny - 1 : j + 1;
    for (int i = 0; i < nx; ++i) {
      const double uc = u[g.index(i, j)];
      line[i] = uc + half * (u[g.index(i, jp)] - 2.0 * uc + u[g.index(i, jm)]) +
                half_dt * reaction[g.index(i, j)];
    }
    solver_x.solve(std::span<double>(line.data(), nx));
    std::copy_n(line.begin(), nx, mid.begin() + static_cast<std::ptrdiff_t>(g.index(0, j)));
  }

  ScalarField out(g, field.kind);
  for (int i = 0; i < nx; ++i) {
    const int im = i == 0 ? 0 : i - 1;
    const int ip = i == nx - 1 ? nx - 1 : i + 1;
    for (int j = 0; j < ny; ++j) {
      const double mc = mid[g.index(i, j)];
      line[j] = mc + half * (mid[g.index(ip, j)] - 2.0 * mc + mid[g.index(im, j)]) +
                half_dt * reaction[g.index(i, j)];
    }
    solver_y.solve(std::span<double>(line.data(), ny));
    for (int j = 0; j < ny; ++j) out.values[g.index(i, j)] = line[j];
  }

  require_finite(out.values, g, "non-finite value produced by ADI step");
  return out;
}

ScalarField adi_step(const ScalarField& field, double diff_coeff, const Reaction& reaction, double dt,
                     double t) {
  const auto& g = field.geometry;
  std::vector<double> f(g.size(), 0.0);
  if (reaction) {
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const Point p = g.centre(i, j);
        f[g.index(i, j)] = reaction(field(i, j), p.x, p.y, t);
      }
  }
  return adi_step(field, diff_coeff, std::span<const double>(f), dt);
}

ScalarField step_taf(const ScalarField& c, std::span<const Point> hypoxic_positions,
                     std::span<const Point> vessel_positions, const ModelParameters& params, double dt) {
  const auto& g = c.geometry;
  const auto hyp = indicator_values(hypoxic_positions, g, params.R_c);
  const auto ves = indicator_values(vessel_positions, g, params.R_c);
  std::vector<double> f(g.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double u = c.values[k];
    f[k] = -params.xi_c * u + params.eta * hyp[k] - params.lambda * u * ves[k];
  }
  auto out = adi_step(c, params.D_c, std::span<const double>(f), dt);
  for (double& v : out.values) v = std::max(v, 0.0);
  return out;
}

ScalarField step_drug(const ScalarField& d, std::span<const Point> tumour_positions,
                      std::span<const Point> vessel_positions, double supply_rate,
                      const ModelParameters& params, double dt) {
  if (!(supply_rate >= 0.0)) throw InvalidInput("drug supply rate must be non-negative");
  const auto& g = d.geometry;
  const auto tum = indicator_values(tumour_positions, g, params.R_c);
  const auto ves = indicator_values(vessel_positions, g, params.R_c);
  std::vector<double> f(g.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double u = d.values[k];
    f[k] = -params.xi_d * u - params.rho_d * u * tum[k] + supply_rate * ves[k];
  }
  auto out = adi_step(d, params.D_d, std::span<const double>(f), dt);
  for (double& v : out.values) v = std::max(v, 0.0);
  return out;
}

ScalarField step_oxygen(const ScalarField& o, std::span<const UptakeSite> tumour_uptake_sites,
                        std::span<const Point> vessel_positions, const ModelParameters& params,
                        double dt) {
  const auto& g = o.geometry;
  const auto uptake = deposit_rates(tumour_uptake_sites, g, params.R_c);
  const auto ves = indicator_values(vessel_positions, g, params.R_c);
  std::vector<double> f(g.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double u = o.values[k];
    f[k] = -params.xi_o * u - uptake[k] + params.S_o * (params.o_max - u) * ves[k];
  }
  auto out = adi_step(o, params.D_o, std::span<const double>(f), dt);
  for (double& v : out.values) v = std::clamp(v, 0.0, params.o_max);
  return out;
}

MoveCoefficients raw_move_coefficients(const ScalarField& c, int i, int j, double dt,
                                       const ModelParameters& params) {
  const auto& g = c.geometry;
  if (!g.in_bounds(i, j)) throw InvalidInput("move_coefficients: node outside grid");
  // Cell-centred mirror: the ghost beyond a wall carries the edge value.
  const double cc = c(i, j);
  const double c_right = c(std::min(i + 1, g.nx() - 1), j);
  const double c_left = c(std::max(i - 1, 0), j);
  const double c_up = c(i, std::min(j + 1, g.ny() - 1));
  const double c_down = c(i, std::max(j - 1, 0));

  const double h2 = g.dx() * g.dx();
  const double diffusive = params.D_n * dt / h2;
  const double chi = params.chemotaxis(cc);
  const double drift = chi * dt / (4.0 * h2);

  MoveCoefficients m;
  m.p[Stay] = 1.0 - 4.0 * diffusive - chi * dt / h2 * (c_right + c_left + c_up + c_down - 4.0 * cc);
  m.p[Left] = diffusive - drift * (c_right - c_left);
  m.p[Right] = diffusive + drift * (c_right - c_left);
  m.p[Down] = diffusive - drift * (c_up - c_down);
  m.p[Up] = diffusive + drift * (c_up - c_down);
  return m;
}

namespace {

// Returns {corrected, swapped}.
std::pair<bool, bool> correct_pair(double& a, double& b) {
  if (a < 0.0 && b >= 0.0) {
    b -= a;
    a = 0.0;
    return {true, false};
  }
  if (b < 0.0 && a >= 0.0) {
    a -= b;
    b = 0.0;
    return {true, false};
  }
  if (a < 0.0 && b < 0.0) {
    const double old_a = a;
    a = -b;
    b = -old_a;
    return {false, true};
  }
  return {false, false};
}

}  // namespace

MoveCoefficients correct_and_normalize(MoveCoefficients m) {
  if (m.p[Stay] < 0.0) throw StepSizeViolation("tip substep too large: P0 < 0");
  std::tie(m.corrected_x, m.swapped_x) = correct_pair(m.p[Left], m.p[Right]);
  std::tie(m.corrected_y, m.swapped_y) = correct_pair(m.p[Down], m.p[Up]);

  double total = 0.0;
  for (double v : m.p) total += v;
  if (!(total > 0.0) || !std::isfinite(total)) throw StepSizeViolation("degenerate move coefficients");
  for (double& v : m.p) v /= total;
  m.normalized = true;
  return m;
}

MoveCoefficients move_coefficients(const ScalarField& c, int i, int j, double dt,
                                   const ModelParameters& params) {
  try {
    return correct_and_normalize(raw_move_coefficients(c, i, j, dt, params));
  } catch (const StepSizeViolation& e) {
    throw StepSizeViolation(std::string(e.what()) + " at node (" + std::to_string(i) + "," +
                            std::to_string(j) + ")");
  }
}

void write_field_csv(std::ostream& out, const ScalarField& field) {
  const auto& g = field.geometry;
  out << "x,y,value\n";
  char buf[96];
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const Point p = g.centre(i, j);
      std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g\n", p.x, p.y, field(i, j));
      out << buf;
    }
}

}  // namespace hdc
