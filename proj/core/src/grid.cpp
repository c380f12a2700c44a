#include "hdc/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hdc/errors.hpp"

namespace hdc {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

GridGeometry::GridGeometry(int n) : GridGeometry(n, n) {}

GridGeometry::GridGeometry(int nx, int ny) : nx_(nx), ny_(ny), dx_(nx > 0 ? 1.0 / nx : 0.0) {
  if (nx < 3 || ny < 3) throw InvalidInput("grid needs at least 3 nodes per axis");
  // dx * nx == dx * ny == 1 forces a square node count.
  if (nx != ny) throw InvalidInput("grid must tile the unit square with square cells (nx == ny)");
}

GridGeometry GridGeometry::from_cell_radius(double cell_radius) {
  if (!(cell_radius > 0.0)) throw InvalidInput("cell radius must be positive");
  const double n_real = 1.0 / (2.0 * cell_radius);
  const long n = std::lround(n_real);
  if (std::abs(n_real - static_cast<double>(n)) > 1e-9 * n_real)
    throw InvalidInput("1 / (2 R_c) must be an integer so squares tile the unit square");
  return GridGeometry(static_cast<int>(n));
}

NodeIndex GridGeometry::square_of(Point p) const noexcept {
  const int i = std::clamp(static_cast<int>(std::floor(p.x / dx_)), 0, nx_ - 1);
  const int j = std::clamp(static_cast<int>(std::floor(p.y / dx_)), 0, ny_ - 1);
  return {i, j};
}

const char* to_string(FieldKind kind) {
  switch (kind) {
    case FieldKind::Taf: return "taf";
    case FieldKind::Drug: return "drug";
    case FieldKind::Oxygen: return "oxygen";
    case FieldKind::Indicator: return "indicator";
  }
  return "unknown";
}

double ScalarField::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

double ScalarField::max() const { return *std::max_element(values.begin(), values.end()); }

double sample_bilinear(const ScalarField& field, Point p) {
  const auto& g = field.geometry;
  const double h = g.dx();
  // Node coordinates are (i + 0.5) h; shift so nodes sit on integers.
  const double u = std::clamp(p.x / h - 0.5, 0.0, static_cast<double>(g.nx() - 1));
  const double v = std::clamp(p.y / h - 0.5, 0.0, static_cast<double>(g.ny() - 1));
  const int i0 = std::min(static_cast<int>(u), g.nx() - 2);
  const int j0 = std::min(static_cast<int>(v), g.ny() - 2);
  const double fu = u - i0;
  const double fv = v - j0;
  return (1 - fu) * (1 - fv) * field(i0, j0) + fu * (1 - fv) * field(i0 + 1, j0) +
         (1 - fu) * fv * field(i0, j0 + 1) + fu * fv * field(i0 + 1, j0 + 1);
}

}  // namespace hdc
