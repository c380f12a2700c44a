#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace hdc {

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct NodeIndex {
  int i = 0;
  int j = 0;
  friend bool operator==(const NodeIndex&, const NodeIndex&) = default;
  friend auto operator<=>(const NodeIndex&, const NodeIndex&) = default;
};

double distance(Point a, Point b);

// Square, cell-centred tiling of the unit square. Node (i, j) sits at the
// centre of lattice square (i, j), so the PDE grid and the vessel lattice are
// the same object.
class GridGeometry {
 public:
  explicit GridGeometry(int n);
  GridGeometry(int nx, int ny);

  /// Lattice whose squares have side 2 * cell_radius.
  static GridGeometry from_cell_radius(double cell_radius);

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double dx() const noexcept { return dx_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(nx_) * ny_; }

  std::size_t index(int i, int j) const noexcept { return static_cast<std::size_t>(j) * nx_ + i; }
  std::size_t index(NodeIndex n) const noexcept { return index(n.i, n.j); }
  NodeIndex node(std::size_t flat) const noexcept {
    return {static_cast<int>(flat % nx_), static_cast<int>(flat / nx_)};
  }

  bool in_bounds(int i, int j) const noexcept { return i >= 0 && j >= 0 && i < nx_ && j < ny_; }
  bool in_bounds(NodeIndex n) const noexcept { return in_bounds(n.i, n.j); }

  Point centre(int i, int j) const noexcept { return {(i + 0.5) * dx_, (j + 0.5) * dx_}; }
  Point centre(NodeIndex n) const noexcept { return centre(n.i, n.j); }

  /// Lattice square containing p; points on the outer wall map to the edge square.
  NodeIndex square_of(Point p) const noexcept;

  /// Closed unit square.
  static bool contains(Point p) noexcept { return p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0; }

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;

 private:
  int nx_;
  int ny_;
  double dx_;
};

enum class FieldKind { Taf, Drug, Oxygen, Indicator };

const char* to_string(FieldKind kind);

struct ScalarField {
  ScalarField(const GridGeometry& g, FieldKind k, double fill = 0.0)
      : geometry(g), kind(k), values(g.size(), fill) {}

  double& operator()(int i, int j) { return values[geometry.index(i, j)]; }
  double operator()(int i, int j) const { return values[geometry.index(i, j)]; }
  double& operator[](NodeIndex n) { return values[geometry.index(n)]; }
  double operator[](NodeIndex n) const { return values[geometry.index(n)]; }

  double sum() const;
  double max() const;

  GridGeometry geometry;
  FieldKind kind;
  std::vector<double> values;
};

/// Bilinear interpolation between node values; constant extrapolation in the
/// half-cell strip along the walls (consistent with zero flux).
double sample_bilinear(const ScalarField& field, Point p);

}  // namespace hdc
