#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hdc/grid.hpp"
#include "hdc/lineage.hpp"
#include "hdc/rng.hpp"

namespace hdc {

enum class OxygenState { Normoxic, Hypoxic };
enum class OxygenClass { Apoptosis, Hypoxic, Normoxic };

const char* to_string(OxygenState state);

struct PhenotypeTraits {
  double oxygen_uptake = 0.0;       // rho_o of this cell
  double proliferation_rate = 0.0;  // alpha_n of this cell
  double death_threshold = 0.0;     // tolerated DNA damage

  friend bool operator==(const PhenotypeTraits&, const PhenotypeTraits&) = default;
};

struct TumourCell {
  LineageId id;
  Point position;
  double oxygen = 0.0;
  double drug = 0.0;
  double damage = 0.0;
  double age = 0.0;
  double maturation = 0.0;  // log 2 / traits.proliferation_rate
  PhenotypeTraits traits;
  PhenotypeTraits base;     // non-mutated trait values of the founder lineage
  OxygenState state = OxygenState::Normoxic;
  double exposure_time = 0.0;
};

struct OxygenThresholds {
  double apoptosis = 0.05;
  double hypoxia = 0.25;
};

/// Generation-0 cell. `maturation` is the founder's cycle time; the
/// proliferation rate follows as log 2 / maturation.
TumourCell make_founder(int k, Point position, double maturation, double age, double death_threshold,
                        double oxygen_uptake);

/// Reads the local oxygen (bilinear) and accumulates local drug * dt. The
/// exposure clock advances by dt while the local drug exceeds d_floor.
void sense(TumourCell& cell, const ScalarField& oxygen, const ScalarField& drug, double dt,
           double d_floor);

OxygenClass classify(double oxygen, const OxygenThresholds& thresholds);

inline OxygenClass classify(const TumourCell& cell, const OxygenThresholds& thresholds) {
  return classify(cell.oxygen, thresholds);
}

/// dam <- dam + d dt - p_r dam dt, floored at zero.
void update_damage(TumourCell& cell, double local_drug, double p_r, double dt);

/// True when the accumulated damage exceeds the cell's death threshold.
bool check_death(const TumourCell& cell);

/// Ages normoxic cells only.
void advance_age(TumourCell& cell, double dt);

/// Brute-force crowding count: cells plus vessel agents with centres within radius of p.
int local_density(Point p, std::span<const Point> cells, std::span<const Point> vessels, double radius);

// Lattice bookkeeping for the division neighbourhood and crowding queries.
// Squares have side 2 R_c, i.e. the grid spacing.
class OccupancyIndex {
 public:
  explicit OccupancyIndex(const GridGeometry& geometry);

  const GridGeometry& geometry() const noexcept { return geometry_; }

  void add_cell(std::size_t cell, Point position);
  void remove_cell(std::size_t cell, Point position);
  void mark_vessel(NodeIndex square);

  bool has_vessel(NodeIndex square) const { return vessel_[geometry_.index(square)] != 0; }
  bool has_cell(NodeIndex square) const { return !residents_[geometry_.index(square)].empty(); }
  /// Inside the domain with neither a tumour resident nor a vessel.
  bool is_free(NodeIndex square) const;

  const std::vector<std::size_t>& residents(NodeIndex square) const {
    return residents_[geometry_.index(square)];
  }
  std::size_t cell_count() const noexcept { return cell_count_; }

  /// Same count as local_density, answered from the lattice buckets.
  int count_within(Point p, double radius, std::span<const TumourCell> cells) const;

  /// Free squares among the 8 lattice neighbours of `square`, in a fixed order.
  std::vector<NodeIndex> free_neighbours(NodeIndex square) const;

 private:
  GridGeometry geometry_;
  std::vector<std::vector<std::size_t>> residents_;
  std::vector<std::uint8_t> vessel_;
  std::size_t cell_count_ = 0;
};

OccupancyIndex build_occupancy(const GridGeometry& geometry, std::span<const TumourCell> cells,
                               std::span<const NodeIndex> vessel_squares);

struct DivisionOutcome {
  TumourCell first;   // keeps the mother's position
  TumourCell second;  // centre of a free neighbouring square
};

/// Division gate and daughter construction. Fires iff the cell is mature,
/// crowding is below F_max and a neighbouring square is free. Traits are copied
/// unchanged; mutation is applied by the caller.
std::optional<DivisionOutcome> try_divide(const TumourCell& cell, const OccupancyIndex& occupancy,
                                          int density, int f_max, const ScalarField& oxygen,
                                          double hypoxia_threshold, Rng& rng);

/// Euler-Maruyama step of dX = eps dW with reflecting walls.
void brownian_step(TumourCell& cell, double epsilon, double dt, Rng& rng);

/// Mirror a point back into the unit square.
Point reflect_into_domain(Point p);

struct RelaxSettings {
  double cell_radius = 0.005;
  double tolerance = 0.05;  // allowed residual overlap, as a fraction of R_c
  int max_iterations = 100;
};

struct RelaxReport {
  int iterations = 0;
  bool converged = true;
  double max_overlap = 0.0;
};

/// Pushes overlapping cell pairs apart along their centre line (half each) and
/// cells off immobile vessel agents until every overlap is within tolerance.
RelaxReport relax_overlaps(std::vector<TumourCell>& cells, std::span<const NodeIndex> vessel_squares,
                           const GridGeometry& geometry, const RelaxSettings& settings, Rng& rng);

}  // namespace hdc
