#include "hdc/tumour.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hdc/errors.hpp"

namespace hdc {

const char* to_string(OxygenState state) {
  return state == OxygenState::Normoxic ? "normoxic" : "hypoxic";
}

TumourCell make_founder(int k, Point position, double maturation, double age, double death_threshold,
                        double oxygen_uptake) {
  if (!(maturation > 0.0)) throw InvalidInput("maturation time must be positive");
  TumourCell cell;
  cell.id = LineageId(k);
  cell.position = position;
  cell.age = age;
  cell.maturation = maturation;
  cell.traits = {oxygen_uptake, std::numbers::ln2 / maturation, death_threshold};
  cell.base = cell.traits;
  return cell;
}

void sense(TumourCell& cell, const ScalarField& oxygen, const ScalarField& drug, double dt,
           double d_floor) {
  cell.oxygen = sample_bilinear(oxygen, cell.position);
  const double local_drug = sample_bilinear(drug, cell.position);
  cell.drug += local_drug * dt;
  if (local_drug > d_floor) cell.exposure_time += dt;
}

OxygenClass classify(double oxygen, const OxygenThresholds& thresholds) {
  if (oxygen <= thresholds.apoptosis) return OxygenClass::Apoptosis;
  if (oxygen <= thresholds.hypoxia) return OxygenClass::Hypoxic;
  return OxygenClass::Normoxic;
}

void update_damage(TumourCell& cell, double local_drug, double p_r, double dt) {
  cell.damage = std::max(0.0, cell.damage + local_drug * dt - p_r * cell.damage * dt);
}

bool check_death(const TumourCell& cell) { return cell.damage > cell.traits.death_threshold; }

void advance_age(TumourCell& cell, double dt) {
  if (cell.state == OxygenState::Normoxic) cell.age += dt;
}

int local_density(Point p, std::span<const Point> cells, std::span<const Point> vessels, double radius) {
  int count = 0;
  for (const Point& q : cells)
    if (distance(p, q) <= radius) ++count;
  for (const Point& q : vessels)
    if (distance(p, q) <= radius) ++count;
  return count;
}

OccupancyIndex::OccupancyIndex(const GridGeometry& geometry)
    : geometry_(geometry), residents_(geometry.size()), vessel_(geometry.size(), 0) {}

void OccupancyIndex::add_cell(std::size_t cell, Point position) {
  residents_[geometry_.index(geometry_.square_of(position))].push_back(cell);
  ++cell_count_;
}

void OccupancyIndex::remove_cell(std::size_t cell, Point position) {
  auto& bucket = residents_[geometry_.index(geometry_.square_of(position))];
  auto it = std::find(bucket.begin(), bucket.end(), cell);
  if (it == bucket.end()) throw InvalidInput("occupancy: cell not registered at that square");
  bucket.erase(it);
  --cell_count_;
}

void OccupancyIndex::mark_vessel(NodeIndex square) { vessel_[geometry_.index(square)] = 1; }

bool OccupancyIndex::is_free(NodeIndex square) const {
  return geometry_.in_bounds(square) && !has_cell(square) && !has_vessel(square);
}

int OccupancyIndex::count_within(Point p, double radius, std::span<const TumourCell> cells) const {
  const NodeIndex home = geometry_.square_of(p);
  const int reach = static_cast<int>(std::ceil(radius / geometry_.dx())) + 1;
  int count = 0;
  for (int j = home.j - reach; j <= home.j + reach; ++j)
    for (int i = home.i - reach; i <= home.i + reach; ++i) {
      if (!geometry_.in_bounds(i, j)) continue;
      const NodeIndex sq{i, j};
      for (std::size_t c : residents(sq))
        if (distance(p, cells[c].position) <= radius) ++count;
      if (has_vessel(sq) && distance(p, geometry_.centre(sq)) <= radius) ++count;
    }
  return count;
}

std::vector<NodeIndex> OccupancyIndex::free_neighbours(NodeIndex square) const {
  std::vector<NodeIndex> out;
  for (int dj = -1; dj <= 1; ++dj)
    for (int di = -1; di <= 1; ++di) {
      if (di == 0 && dj == 0) continue;
      const NodeIndex n{square.i + di, square.j + dj};
      if (is_free(n)) out.push_back(n);
    }
  return out;
}

OccupancyIndex build_occupancy(const GridGeometry& geometry, std::span<const TumourCell> cells,
                               std::span<const NodeIndex> vessel_squares) {
  OccupancyIndex index(geometry);
  for (std::size_t k = 0; k < cells.size(); ++k) index.add_cell(k, cells[k].position);
  for (const auto& sq : vessel_squares) index.mark_vessel(sq);
  return index;
}

std::optional<DivisionOutcome> try_divide(const TumourCell& cell, const OccupancyIndex& occupancy,
                                          int density, int f_max, const ScalarField& oxygen,
                                          double hypoxia_threshold, Rng& rng) {
  if (cell.age < cell.maturation) return std::nullopt;
  if (density >= f_max) return std::nullopt;
  const auto& g = occupancy.geometry();
  const auto free = occupancy.free_neighbours(g.square_of(cell.position));
  if (free.empty()) return std::nullopt;
  const NodeIndex target = free[rng.index(free.size())];

  auto make_daughter = [&](int digit, Point where) {
    TumourCell d = cell;
    d.id = cell.id.child(digit);
    d.position = where;
    d.age = 0.0;
    d.damage = 0.5 * cell.damage;
    d.drug = 0.5 * cell.drug;
    d.oxygen = sample_bilinear(oxygen, where);
    d.state = d.oxygen > hypoxia_threshold ? OxygenState::Normoxic : OxygenState::Hypoxic;
    return d;
  };
  return DivisionOutcome{make_daughter(1, cell.position), make_daughter(2, g.centre(target))};
}

Point reflect_into_domain(Point p) {
  auto fold = [](double v) {
    // Reflect repeatedly; a single Brownian step never needs more than one fold.
    for (int guard = 0; guard < 8 && (v < 0.0 || v > 1.0); ++guard) v = v < 0.0 ? -v : 2.0 - v;
    return std::clamp(v, 0.0, 1.0);
  };
  return {fold(p.x), fold(p.y)};
}

void brownian_step(TumourCell& cell, double epsilon, double dt, Rng& rng) {
  if (!(dt > 0.0)) throw InvalidInput("brownian_step: dt must be positive");
  if (epsilon == 0.0) return;
  const double scale = std::sqrt(dt) * epsilon;
  const double zx = rng.normal();
  const double zy = rng.normal();
  cell.position = reflect_into_domain({cell.position.x + scale * zx, cell.position.y + scale * zy});
}

namespace {

// Counting-sort buckets of cell indices per lattice square, rebuilt per sweep.
struct SquareBuckets {
  std::vector<std::size_t> start;
  std::vector<std::size_t> items;

  void build(const GridGeometry& g, const std::vector<TumourCell>& cells) {
    start.assign(g.size() + 1, 0);
    items.resize(cells.size());
    std::vector<std::size_t> square(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
      square[k] = g.index(g.square_of(cells[k].position));
      ++start[square[k] + 1];
    }
    for (std::size_t s = 1; s < start.size(); ++s) start[s] += start[s - 1];
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t k = 0; k < cells.size(); ++k) items[fill[square[k]]++] = k;
  }
};

}  // namespace

RelaxReport relax_overlaps(std::vector<TumourCell>& cells, std::span<const NodeIndex> vessel_squares,
                           const GridGeometry& geometry, const RelaxSettings& settings, Rng& rng) {
  RelaxReport report;
  const double contact = 2.0 * settings.cell_radius;
  const double allowed = settings.tolerance * settings.cell_radius;

  std::vector<std::uint8_t> vessel(geometry.size(), 0);
  for (const auto& sq : vessel_squares) vessel[geometry.index(sq)] = 1;

  SquareBuckets buckets;
  for (int iter = 0; iter < settings.max_iterations; ++iter) {
    buckets.build(geometry, cells);
    double worst = 0.0;
    for (std::size_t a = 0; a < cells.size(); ++a) {
      const NodeIndex home = geometry.square_of(cells[a].position);
      for (int j = home.j - 1; j <= home.j + 1; ++j)
        for (int i = home.i - 1; i <= home.i + 1; ++i) {
          if (!geometry.in_bounds(i, j)) continue;
          const std::size_t s = geometry.index(i, j);
          for (std::size_t k = buckets.start[s]; k < buckets.start[s + 1]; ++k) {
            const std::size_t b = buckets.items[k];
            if (b <= a) continue;
            Point& pa = cells[a].position;
            Point& pb = cells[b].position;
            double dx = pa.x - pb.x;
            double dy = pa.y - pb.y;
            double dist = std::hypot(dx, dy);
            if (dist >= contact) continue;
            const double overlap = contact - dist;
            worst = std::max(worst, overlap);
            if (dist < 1e-12) {
              const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
              dx = std::cos(theta);
              dy = std::sin(theta);
              dist = 1.0;
            }
            const double push = 0.5 * overlap / dist;
            pa = reflect_into_domain({pa.x + push * dx, pa.y + push * dy});
            pb = reflect_into_domain({pb.x - push * dx, pb.y - push * dy});
          }
          if (vessel[s]) {
            Point& pa = cells[a].position;
            const Point v = geometry.centre(i, j);
            double dx = pa.x - v.x;
            double dy = pa.y - v.y;
            double dist = std::hypot(dx, dy);
            if (dist >= contact) continue;
            const double overlap = contact - dist;
            worst = std::max(worst, overlap);
            if (dist < 1e-12) {
              const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
              dx = std::cos(theta);
              dy = std::sin(theta);
              dist = 1.0;
            }
            const double push = overlap / dist;
            pa = reflect_into_domain({pa.x + push * dx, pa.y + push * dy});
          }
        }
    }
    report.iterations = iter + 1;
    report.max_overlap = worst;
    if (worst <= allowed) {
      report.converged = true;
      return report;
    }
  }
  report.converged = false;
  return report;
}

}  // namespace hdc
