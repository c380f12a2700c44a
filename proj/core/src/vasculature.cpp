#include "hdc/vasculature.hpp"

#include <algorithm>
#include <cmath>

#include "hdc/errors.hpp"

namespace hdc {

const char* to_string(NetworkEventKind kind) {
  switch (kind) {
    case NetworkEventKind::Branch: return "branch";
    case NetworkEventKind::Anastomosis: return "anastomosis";
    case NetworkEventKind::SelfLoop: return "self_loop";
  }
  return "unknown";
}

AngiogenicNetwork::AngiogenicNetwork(const GridGeometry& geometry)
    : geometry_(geometry), owner_(geometry.size(), -1) {}

bool AngiogenicNetwork::add(NodeIndex square, const LineageId& owner) {
  if (!geometry_.in_bounds(square)) throw InvalidInput("vessel square outside the lattice");
  auto& slot = owner_[geometry_.index(square)];
  if (slot >= 0) return false;
  auto [it, inserted] = sprout_lookup_.try_emplace(owner, static_cast<std::int32_t>(sprout_ids_.size()));
  if (inserted) sprout_ids_.push_back(owner);
  slot = it->second;
  squares_.push_back(square);
  max_y_ = std::max(max_y_, geometry_.centre(square).y);
  return true;
}

const LineageId* AngiogenicNetwork::owner(NodeIndex square) const {
  const auto slot = owner_[geometry_.index(square)];
  return slot >= 0 ? &sprout_ids_[static_cast<std::size_t>(slot)] : nullptr;
}

std::vector<Point> AngiogenicNetwork::centres() const {
  std::vector<Point> out;
  out.reserve(squares_.size());
  for (const auto& sq : squares_) out.push_back(geometry_.centre(sq));
  return out;
}

void AngiogenicNetwork::record_positions(std::span<const TipCell> tips) {
  for (const auto& tip : tips) {
    if (!tip.active) continue;
    auto& path = trajectories_[tip.id];
    if (path.empty() || path.back() != tip.square) path.push_back(tip.square);
  }
}

namespace {

constexpr std::array<NodeIndex, 5> kStep{{{0, 0}, {-1, 0}, {1, 0}, {0, -1}, {0, 1}}};

NodeIndex offset(NodeIndex n, int dir) { return {n.i + kStep[dir].i, n.j + kStep[dir].j}; }

}  // namespace

std::array<double, 5> tip_move_probabilities(const TipCell& tip, const ScalarField& c, double dt,
                                             const ModelParameters& params, bool forced) {
  const auto& g = c.geometry;
  auto p = move_coefficients(c, tip.square.i, tip.square.j, dt, params).p;
  if (forced) p[Stay] = 0.0;
  for (int d = 1; d < 5; ++d)
    if (!g.in_bounds(offset(tip.square, d))) p[d] = 0.0;
  double total = 0.0;
  for (double v : p) total += v;
  if (total <= 0.0) {
    // Only reachable for a forced move whose walk is frozen: fall back to a
    // uniform choice among the in-domain directions.
    for (int d = 1; d < 5; ++d) p[d] = g.in_bounds(offset(tip.square, d)) ? 1.0 : 0.0;
    total = 0.0;
    for (double v : p) total += v;
  }
  for (double& v : p) v /= total;
  return p;
}

MoveOutcome tip_move(TipCell& tip, const ScalarField& c, double dt, const ModelParameters& params,
                     AngiogenicNetwork& network, Rng& rng, bool forced) {
  if (!tip.active) throw InvalidInput("tip_move on an inactive tip");
  const auto p = tip_move_probabilities(tip, c, dt, params, forced);
  const double u = rng.uniform();
  int dir = 4;
  double acc = 0.0;
  for (int d = 0; d < 5; ++d) {
    acc += p[d];
    if (u < acc) {
      dir = d;
      break;
    }
  }
  // Guard against round-off leaving u above the final cumulative sum.
  while (p[dir] == 0.0 && dir > 0) --dir;

  MoveOutcome out;
  out.from = tip.square;
  out.to = offset(tip.square, dir);
  out.moved = dir != Stay;
  if (out.moved) {
    out.entered_existing = !network.add(out.to, tip.id);
    out.reversal = tip.previous && *tip.previous == out.to;
    tip.previous = out.from;
    tip.square = out.to;
  }
  return out;
}

AnastomosisResult check_anastomosis(TipCell& tip, const MoveOutcome& move, AngiogenicNetwork& network,
                                    std::vector<TipCell>& tips, double t, Rng& rng) {
  if (!move.moved || !move.entered_existing || move.reversal) return AnastomosisResult::None;
  const LineageId* owner = network.owner(move.to);
  if (owner == nullptr) return AnastomosisResult::None;

  if (*owner == tip.id) {
    tip.active = false;
    ++network.self_loops;
    network.log({t, NetworkEventKind::SelfLoop, tip.id, move.to, tip.age});
    return AnastomosisResult::SelfLoop;
  }

  ++network.anastomoses;
  auto other = std::find_if(tips.begin(), tips.end(),
                            [&](const TipCell& o) { return o.active && o.id == *owner && &o != &tip; });
  if (other != tips.end() && rng.bernoulli(0.5)) {
    other->active = false;
    network.log({t, NetworkEventKind::Anastomosis, other->id, move.to, other->age});
    return AnastomosisResult::OtherTipStopped;
  }
  tip.active = false;
  network.log({t, NetworkEventKind::Anastomosis, tip.id, move.to, tip.age});
  return AnastomosisResult::ThisTipStopped;
}

double branch_intensity(const TipCell& tip, const ScalarField& c, double c_max, const ModelParameters& params) {
  if (!(c_max > 0.0)) return 0.0;
  return params.c_br * c[tip.square] / c_max;
}

std::vector<NodeIndex> free_orthogonal(NodeIndex square, const AngiogenicNetwork& network) {
  std::vector<NodeIndex> out;
  for (int d = 1; d < 5; ++d) {
    const NodeIndex n = offset(square, d);
    if (network.geometry().in_bounds(n) && !network.contains(n)) out.push_back(n);
  }
  return out;
}

std::optional<std::pair<TipCell, TipCell>> try_branch(const TipCell& tip, const ScalarField& c, double c_max,
                                                      const ModelParameters& params, double dt,
                                                      const AngiogenicNetwork& network, Rng& rng) {
  if (!tip.active || !(tip.age > params.psi)) return std::nullopt;
  const auto free = free_orthogonal(tip.square, network);
  if (free.empty()) return std::nullopt;
  const double lambda = branch_intensity(tip, c, c_max, params);
  if (!rng.bernoulli(1.0 - std::exp(-lambda * dt))) return std::nullopt;
  const NodeIndex target = free[rng.index(free.size())];
  return std::pair{TipCell{tip.id.child(1), tip.square, 0.0, true, tip.previous},
                   TipCell{tip.id.child(2), target, 0.0, true, tip.square}};
}

int endothelial_extensions_due(double t_prev, double t_now, double interval) {
  if (!(interval > 0.0)) throw InvalidInput("proliferation interval must be positive");
  constexpr double eps = 1e-9;
  const auto before = static_cast<long>(std::floor(t_prev / interval + eps));
  const auto after = static_cast<long>(std::floor(t_now / interval + eps));
  return static_cast<int>(std::max(0L, after - before));
}

int endothelial_proliferation(std::vector<TipCell>& tips, const ScalarField& c, double dt,
                              const ModelParameters& params, AngiogenicNetwork& network, double t, Rng& rng) {
  int extended = 0;
  for (std::size_t k = 0; k < tips.size(); ++k) {
    if (!tips[k].active) continue;
    const auto move = tip_move(tips[k], c, dt, params, network, rng, /*forced=*/true);
    ++extended;
    check_anastomosis(tips[k], move, network, tips, t, rng);
  }
  network.forced_extensions += static_cast<std::size_t>(extended);
  return extended;
}

bool TargetRegion::contains(Point p) const {
  if (kind == Kind::AboveY) return p.y >= y_min - 1e-12;
  return distance(p, centre) <= radius;
}

bool vascularization_complete(const AngiogenicNetwork& network, const TargetRegion& region) {
  const auto& g = network.geometry();
  return std::any_of(network.squares().begin(), network.squares().end(),
                     [&](const NodeIndex& sq) { return region.contains(g.centre(sq)); });
}

}  // namespace hdc
