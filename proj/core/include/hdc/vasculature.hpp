#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "hdc/fields.hpp"
#include "hdc/grid.hpp"
#include "hdc/lineage.hpp"
#include "hdc/params.hpp"
#include "hdc/rng.hpp"

namespace hdc {

struct TipCell {
  LineageId id;
  NodeIndex square;
  double age = 0.0;  // since the branch that created it
  bool active = true;
  std::optional<NodeIndex> previous;  // square occupied before the current one
};

enum class NetworkEventKind { Branch, Anastomosis, SelfLoop };

const char* to_string(NetworkEventKind kind);

struct NetworkEvent {
  double t = 0.0;
  NetworkEventKind kind = NetworkEventKind::Branch;
  LineageId tip;       // branching parent, or the tip that stopped growing
  NodeIndex square;    // where it happened
  double tip_age = 0;  // parent age at fire time (branch events)
};

// Vessel agents are the lattice squares swept by tip trajectories. Each
// square is owned by the sprout (tip id) whose trajectory first entered it.
class AngiogenicNetwork {
 public:
  explicit AngiogenicNetwork(const GridGeometry& geometry);

  const GridGeometry& geometry() const noexcept { return geometry_; }

  bool contains(NodeIndex square) const { return owner_[geometry_.index(square)] >= 0; }
  /// Adds the square if new; returns false when it was already a vessel.
  bool add(NodeIndex square, const LineageId& owner);
  const LineageId* owner(NodeIndex square) const;

  std::size_t size() const noexcept { return squares_.size(); }
  const std::vector<NodeIndex>& squares() const noexcept { return squares_; }
  std::vector<Point> centres() const;
  double max_y() const noexcept { return max_y_; }

  void record_positions(std::span<const TipCell> tips);
  const std::map<LineageId, std::vector<NodeIndex>>& trajectories() const noexcept { return trajectories_; }

  void log(const NetworkEvent& e) { events_.push_back(e); }
  const std::vector<NetworkEvent>& events() const noexcept { return events_; }

  std::size_t branches = 0;
  std::size_t anastomoses = 0;
  std::size_t self_loops = 0;
  std::size_t forced_extensions = 0;

 private:
  GridGeometry geometry_;
  std::vector<std::int32_t> owner_;
  std::vector<LineageId> sprout_ids_;
  std::map<LineageId, std::int32_t> sprout_lookup_;
  std::vector<NodeIndex> squares_;
  std::map<LineageId, std::vector<NodeIndex>> trajectories_;
  std::vector<NetworkEvent> events_;
  double max_y_ = 0.0;
};

struct MoveOutcome {
  NodeIndex from;
  NodeIndex to;
  bool moved = false;
  bool entered_existing = false;  // `to` was already a vessel before this move
  bool reversal = false;          // stepped straight back into the square it came from
};

/// Move probabilities at the tip's square with off-domain directions removed
/// (and, for a forced move, the stay option removed), renormalised.
std::array<double, 5> tip_move_probabilities(const TipCell& tip, const ScalarField& c, double dt,
                                             const ModelParameters& params, bool forced);

/// One draw of the discretised endothelial walk; the entered square joins the network.
MoveOutcome tip_move(TipCell& tip, const ScalarField& c, double dt, const ModelParameters& params,
                     AngiogenicNetwork& network, Rng& rng, bool forced = false);

enum class AnastomosisResult { None, SelfLoop, ThisTipStopped, OtherTipStopped };

/// Resolves a move into an existing vessel square. One of the two sprouts keeps
/// growing, chosen by a fair coin when the other sprout still has a living tip.
/// An immediate reversal onto the tip's own trail is not an encounter.
AnastomosisResult check_anastomosis(TipCell& tip, const MoveOutcome& move, AngiogenicNetwork& network,
                                    std::vector<TipCell>& tips, double t, Rng& rng);

/// Branching intensity c_br * c(tip) / max c.
double branch_intensity(const TipCell& tip, const ScalarField& c, double c_max, const ModelParameters& params);

/// Orthogonal neighbours that are inside the domain and not yet vessels.
std::vector<NodeIndex> free_orthogonal(NodeIndex square, const AngiogenicNetwork& network);

/// Returns the two replacement tips when the parent branches.
std::optional<std::pair<TipCell, TipCell>> try_branch(const TipCell& tip, const ScalarField& c, double c_max,
                                                      const ModelParameters& params, double dt,
                                                      const AngiogenicNetwork& network, Rng& rng);

/// Number of proliferation boundaries k * interval (k >= 1) in (t_prev, t_now].
int endothelial_extensions_due(double t_prev, double t_now, double interval);

/// Forces one extra, non-stationary move of every active tip (sprout elongation).
/// Returns the number of tips extended.
int endothelial_proliferation(std::vector<TipCell>& tips, const ScalarField& c, double dt,
                              const ModelParameters& params, AngiogenicNetwork& network, double t, Rng& rng);

struct TargetRegion {
  enum class Kind { AboveY, Disc } kind = Kind::AboveY;
  double y_min = 0.99;
  Point centre{0.5, 0.5};
  double radius = 0.0;

  static TargetRegion above(double y) { return {Kind::AboveY, y, {}, 0.0}; }
  static TargetRegion disc(Point c, double r) { return {Kind::Disc, 0.0, c, r}; }
  bool contains(Point p) const;
};

bool vascularization_complete(const AngiogenicNetwork& network, const TargetRegion& region);

}  // namespace hdc
