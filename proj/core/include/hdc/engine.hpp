#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hdc/config.hpp"
#include "hdc/evolution.hpp"
#include "hdc/fields.hpp"
#include "hdc/rng.hpp"
#include "hdc/tumour.hpp"
#include "hdc/vasculature.hpp"

namespace hdc {

struct StatsRow {
  double t = 0.0;
  std::size_t N = 0;
  std::size_t Nn = 0;
  std::size_t Nh = 0;
  double mean_dam = 0.0;
  double std_dam = 0.0;
  std::size_t vessels = 0;
  std::size_t tips = 0;  // active
  std::size_t branches = 0;
  std::size_t anastomoses = 0;
  std::size_t self_loops = 0;

  // kept in memory for milestone detection; not part of the CSV row
  double min_threshold = 0.0;
  double std_threshold = 0.0;
  std::size_t resistant = 0;  // death threshold above th_death
  bool vascularized = false;
};

struct Milestones {
  std::optional<double> declining_point;
  std::optional<double> shifting_point;
  std::optional<double> extinction_time;
  std::optional<double> vascularization_time;
};

/// Scans a stats series. The declining point is the first t >= t_init with
/// N_t < N_{t - dt}; the shifting point the first non-empty step whose
/// survivors all exceed th_death with zero threshold spread.
Milestones detect_milestones(const std::vector<StatsRow>& stats, double t_init, double th_death);

enum class Outcome { Eliminated, Persistent, Running, NotApplicable };

const char* to_string(Outcome outcome);

enum class Phase {
  CellMechanics,
  RecordTrajectories,
  TafUpdate,
  TipMovement,  // includes the anastomosis check after every move
  TipAgeing,
  Branching,
  EndothelialProliferation,
  Uptake,
  DrugOxygenUpdate,
  CellFate,
  Statistics,
};

const char* to_string(Phase phase);

using PhaseOrder = std::vector<Phase>;

/// Macro-step phases in flowchart order.
PhaseOrder flowchart_order();

struct SimState {
  explicit SimState(const GridGeometry& g);

  double t = 0.0;
  ScalarField taf;
  ScalarField drug;
  ScalarField oxygen;
  std::vector<TumourCell> cells;  // sorted by id between macro-steps
  std::vector<TipCell> tips;
  AngiogenicNetwork network;
  std::vector<StatsRow> stats;
  std::vector<std::string> warnings;
  std::size_t substep_halvings = 0;  // tip draws split because P0 < 0 at the tip
  std::size_t divisions = 0;
  std::size_t mutations = 0;
  std::size_t apoptotic_deaths = 0;
  std::size_t damage_deaths = 0;
  std::size_t threshold_raises = 0;
};

class Simulation {
 public:
  /// Builds the initial state. Throws ConfigError when the config is invalid.
  explicit Simulation(SimConfig config);

  const SimConfig& config() const noexcept { return config_; }
  const SimState& state() const noexcept { return state_; }
  SimState& mutable_state() noexcept { return state_; }

  /// Replaces the phase order (used to check that ordering matters).
  void set_phase_order(PhaseOrder order) { order_ = std::move(order); }
  const PhaseOrder& phase_order() const noexcept { return order_; }

  /// Number of macro-steps from t = 0 to t_end.
  long total_steps() const;
  bool finished() const { return steps_taken_ >= total_steps(); }

  /// Executes one macro-step and advances t by dt.
  void step();

  /// Steps to t_end, calling `after_step` after each macro-step.
  void run(const std::function<void(const Simulation&)>& after_step = {});

  Milestones milestones() const;
  Outcome outcome() const;

  const MutationConfig& mutation() const noexcept { return mutation_; }
  const ResistanceConfig& resistance() const noexcept { return resistance_; }
  TargetRegion vascular_target() const;

 private:
  void initialise();
  void run_phase(Phase phase);

  void cell_mechanics();
  void taf_update();
  void tip_movement();
  void branching();
  void endothelial_extension();
  void uptake();
  void drug_oxygen_update();
  void cell_fate();
  void record_stats();

  void move_tip(std::size_t k, double h, bool forced);
  std::vector<Point> cell_positions() const;

  SimConfig config_;
  GridGeometry geometry_;
  SimState state_;
  Rng rng_;
  PhaseOrder order_;
  MutationConfig mutation_;
  ResistanceConfig resistance_;
  OxygenThresholds thresholds_;
  long steps_taken_ = 0;
};

}  // namespace hdc
