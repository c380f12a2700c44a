#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hdc/grid.hpp"
#include "hdc/params.hpp"
#include "hdc/treatment.hpp"

namespace hdc {

enum class Scenario { AngioOnly, NoResistance, PreExisting, Spontaneous, DrugInduced };

const char* to_string(Scenario s);

struct SimConfig {
  ModelParameters model;

  Scenario scenario = Scenario::NoResistance;
  double mu = 0.0;
  std::string treatment = "strategy5";  // strategy1..7, continuous, pulsed or none
  TreatmentSchedule schedule = TreatmentSchedule::continuous(2.0);

  std::uint64_t seed = 1;
  double t_end = 50.0;
  double dt = 0.1;
  double tip_dt = 0.001;
  double snapshot_interval = 1.0;  // 0 writes only the initial and final snapshots

  // tumour set-up and mechanics
  double R_F = 0.02;  // crowding sensing radius, 4 R_c
  double epsilon1 = 0.001;
  double q_h = 0.5;  // hypoxic oxygen-uptake discount
  int N_0 = 50;
  Point tumour_centre{0.5, 0.75};
  double tumour_radius = 0.05;
  double relax_tol = 0.05;
  int relax_max_iters = 100;

  // resistance
  double preexisting_fraction = 0.0;
  bool exposure_resistance = false;
  double exposure_threshold = 5.0;
  double exposure_increment = 1.1;
  double d_floor = 1e-3;
  double d_ref = 2.0;

  // vasculature set-up
  double taf_k = 5.0;
  double initial_oxygen = 1.0;
  int initial_tips = 6;
  double tip_start_y = 0.05;
  double endothelial_interval = 1.125;
  bool freeze_taf = false;  // keep c = taf_k * y (vascularization benchmark)

  GridGeometry geometry() const { return GridGeometry::from_cell_radius(model.R_c); }
  bool has_tumour() const { return scenario != Scenario::AngioOnly; }

  friend bool operator==(const SimConfig&, const SimConfig&) = default;
};

struct ConfigIssue {
  int line = 0;  // 0: not tied to a line (validation of a default)
  std::string message;
};

class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<ConfigIssue> issues);
  const std::vector<ConfigIssue>& issues() const noexcept { return issues_; }

 private:
  std::vector<ConfigIssue> issues_;
};

/// Scenario defaults applied to a default-constructed config.
SimConfig scenario_defaults(Scenario scenario);

/// key=value lines, '#' comments. Unknown keys, malformed values and invariant
/// violations are collected and thrown together as one ConfigError.
SimConfig parse_config(std::string_view text);

/// Canonical text form; parse_config(emit_config(c)) == c.
std::string emit_config(const SimConfig& config);

/// All invariant violations of an assembled config.
std::vector<ConfigIssue> validate(const SimConfig& config);

/// Names of every accepted key, in emission order.
std::vector<std::string> config_keys();

}  // namespace hdc
