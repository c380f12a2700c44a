#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hdc {

enum class TreatmentKind { Continuous, Pulsed };

// Drug supply S_d(t) at vessel sites. A pulsed schedule delivers d_p during
// t_init + i (t_on + t_off) + [0, t_on] and nothing in the rest of each period.
struct TreatmentSchedule {
  TreatmentKind kind = TreatmentKind::Continuous;
  double t_init = 14.0;
  double d_c = 2.0;  // continuous rate
  double d_p = 0.0;  // pulsed rate
  double t_on = 50.0;
  double t_off = 0.0;
  double period_length = 50.0;

  static TreatmentSchedule continuous(double rate, double t_init = 14.0);
  static TreatmentSchedule pulsed(double rate, double t_on, double t_off, double t_init = 14.0);
  static TreatmentSchedule none();

  /// Throws InvalidInput on negative rates, t_on <= 0 or t_off < 0.
  void validate() const;

  friend bool operator==(const TreatmentSchedule&, const TreatmentSchedule&) = default;
};

double supply_rate(const TreatmentSchedule& schedule, double t);

/// Exact integral of supply_rate over [t0, t1].
double total_dose(const TreatmentSchedule& schedule, double t0, double t1);

struct StrategyPreset {
  std::string name;  // "strategy1".."strategy7"
  TreatmentSchedule schedule;
};

/// The seven treatment strategies (t_on, t_off, S_d): (10, 40, 10), (20, 30, 5),
/// (30, 20, 10/3), (40, 10, 5/2) pulsed; S_d = 2, 5, 10 continuous.
const std::vector<StrategyPreset>& strategy_presets();

std::optional<TreatmentSchedule> find_strategy(std::string_view name, double t_init = 14.0);

}  // namespace hdc
