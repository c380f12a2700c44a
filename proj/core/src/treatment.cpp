#include "hdc/treatment.hpp"

#include <algorithm>
#include <cmath>

#include "hdc/errors.hpp"

namespace hdc {

TreatmentSchedule TreatmentSchedule::continuous(double rate, double t_init) {
  TreatmentSchedule s;
  s.kind = TreatmentKind::Continuous;
  s.t_init = t_init;
  s.d_c = rate;
  s.d_p = 0.0;
  s.t_on = 50.0;
  s.t_off = 0.0;
  return s;
}

TreatmentSchedule TreatmentSchedule::pulsed(double rate, double t_on, double t_off, double t_init) {
  TreatmentSchedule s;
  s.kind = TreatmentKind::Pulsed;
  s.t_init = t_init;
  s.d_c = 0.0;
  s.d_p = rate;
  s.t_on = t_on;
  s.t_off = t_off;
  s.period_length = t_on + t_off;
  return s;
}

TreatmentSchedule TreatmentSchedule::none() { return continuous(0.0, 0.0); }

void TreatmentSchedule::validate() const {
  if (!(d_c >= 0.0) || !(d_p >= 0.0)) throw InvalidInput("treatment rates must be non-negative");
  if (!(t_on > 0.0)) throw InvalidInput("treatment t_on must be positive");
  if (!(t_off >= 0.0)) throw InvalidInput("treatment t_off must be non-negative");
  if (!(t_init >= 0.0)) throw InvalidInput("treatment t_init must be non-negative");
}

double supply_rate(const TreatmentSchedule& s, double t) {
  if (t < s.t_init) return 0.0;
  if (s.kind == TreatmentKind::Continuous) return s.d_c;
  const double period = s.t_on + s.t_off;
  const double phase = std::fmod(t - s.t_init, period);
  return phase <= s.t_on ? s.d_p : 0.0;
}

double total_dose(const TreatmentSchedule& s, double t0, double t1) {
  if (t1 <= t0) return 0.0;
  const double a = std::max(t0, s.t_init);
  if (a >= t1) return 0.0;
  if (s.kind == TreatmentKind::Continuous) return s.d_c * (t1 - a);

  const double period = s.t_on + s.t_off;
  double on_time = 0.0;
  const auto first = static_cast<long>(std::floor((a - s.t_init) / period));
  for (long i = std::max(0L, first); s.t_init + i * period < t1; ++i) {
    const double start = s.t_init + i * period;
    on_time += std::max(0.0, std::min(t1, start + s.t_on) - std::max(a, start));
  }
  return s.d_p * on_time;
}

const std::vector<StrategyPreset>& strategy_presets() {
  static const std::vector<StrategyPreset> presets = {
      {"strategy1", TreatmentSchedule::pulsed(10.0, 10.0, 40.0)},
      {"strategy2", TreatmentSchedule::pulsed(5.0, 20.0, 30.0)},
      {"strategy3", TreatmentSchedule::pulsed(10.0 / 3.0, 30.0, 20.0)},
      {"strategy4", TreatmentSchedule::pulsed(5.0 / 2.0, 40.0, 10.0)},
      {"strategy5", TreatmentSchedule::continuous(2.0)},
      {"strategy6", TreatmentSchedule::continuous(5.0)},
      {"strategy7", TreatmentSchedule::continuous(10.0)},
  };
  return presets;
}

std::optional<TreatmentSchedule> find_strategy(std::string_view name, double t_init) {
  for (const auto& p : strategy_presets())
    if (p.name == name) {
      auto s = p.schedule;
      s.t_init = t_init;
      return s;
    }
  return std::nullopt;
}

}  // namespace hdc
