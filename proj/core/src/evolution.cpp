#include "hdc/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "hdc/errors.hpp"

namespace hdc {

const char* to_string(MutationMode mode) {
  switch (mode) {
    case MutationMode::None: return "none";
    case MutationMode::Spontaneous: return "spontaneous";
    case MutationMode::DrugInduced: return "drug_induced";
  }
  return "unknown";
}

std::size_t init_preexisting(std::vector<TumourCell>& cells, double fraction, int th_multi,
                             double th_death, Rng& rng) {
  if (!(fraction >= 0.0 && fraction <= 1.0)) throw InvalidInput("resistant fraction must lie in [0, 1]");
  if (th_multi < 1) throw InvalidInput("th_multi must be >= 1");
  const auto resistant = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(cells.size())));

  std::vector<std::size_t> order(cells.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // Partial Fisher-Yates: the first `resistant` slots are a uniform sample.
  for (std::size_t k = 0; k < resistant; ++k) std::swap(order[k], order[k + rng.index(order.size() - k)]);

  for (auto& c : cells) c.traits.death_threshold = c.base.death_threshold = th_death;
  for (std::size_t k = 0; k < resistant; ++k) {
    auto& c = cells[order[k]];
    c.traits.death_threshold = c.base.death_threshold = th_multi * th_death;
  }
  return resistant;
}

double effective_intensity(const MutationConfig& cfg, double local_drug) {
  switch (cfg.mode) {
    case MutationMode::None: return 0.0;
    case MutationMode::Spontaneous: return cfg.mu;
    case MutationMode::DrugInduced: return cfg.mu * std::max(local_drug, 0.0) / cfg.reference_drug;
  }
  return 0.0;
}

void apply_mutation(TumourCell& cell, const MutationConfig& cfg, double f_threshold, double f_uptake,
                    double f_proliferation) {
  const auto [lo, hi] = cfg.clamp_range;
  auto step = [&](double value, double base, double factor) {
    return std::clamp(value * factor, lo * base, hi * base);
  };
  cell.traits.death_threshold = step(cell.traits.death_threshold, cell.base.death_threshold, f_threshold);
  cell.traits.oxygen_uptake = step(cell.traits.oxygen_uptake, cell.base.oxygen_uptake, f_uptake);
  cell.traits.proliferation_rate =
      step(cell.traits.proliferation_rate, cell.base.proliferation_rate, f_proliferation);
  cell.maturation = std::numbers::ln2 / cell.traits.proliferation_rate;
}

bool maybe_mutate(TumourCell& daughter, const MutationConfig& cfg, double local_drug, double t, Rng& rng) {
  if (cfg.mode == MutationMode::None || t < cfg.enabled_from) return false;
  const double intensity = effective_intensity(cfg, local_drug);
  if (intensity <= 0.0) return false;
  if (!rng.bernoulli(1.0 - std::exp(-intensity))) return false;
  const auto [lo, hi] = cfg.factor_range;
  const double f_threshold = rng.uniform(lo, hi);
  const double f_uptake = rng.uniform(lo, hi);
  const double f_proliferation = rng.uniform(lo, hi);
  apply_mutation(daughter, cfg, f_threshold, f_uptake, f_proliferation);
  return true;
}

bool exposure_resistance_update(TumourCell& cell, const ResistanceConfig& cfg, double th_death) {
  if (!cfg.exposure_enabled || cell.exposure_time <= cfg.exposure_threshold) return false;
  const double cap = cfg.th_multi * th_death;
  const double before = cell.traits.death_threshold;
  cell.traits.death_threshold = std::min(before * cfg.threshold_increment_factor, std::max(cap, before));
  cell.exposure_time = 0.0;
  return cell.traits.death_threshold > before;
}

}  // namespace hdc
