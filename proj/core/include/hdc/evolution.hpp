#pragma once

#include <utility>
#include <vector>

#include "hdc/rng.hpp"
#include "hdc/tumour.hpp"

namespace hdc {

enum class MutationMode { None, Spontaneous, DrugInduced };

const char* to_string(MutationMode mode);

struct MutationConfig {
  MutationMode mode = MutationMode::None;
  double mu = 0.0;                                  // per-division intensity
  std::pair<double, double> factor_range{0.7, 1.7};  // multiplicative step per trait
  std::pair<double, double> clamp_range{0.5, 4.0};   // multiples of the non-mutated value
  double enabled_from = 0.0;                        // mutations start with treatment
  double reference_drug = 2.0;                      // drug level at which DrugInduced uses mu as is
};

struct ResistanceConfig {
  double preexisting_fraction = 0.01;
  int th_multi = 3;
  bool exposure_enabled = false;
  double exposure_threshold = 5.0;
  double threshold_increment_factor = 1.1;
};

/// Marks round(fraction * N) uniformly chosen cells resistant (threshold
/// th_multi * th_death); all others get th_death. Returns the number marked.
std::size_t init_preexisting(std::vector<TumourCell>& cells, double fraction, int th_multi,
                             double th_death, Rng& rng);

/// Effective per-division intensity for the given local drug level.
double effective_intensity(const MutationConfig& cfg, double local_drug);

/// Consecutive random mutation of a fresh daughter. Returns true when a
/// mutation event fired (three traits rescaled and clamped, maturation recomputed).
bool maybe_mutate(TumourCell& daughter, const MutationConfig& cfg, double local_drug, double t, Rng& rng);

/// Applies one mutation event with the given factors (death threshold,
/// oxygen uptake, proliferation rate), clamping against the base values.
void apply_mutation(TumourCell& cell, const MutationConfig& cfg, double f_threshold, double f_uptake,
                    double f_proliferation);

/// Prolonged exposure raises the death threshold (capped at th_multi * th_death)
/// and restarts the exposure clock. Returns true when the threshold was raised.
bool exposure_resistance_update(TumourCell& cell, const ResistanceConfig& cfg, double th_death);

}  // namespace hdc
