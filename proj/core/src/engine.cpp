#include "hdc/engine.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hdc/errors.hpp"

namespace hdc {

const char* to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::Eliminated: return "eliminated";
    case Outcome::Persistent: return "persistent";
    case Outcome::Running: return "running";
    case Outcome::NotApplicable: return "none";
  }
  return "?";
}

const char* to_string(Phase phase) {
  switch (phase) {
    case Phase::CellMechanics: return "cell_mechanics";
    case Phase::RecordTrajectories: return "record_trajectories";
    case Phase::TafUpdate: return "taf_update";
    case Phase::TipMovement: return "tip_movement";
    case Phase::TipAgeing: return "tip_ageing";
    case Phase::Branching: return "branching";
    case Phase::EndothelialProliferation: return "endothelial_proliferation";
    case Phase::Uptake: return "uptake";
    case Phase::DrugOxygenUpdate: return "drug_oxygen_update";
    case Phase::CellFate: return "cell_fate";
    case Phase::Statistics: return "statistics";
  }
  return "?";
}

PhaseOrder flowchart_order() {
  return {Phase::CellMechanics, Phase::RecordTrajectories, Phase::TafUpdate,   Phase::TipMovement,
          Phase::TipAgeing,     Phase::Branching,          Phase::EndothelialProliferation,
          Phase::Uptake,        Phase::DrugOxygenUpdate,   Phase::CellFate,    Phase::Statistics};
}

Milestones detect_milestones(const std::vector<StatsRow>& stats, double t_init, double th_death) {
  Milestones m;
  constexpr double kTimeEps = 1e-9;
  for (std::size_t k = 0; k < stats.size(); ++k) {
    const auto& row = stats[k];
    if (k > 0 && !m.declining_point && row.t >= t_init - kTimeEps && row.N < stats[k - 1].N)
      m.declining_point = row.t;
    if (!m.shifting_point && row.N > 0 && row.resistant == row.N && row.min_threshold > th_death &&
        row.std_threshold <= 1e-12)
      m.shifting_point = row.t;
    if (k > 0 && !m.extinction_time && row.N == 0 && stats[k - 1].N > 0) m.extinction_time = row.t;
    if (!m.vascularization_time && row.vascularized) m.vascularization_time = row.t;
  }
  return m;
}

SimState::SimState(const GridGeometry& g)
    : taf(g, FieldKind::Taf), drug(g, FieldKind::Drug), oxygen(g, FieldKind::Oxygen), network(g) {}

Simulation::Simulation(SimConfig config)
    : config_(std::move(config)),
      geometry_([this] {
        if (auto issues = validate(config_); !issues.empty()) throw ConfigError(std::move(issues));
        return config_.geometry();
      }()),
      state_(geometry_),
      rng_(config_.seed),
      order_(flowchart_order()) {
  config_.schedule.validate();
  mutation_.mode = config_.scenario == Scenario::Spontaneous   ? MutationMode::Spontaneous
                   : config_.scenario == Scenario::DrugInduced ? MutationMode::DrugInduced
                                                               : MutationMode::None;
  mutation_.mu = config_.mu;
  mutation_.enabled_from = config_.schedule.t_init;
  mutation_.reference_drug = config_.d_ref;

  resistance_.preexisting_fraction = config_.preexisting_fraction;
  resistance_.th_multi = config_.model.th_multi;
  resistance_.exposure_enabled = config_.exposure_resistance;
  resistance_.exposure_threshold = config_.exposure_threshold;
  resistance_.threshold_increment_factor = config_.exposure_increment;

  thresholds_ = {config_.model.o_apop, config_.model.o_hyp};
  initialise();
}

void Simulation::initialise() {
  const auto& m = config_.model;
  state_.taf = init_linear_taf(config_.taf_k, geometry_);
  state_.oxygen = ScalarField(geometry_, FieldKind::Oxygen, config_.initial_oxygen);

  for (int i = 1; i <= config_.initial_tips; ++i) {
    const Point p{(2.0 * i - 1.0) / (2.0 * config_.initial_tips), config_.tip_start_y};
    TipCell tip{LineageId(i), geometry_.square_of(p), 0.0, true, std::nullopt};
    state_.network.add(tip.square, tip.id);
    state_.tips.push_back(tip);
  }

  if (config_.has_tumour() && config_.N_0 > 0) {
    std::vector<NodeIndex> disc;
    for (int j = 0; j < geometry_.ny(); ++j)
      for (int i = 0; i < geometry_.nx(); ++i)
        if (distance(geometry_.centre(i, j), config_.tumour_centre) <= config_.tumour_radius &&
            !state_.network.contains({i, j}))
          disc.push_back({i, j});
    if (disc.size() < static_cast<std::size_t>(config_.N_0))
      throw InvalidInput("initial tumour disc holds fewer free squares than N_0");
    for (int k = 0; k < config_.N_0; ++k) {
      std::swap(disc[k], disc[k + rng_.index(disc.size() - k)]);
      const double maturation = rng_.uniform(9.0 / 16.0, 11.0 / 16.0);
      const double age = rng_.uniform(0.0, maturation);
      auto cell = make_founder(k + 1, geometry_.centre(disc[k]), maturation, age, m.th_death, m.rho_o);
      cell.oxygen = sample_bilinear(state_.oxygen, cell.position);
      cell.state = cell.oxygen <= m.o_hyp ? OxygenState::Hypoxic : OxygenState::Normoxic;
      state_.cells.push_back(cell);
    }
    if (config_.preexisting_fraction > 0.0)
      init_preexisting(state_.cells, config_.preexisting_fraction, m.th_multi, m.th_death, rng_);
  }

  state_.network.record_positions(state_.tips);
  record_stats();
}

long Simulation::total_steps() const {
  return static_cast<long>(std::floor(config_.t_end / config_.dt + 1e-9));
}

void Simulation::step() {
  for (Phase p : order_) run_phase(p);
  ++steps_taken_;
  state_.t = steps_taken_ * config_.dt;
  if (std::find(order_.begin(), order_.end(), Phase::Statistics) == order_.end()) record_stats();
  else state_.stats.back().t = state_.t;
}

void Simulation::run(const std::function<void(const Simulation&)>& after_step) {
  while (!finished()) {
    step();
    if (after_step) after_step(*this);
  }
}

void Simulation::run_phase(Phase phase) {
  switch (phase) {
    case Phase::CellMechanics: cell_mechanics(); break;
    case Phase::RecordTrajectories: state_.network.record_positions(state_.tips); break;
    case Phase::TafUpdate: taf_update(); break;
    case Phase::TipMovement: tip_movement(); break;
    case Phase::TipAgeing:
      for (auto& tip : state_.tips)
        if (tip.active) tip.age += config_.dt;
      break;
    case Phase::Branching: branching(); break;
    case Phase::EndothelialProliferation: endothelial_extension(); break;
    case Phase::Uptake: uptake(); break;
    case Phase::DrugOxygenUpdate: drug_oxygen_update(); break;
    case Phase::CellFate: cell_fate(); break;
    case Phase::Statistics: record_stats(); break;
  }
}

std::vector<Point> Simulation::cell_positions() const {
  std::vector<Point> out;
  out.reserve(state_.cells.size());
  for (const auto& c : state_.cells) out.push_back(c.position);
  return out;
}

void Simulation::cell_mechanics() {
  if (state_.cells.empty()) return;
  for (auto& cell : state_.cells) brownian_step(cell, config_.epsilon1, config_.dt, rng_);
  const RelaxSettings settings{config_.model.R_c, config_.relax_tol, config_.relax_max_iters};
  const auto report = relax_overlaps(state_.cells, state_.network.squares(), geometry_, settings, rng_);
  if (!report.converged) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "t=%.4g: overlap relaxation stopped after %d iterations (max overlap %.3g)",
                  state_.t, report.iterations, report.max_overlap);
    state_.warnings.emplace_back(buf);
  }
}

void Simulation::taf_update() {
  if (config_.freeze_taf) return;
  std::vector<Point> hypoxic;
  for (const auto& c : state_.cells)
    if (c.state == OxygenState::Hypoxic) hypoxic.push_back(c.position);
  state_.taf = step_taf(state_.taf, hypoxic, state_.network.centres(), config_.model, config_.dt);
}

void Simulation::move_tip(std::size_t k, double h, bool forced) {
  constexpr double kMinSubstep = 1e-9;
  const double t_event = state_.t + config_.dt;
  auto& tips = state_.tips;
  try {
    const auto move = tip_move(tips[k], state_.taf, h, config_.model, state_.network, rng_, forced);
    check_anastomosis(tips[k], move, state_.network, tips, t_event, rng_);
  } catch (const StepSizeViolation&) {
    if (h / 2.0 < kMinSubstep) throw;
    ++state_.substep_halvings;
    if (forced) {
      // A forced extension is a single move; only the coefficient substep shrinks.
      move_tip(k, h / 2.0, true);
      return;
    }
    move_tip(k, h / 2.0, false);
    if (tips[k].active) move_tip(k, h / 2.0, false);
  }
}

void Simulation::tip_movement() {
  const double h = config_.tip_dt;
  const long substeps = std::max(1L, std::lround(config_.dt / h));
  for (long s = 0; s < substeps; ++s)
    for (std::size_t k = 0; k < state_.tips.size(); ++k)
      if (state_.tips[k].active) move_tip(k, h, false);
}

void Simulation::branching() {
  auto& tips = state_.tips;
  auto& net = state_.network;
  const double c_max = state_.taf.max();
  const std::size_t n = tips.size();
  for (std::size_t k = 0; k < n; ++k) {
    if (!tips[k].active) continue;
    auto split = try_branch(tips[k], state_.taf, c_max, config_.model, config_.dt, net, rng_);
    if (!split) continue;
    net.log({state_.t + config_.dt, NetworkEventKind::Branch, tips[k].id, tips[k].square, tips[k].age});
    ++net.branches;
    net.add(split->second.square, split->second.id);
    tips[k] = split->first;
    tips.push_back(split->second);
  }
}

void Simulation::endothelial_extension() {
  const int due = endothelial_extensions_due(state_.t, state_.t + config_.dt, config_.endothelial_interval);
  for (int e = 0; e < due; ++e)
    for (std::size_t k = 0; k < state_.tips.size(); ++k) {
      if (!state_.tips[k].active) continue;
      move_tip(k, config_.tip_dt, true);
      ++state_.network.forced_extensions;
    }
}

void Simulation::uptake() {
  for (auto& cell : state_.cells) sense(cell, state_.oxygen, state_.drug, config_.dt, config_.d_floor);
}

void Simulation::drug_oxygen_update() {
  const auto vessels = state_.network.centres();
  const auto positions = cell_positions();
  state_.drug = step_drug(state_.drug, positions, vessels, supply_rate(config_.schedule, state_.t),
                          config_.model, config_.dt);

  std::vector<UptakeSite> sites;
  sites.reserve(state_.cells.size());
  for (const auto& c : state_.cells) {
    const double q = c.state == OxygenState::Hypoxic ? config_.q_h : 1.0;
    sites.push_back({c.position, q * c.traits.oxygen_uptake});
  }
  state_.oxygen = step_oxygen(state_.oxygen, sites, vessels, config_.model, config_.dt);
}

void Simulation::cell_fate() {
  auto& cells = state_.cells;
  if (cells.empty()) return;
  const auto& m = config_.model;
  const double dt = config_.dt;
  const double t_now = state_.t;

  cells.reserve(2 * cells.size());
  OccupancyIndex occ = build_occupancy(geometry_, cells, state_.network.squares());
  std::vector<std::uint8_t> removed(cells.size(), 0);
  std::vector<std::uint8_t> damage_dead(cells.size(), 0);

  // Damage, resistance and the tolerance check for one live cell.
  auto finish = [&](std::size_t idx) {
    auto& c = cells[idx];
    update_damage(c, sample_bilinear(state_.drug, c.position), m.p_r, dt);
    if (resistance_.exposure_enabled && exposure_resistance_update(c, resistance_, m.th_death))
      ++state_.threshold_raises;
    if (check_death(c)) damage_dead[idx] = 1;
  };

  const std::size_t n0 = cells.size();
  for (std::size_t idx = 0; idx < n0; ++idx) {
    auto& cell = cells[idx];
    const auto cls = classify(cell.oxygen, thresholds_);
    if (cls == OxygenClass::Apoptosis) {
      occ.remove_cell(idx, cell.position);
      removed[idx] = 1;
      ++state_.apoptotic_deaths;
      continue;
    }
    cell.state = cls == OxygenClass::Hypoxic ? OxygenState::Hypoxic : OxygenState::Normoxic;
    advance_age(cell, dt);

    if (cell.state == OxygenState::Normoxic && cell.age >= cell.maturation) {
      const int density = occ.count_within(cell.position, config_.R_F, cells);
      if (auto div = try_divide(cell, occ, density, m.F_max, state_.oxygen, m.o_hyp, rng_)) {
        for (TumourCell* d : {&div->first, &div->second})
          if (maybe_mutate(*d, mutation_, sample_bilinear(state_.drug, d->position), t_now, rng_))
            ++state_.mutations;
        ++state_.divisions;
        const Point mother_pos = cell.position;
        occ.remove_cell(idx, mother_pos);
        cells[idx] = std::move(div->first);
        occ.add_cell(idx, cells[idx].position);
        cells.push_back(std::move(div->second));
        removed.push_back(0);
        damage_dead.push_back(0);
        const std::size_t second = cells.size() - 1;
        occ.add_cell(second, cells[second].position);
        finish(idx);
        finish(second);
        continue;
      }
    }
    finish(idx);
  }

  std::vector<TumourCell> survivors;
  survivors.reserve(cells.size());
  for (std::size_t idx = 0; idx < cells.size(); ++idx) {
    if (removed[idx]) continue;
    if (damage_dead[idx]) {
      ++state_.damage_deaths;
      continue;
    }
    survivors.push_back(std::move(cells[idx]));
  }
  std::sort(survivors.begin(), survivors.end(),
            [](const TumourCell& a, const TumourCell& b) { return a.id < b.id; });
  cells = std::move(survivors);
}

void Simulation::record_stats() {
  StatsRow row;
  row.t = state_.t;
  const auto& cells = state_.cells;
  row.N = cells.size();
  for (const auto& c : cells) (c.state == OxygenState::Normoxic ? row.Nn : row.Nh) += 1;
  if (!cells.empty()) {
    const double n = static_cast<double>(cells.size());
    double sum_dam = 0.0, sum_thr = 0.0;
    row.min_threshold = cells.front().traits.death_threshold;
    for (const auto& c : cells) {
      sum_dam += c.damage;
      sum_thr += c.traits.death_threshold;
      row.min_threshold = std::min(row.min_threshold, c.traits.death_threshold);
      if (c.traits.death_threshold > config_.model.th_death) ++row.resistant;
    }
    row.mean_dam = sum_dam / n;
    const double mean_thr = sum_thr / n;
    double var_dam = 0.0, var_thr = 0.0;
    for (const auto& c : cells) {
      var_dam += (c.damage - row.mean_dam) * (c.damage - row.mean_dam);
      var_thr += (c.traits.death_threshold - mean_thr) * (c.traits.death_threshold - mean_thr);
    }
    row.std_dam = std::sqrt(var_dam / n);
    row.std_threshold = std::sqrt(var_thr / n);
  }
  const auto& net = state_.network;
  row.vessels = net.size();
  row.tips = static_cast<std::size_t>(
      std::count_if(state_.tips.begin(), state_.tips.end(), [](const TipCell& t) { return t.active; }));
  row.branches = net.branches;
  row.anastomoses = net.anastomoses;
  row.self_loops = net.self_loops;
  row.vascularized = vascularization_complete(net, vascular_target());
  if (row.N != row.Nn + row.Nh) throw std::logic_error("population partition broken");
  state_.stats.push_back(row);
}

TargetRegion Simulation::vascular_target() const {
  if (!config_.has_tumour()) return TargetRegion::above(1.0 - 2.0 * config_.model.R_c);
  return TargetRegion::disc(config_.tumour_centre, config_.tumour_radius);
}

Milestones Simulation::milestones() const {
  return detect_milestones(state_.stats, config_.schedule.t_init, config_.model.th_death);
}

Outcome Simulation::outcome() const {
  if (!config_.has_tumour()) return Outcome::NotApplicable;
  if (state_.cells.empty()) return Outcome::Eliminated;
  return finished() ? Outcome::Persistent : Outcome::Running;
}

}  // namespace hdc
