#include "hdc/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace hdc {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string optional_time(const std::optional<double>& t) { return t ? fmt(*t) : "none"; }

std::string snapshot_dir_name(double t) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "snapshots/t%09.3f", t);
  return buf;
}

}  // namespace

RunSummary summarize(const Simulation& sim) {
  RunSummary s;
  const auto& st = sim.state();
  s.seed = sim.config().seed;
  s.milestones = sim.milestones();
  s.outcome = sim.outcome();
  s.t_final = st.t;
  s.final_population = st.cells.size();
  s.vessels = st.network.size();
  s.warnings = st.warnings.size();
  return s;
}

void write_stats_csv(std::ostream& out, std::span<const StatsRow> stats) {
  out << "t,N,Nn,Nh,mean_dam,std_dam,vessels,tips,branches,anastomoses,self_loops\n";
  for (const auto& r : stats)
    out << fmt(r.t) << ',' << r.N << ',' << r.Nn << ',' << r.Nh << ',' << fmt(r.mean_dam) << ','
        << fmt(r.std_dam) << ',' << r.vessels << ',' << r.tips << ',' << r.branches << ',' << r.anastomoses
        << ',' << r.self_loops << '\n';
}

void write_cells_csv(std::ostream& out, std::span<const TumourCell> cells) {
  out << "id,x,y,oxygen,drug,damage,threshold,age,state,uptake_rate,prolif_rate\n";
  for (const auto& c : cells)
    out << c.id.str() << ',' << fmt(c.position.x) << ',' << fmt(c.position.y) << ',' << fmt(c.oxygen) << ','
        << fmt(c.drug) << ',' << fmt(c.damage) << ',' << fmt(c.traits.death_threshold) << ',' << fmt(c.age)
        << ',' << to_string(c.state) << ',' << fmt(c.traits.oxygen_uptake) << ','
        << fmt(c.traits.proliferation_rate) << '\n';
}

void write_network_csv(std::ostream& out, const AngiogenicNetwork& network) {
  out << "square_i,square_j,owner_tip_id\n";
  for (const auto& sq : network.squares()) out << sq.i << ',' << sq.j << ',' << network.owner(sq)->str() << '\n';
}

void write_tips_csv(std::ostream& out, std::span<const TipCell> tips, const GridGeometry& geometry) {
  out << "id,x,y,age,active\n";
  for (const auto& tip : tips) {
    const Point p = geometry.centre(tip.square);
    out << tip.id.str() << ',' << fmt(p.x) << ',' << fmt(p.y) << ',' << fmt(tip.age) << ','
        << (tip.active ? 1 : 0) << '\n';
  }
}

void write_events_csv(std::ostream& out, std::span<const NetworkEvent> events) {
  out << "t,event,tip_id\n";
  for (const auto& e : events) out << fmt(e.t) << ',' << to_string(e.kind) << ',' << e.tip.str() << '\n';
}

void write_histogram_csv(std::ostream& out, std::span<const double> values, double lo, double hi, int bins) {
  if (!(hi > lo) || bins < 1) throw std::invalid_argument("histogram needs hi > lo and at least one bin");
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  const double width = (hi - lo) / bins;
  for (double v : values) {
    const auto b = static_cast<long>(std::floor((v - lo) / width));
    ++counts[static_cast<std::size_t>(std::clamp(b, 0L, static_cast<long>(bins) - 1))];
  }
  out << "bin_lo,bin_hi,count\n";
  for (int b = 0; b < bins; ++b)
    out << fmt(lo + b * width) << ',' << fmt(lo + (b + 1) * width) << ',' << counts[static_cast<std::size_t>(b)]
        << '\n';
}

void write_milestones(std::ostream& out, const RunSummary& s) {
  out << "declining_point=" << optional_time(s.milestones.declining_point) << '\n'
      << "shifting_point=" << optional_time(s.milestones.shifting_point) << '\n'
      << "extinction_time=" << optional_time(s.milestones.extinction_time) << '\n'
      << "vascularization_time=" << optional_time(s.milestones.vascularization_time) << '\n'
      << "outcome=" << to_string(s.outcome) << '\n'
      << "seed=" << s.seed << '\n'
      << "t_final=" << fmt(s.t_final) << '\n'
      << "final_population=" << s.final_population << '\n'
      << "vessels=" << s.vessels << '\n'
      << "warnings=" << s.warnings << '\n';
}

RunWriter::RunWriter(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::filesystem::create_directories(dir_);
}

std::ofstream RunWriter::open(const std::string& relative) {
  const auto path = dir_ / relative;
  std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  files_.push_back(relative);
  return out;
}

void RunWriter::write_config(const SimConfig& config) { open("config.txt") << emit_config(config); }

void RunWriter::write_snapshot(const Simulation& sim) {
  const auto& st = sim.state();
  const auto& cfg = sim.config();
  const std::string base = snapshot_dir_name(st.t) + "/";
  { auto f = open(base + "taf.csv"); write_field_csv(f, st.taf); }
  { auto f = open(base + "drug.csv"); write_field_csv(f, st.drug); }
  { auto f = open(base + "oxygen.csv"); write_field_csv(f, st.oxygen); }
  { auto f = open(base + "network.csv"); write_network_csv(f, st.network); }
  { auto f = open(base + "tips.csv"); write_tips_csv(f, st.tips, st.network.geometry()); }
  if (!cfg.has_tumour()) return;
  { auto f = open(base + "cells.csv"); write_cells_csv(f, st.cells); }

  // Death threshold in multiples of th_death; the other two traits relative to
  // the founder's non-mutated value.
  std::vector<double> thr, upt, pro;
  for (const auto& c : st.cells) {
    thr.push_back(c.traits.death_threshold / cfg.model.th_death);
    upt.push_back(c.base.oxygen_uptake > 0 ? c.traits.oxygen_uptake / c.base.oxygen_uptake : 1.0);
    pro.push_back(c.traits.proliferation_rate / c.base.proliferation_rate);
  }
  const auto& clamp = sim.mutation().clamp_range;
  { auto f = open(base + "hist_threshold.csv");
    write_histogram_csv(f, thr, clamp.first, clamp.second * cfg.model.th_multi); }
  { auto f = open(base + "hist_uptake.csv"); write_histogram_csv(f, upt, clamp.first, clamp.second); }
  { auto f = open(base + "hist_proliferation.csv"); write_histogram_csv(f, pro, clamp.first, clamp.second); }
}

RunSummary RunWriter::finish(const Simulation& sim) {
  const auto& st = sim.state();
  { auto f = open("stats.csv"); write_stats_csv(f, st.stats); }
  { auto f = open("events.csv"); write_events_csv(f, st.network.events()); }
  if (!st.warnings.empty()) {
    auto f = open("warnings.txt");
    for (const auto& w : st.warnings) f << w << '\n';
  }
  const auto summary = summarize(sim);
  { auto f = open("milestones.txt"); write_milestones(f, summary); }

  std::ofstream manifest(dir_ / "manifest.txt");
  if (!manifest) throw std::runtime_error("cannot write " + (dir_ / "manifest.txt").string());
  manifest << "manifest.txt\n";
  for (const auto& f : files_) manifest << f << '\n';
  return summary;
}

RunSummary run_to_directory(const SimConfig& config, const std::filesystem::path& dir,
                            const std::function<void(const Simulation&)>& progress) {
  Simulation sim(config);
  RunWriter writer(dir);
  writer.write_config(sim.config());
  writer.write_snapshot(sim);

  const long every = config.snapshot_interval > 0.0
                         ? std::max(1L, std::lround(config.snapshot_interval / config.dt))
                         : 0L;
  long step = 0;
  sim.run([&](const Simulation& s) {
    ++step;
    if (s.finished() || (every > 0 && step % every == 0)) writer.write_snapshot(s);
    if (progress) progress(s);
  });
  return writer.finish(sim);
}

}  // namespace hdc
