#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hdc/engine.hpp"

namespace hdc {

struct RunSummary {
  std::uint64_t seed = 0;
  Milestones milestones;
  Outcome outcome = Outcome::Running;
  double t_final = 0.0;
  std::size_t final_population = 0;
  std::size_t vessels = 0;
  std::size_t warnings = 0;
};

RunSummary summarize(const Simulation& sim);

void write_stats_csv(std::ostream& out, std::span<const StatsRow> stats);
void write_cells_csv(std::ostream& out, std::span<const TumourCell> cells);
void write_network_csv(std::ostream& out, const AngiogenicNetwork& network);
void write_tips_csv(std::ostream& out, std::span<const TipCell> tips, const GridGeometry& geometry);
void write_events_csv(std::ostream& out, std::span<const NetworkEvent> events);

/// "bin_lo,bin_hi,count" over `bins` equal bins of [lo, hi]; values outside are
/// counted in the nearest edge bin.
void write_histogram_csv(std::ostream& out, std::span<const double> values, double lo, double hi, int bins = 40);

/// key=value lines: declining_point, shifting_point, extinction_time,
/// vascularization_time (or "none"), outcome, plus run totals.
void write_milestones(std::ostream& out, const RunSummary& summary);

// Writes one run into a directory and lists every file it produced in
// manifest.txt. Snapshots are taken at t = 0, every snapshot_interval and at t_end.
class RunWriter {
 public:
  explicit RunWriter(std::filesystem::path dir);

  void write_config(const SimConfig& config);
  void write_snapshot(const Simulation& sim);
  /// Stats, events, warnings, milestones and the manifest.
  RunSummary finish(const Simulation& sim);

  const std::vector<std::string>& files() const noexcept { return files_; }

 private:
  std::ofstream open(const std::string& relative);

  std::filesystem::path dir_;
  std::vector<std::string> files_;
};

/// Runs `config` to t_end, writing all artifacts under `dir`.
RunSummary run_to_directory(const SimConfig& config, const std::filesystem::path& dir,
                            const std::function<void(const Simulation&)>& progress = {});

}  // namespace hdc
