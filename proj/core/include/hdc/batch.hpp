#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hdc/output.hpp"

namespace hdc {

struct SeedResult {
  std::uint64_t seed = 0;
  std::optional<RunSummary> summary;  // empty when the run failed
  std::string error;
};

struct MilestoneAggregate {
  std::size_t count = 0;  // runs in which the milestone occurred
  double mean = 0.0;
  double min = 0.0;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double max = 0.0;
};

struct BatchSummary {
  std::vector<SeedResult> runs;
  std::size_t failures = 0;
  std::map<std::string, std::size_t> outcomes;
  std::map<std::string, MilestoneAggregate> milestones;  // keyed by milestone name
};

/// Quantile with linear interpolation between order statistics (type 7).
double quantile(std::vector<double> values, double q);

BatchSummary aggregate(std::vector<SeedResult> runs);

/// Runs every seed into dir/seed_<n>, sequentially. A failing seed is recorded
/// and the batch continues. Writes dir/summary.csv and dir/aggregate.txt.
BatchSummary run_batch(const SimConfig& config, const std::vector<std::uint64_t>& seeds,
                       const std::filesystem::path& dir);

void write_aggregate(std::ostream& out, const BatchSummary& batch);

}  // namespace hdc
