#include "hdc/batch.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>

namespace hdc {

namespace {

constexpr const char* kMilestoneNames[] = {"declining_point", "shifting_point", "extinction_time",
                                           "vascularization_time"};

std::optional<double> milestone(const Milestones& m, std::string_view name) {
  if (name == "declining_point") return m.declining_point;
  if (name == "shifting_point") return m.shifting_point;
  if (name == "extinction_time") return m.extinction_time;
  return m.vascularization_time;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

}  // namespace

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

BatchSummary aggregate(std::vector<SeedResult> runs) {
  BatchSummary b;
  b.runs = std::move(runs);
  for (const auto& r : b.runs) {
    if (!r.summary) {
      ++b.failures;
      continue;
    }
    ++b.outcomes[to_string(r.summary->outcome)];
  }
  for (const char* name : kMilestoneNames) {
    std::vector<double> xs;
    for (const auto& r : b.runs)
      if (r.summary)
        if (auto v = milestone(r.summary->milestones, name)) xs.push_back(*v);
    MilestoneAggregate a;
    a.count = xs.size();
    if (!xs.empty()) {
      a.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
      a.min = *std::min_element(xs.begin(), xs.end());
      a.max = *std::max_element(xs.begin(), xs.end());
      a.q25 = quantile(xs, 0.25);
      a.median = quantile(xs, 0.5);
      a.q75 = quantile(xs, 0.75);
    }
    b.milestones[name] = a;
  }
  return b;
}

void write_aggregate(std::ostream& out, const BatchSummary& b) {
  out << "runs=" << b.runs.size() << '\n' << "failures=" << b.failures << '\n';
  for (const auto& [outcome, n] : b.outcomes) out << "outcome." << outcome << '=' << n << '\n';
  for (const auto& [name, a] : b.milestones) {
    out << name << ".count=" << a.count << '\n';
    if (a.count == 0) continue;
    out << name << ".mean=" << fmt(a.mean) << '\n'
        << name << ".min=" << fmt(a.min) << '\n'
        << name << ".q25=" << fmt(a.q25) << '\n'
        << name << ".median=" << fmt(a.median) << '\n'
        << name << ".q75=" << fmt(a.q75) << '\n'
        << name << ".max=" << fmt(a.max) << '\n';
  }
}

BatchSummary run_batch(const SimConfig& config, const std::vector<std::uint64_t>& seeds,
                       const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<SeedResult> runs;
  for (auto seed : seeds) {
    SeedResult r;
    r.seed = seed;
    SimConfig c = config;
    c.seed = seed;
    try {
      r.summary = run_to_directory(c, dir / ("seed_" + std::to_string(seed)));
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    runs.push_back(std::move(r));
  }
  auto batch = aggregate(std::move(runs));

  std::ofstream table(dir / "summary.csv");
  table << "seed,status,outcome,declining_point,shifting_point,extinction_time,vascularization_time,"
           "final_population\n";
  for (const auto& r : batch.runs) {
    table << r.seed << ',';
    if (!r.summary) {
      table << "failed,,,,,,\n";
      continue;
    }
    table << "ok," << to_string(r.summary->outcome);
    for (const char* name : kMilestoneNames) {
      const auto v = milestone(r.summary->milestones, name);
      table << ',' << (v ? fmt(*v) : "");
    }
    table << ',' << r.summary->final_population << '\n';
  }
  std::ofstream agg(dir / "aggregate.txt");
  write_aggregate(agg, batch);
  if (batch.failures > 0) {
    std::ofstream errors(dir / "failures.txt");
    for (const auto& r : batch.runs)
      if (!r.summary) errors << "seed " << r.seed << ": " << r.error << '\n';
  }
  return batch;
}

}  // namespace hdc
