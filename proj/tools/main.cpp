#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "hdc/batch.hpp"
#include "hdc/config.hpp"
#include "hdc/errors.hpp"
#include "hdc/output.hpp"
#include "hdc/treatment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

int verbosity() {
  const char* v = std::getenv("HDC_VERBOSE");
  return v ? std::atoi(v) : 0;
}

hdc::SimConfig load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hdc::ConfigError({{0, "cannot open " + path}});
  std::stringstream text;
  text << in.rdbuf();
  return hdc::parse_config(text.str());
}

void print_summary(const hdc::RunSummary& s) { hdc::write_milestones(std::cout, s); }

void list_presets() {
  std::cout << "scenarios:\n";
  for (auto sc : {hdc::Scenario::AngioOnly, hdc::Scenario::NoResistance, hdc::Scenario::PreExisting,
                  hdc::Scenario::Spontaneous, hdc::Scenario::DrugInduced}) {
    const auto c = hdc::scenario_defaults(sc);
    std::cout << "  " << hdc::to_string(sc) << "  treatment=" << c.treatment << " mu=" << c.mu
              << " preexisting_fraction=" << c.preexisting_fraction
              << " exposure_resistance=" << (c.exposure_resistance ? "true" : "false") << " t_end=" << c.t_end
              << '\n';
  }
  std::cout << "strategies (period 50, t_init 14):\n";
  for (const auto& p : hdc::strategy_presets()) {
    const auto& s = p.schedule;
    std::cout << "  " << p.name << "  ";
    if (s.kind == hdc::TreatmentKind::Continuous)
      std::cout << "continuous S_d=" << s.d_c;
    else
      std::cout << "pulsed S_d=" << s.d_p << " t_on=" << s.t_on << " t_off=" << s.t_off;
    std::cout << "  dose/period=" << hdc::total_dose(s, s.t_init, s.t_init + 50.0) << '\n';
  }
  std::cout << "model parameters (non-dimensional defaults):\n";
  std::istringstream lines(hdc::emit_config(hdc::SimConfig{}));
  for (std::string line; std::getline(lines, line);) std::cout << "  " << line << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid discrete-continuum tumour, angiogenesis and drug-resistance simulator"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int n_seeds = 10;
  std::uint64_t first_seed = 1;

  auto* run = app.add_subcommand("run", "run one simulation");
  run->add_option("--config", config_path, "key=value configuration file")->required()->check(CLI::ExistingFile);
  auto* seed_opt = run->add_option("--seed", seed, "overrides the configured seed");
  run->add_option("--out", out_dir, "output directory")->required();

  auto* batch = app.add_subcommand("batch", "run several seeds sequentially");
  batch->add_option("--config", config_path, "key=value configuration file")->required()->check(CLI::ExistingFile);
  batch->add_option("--seeds", n_seeds, "number of seeds")->check(CLI::PositiveNumber);
  batch->add_option("--first-seed", first_seed, "first seed of the consecutive range");
  batch->add_option("--out", out_dir, "output directory")->required();

  auto* validate = app.add_subcommand("validate", "check a configuration file");
  validate->add_option("--config", config_path, "key=value configuration file")->required()->check(CLI::ExistingFile);

  app.add_subcommand("presets", "list scenarios, treatment strategies and parameter defaults");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand("presets")) {
      list_presets();
      return 0;
    }
    auto config = load(config_path);
    if (app.got_subcommand("validate")) {
      std::cout << hdc::emit_config(config);
      return 0;
    }
    if (app.got_subcommand("run")) {
      if (*seed_opt) config.seed = seed;
      const int verbose = verbosity();
      const auto summary = hdc::run_to_directory(config, out_dir, [&](const hdc::Simulation& s) {
        if (verbose > 0 && s.state().stats.size() % 10 == 1) {
          const auto& r = s.state().stats.back();
          std::cerr << "t=" << r.t << " N=" << r.N << " vessels=" << r.vessels << " tips=" << r.tips << '\n';
        }
      });
      print_summary(summary);
      return 0;
    }
    std::vector<std::uint64_t> seeds(static_cast<std::size_t>(n_seeds));
    std::iota(seeds.begin(), seeds.end(), first_seed);
    const auto summary = hdc::run_batch(config, seeds, out_dir);
    hdc::write_aggregate(std::cout, summary);
    return summary.failures == 0 ? 0 : kExitNumerical;
  } catch (const hdc::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  } catch (const hdc::InvalidInput& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kExitConfig;
  } catch (const hdc::NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const hdc::StepSizeViolation& e) {
    std::cerr << "step-size violation: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
