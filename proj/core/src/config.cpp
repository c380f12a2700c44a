#include "hdc/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <variant>

#include "hdc/errors.hpp"

namespace hdc {

const char* to_string(Scenario s) {
  switch (s) {
    case Scenario::AngioOnly: return "angio_only";
    case Scenario::NoResistance: return "no_resistance";
    case Scenario::PreExisting: return "preexisting";
    case Scenario::Spontaneous: return "spontaneous";
    case Scenario::DrugInduced: return "drug_induced";
  }
  return "?";
}

namespace {

std::optional<Scenario> scenario_from(std::string_view s) {
  for (auto sc : {Scenario::AngioOnly, Scenario::NoResistance, Scenario::PreExisting, Scenario::Spontaneous,
                  Scenario::DrugInduced})
    if (s == to_string(sc)) return sc;
  return std::nullopt;
}

using RealRef = double& (*)(SimConfig&);
using IntRef = int& (*)(SimConfig&);
using SeedRef = std::uint64_t& (*)(SimConfig&);
using BoolRef = bool& (*)(SimConfig&);
using TextRef = std::string& (*)(SimConfig&);

struct Key {
  const char* name;
  std::variant<RealRef, IntRef, SeedRef, BoolRef, TextRef> ref;
};

#define HDC_REAL(key, member) Key{key, RealRef{[](SimConfig& c) -> double& { return c.member; }}}
#define HDC_INT(key, member) Key{key, IntRef{[](SimConfig& c) -> int& { return c.member; }}}
#define HDC_BOOL(key, member) Key{key, BoolRef{[](SimConfig& c) -> bool& { return c.member; }}}

// Treatment keys that only make sense for a custom schedule.
constexpr std::string_view kCustomTreatmentKeys[] = {"d_c", "d_p", "t_on", "t_off"};

const std::vector<Key>& key_table() {
  static const std::vector<Key> keys = {
      Key{"scenario", TextRef{nullptr}},
      HDC_REAL("D_n", model.D_n),
      HDC_REAL("chi0", model.chi0),
      HDC_REAL("alpha", model.alpha),
      HDC_REAL("D_c", model.D_c),
      HDC_REAL("xi_c", model.xi_c),
      HDC_REAL("eta", model.eta),
      HDC_REAL("lambda", model.lambda),
      HDC_REAL("D_d", model.D_d),
      HDC_REAL("xi_d", model.xi_d),
      HDC_REAL("rho_d", model.rho_d),
      HDC_REAL("p_r", model.p_r),
      HDC_REAL("D_o", model.D_o),
      HDC_REAL("xi_o", model.xi_o),
      HDC_REAL("rho_o", model.rho_o),
      HDC_REAL("S_o", model.S_o),
      HDC_REAL("o_max", model.o_max),
      HDC_REAL("o_hyp", model.o_hyp),
      HDC_REAL("o_apop", model.o_apop),
      HDC_REAL("psi", model.psi),
      HDC_REAL("c_br", model.c_br),
      HDC_REAL("th_death", model.th_death),
      HDC_INT("th_multi", model.th_multi),
      HDC_INT("F_max", model.F_max),
      HDC_REAL("R_c", model.R_c),
      HDC_REAL("mu", mu),
      Key{"treatment", TextRef{[](SimConfig& c) -> std::string& { return c.treatment; }}},
      HDC_REAL("t_init", schedule.t_init),
      HDC_REAL("d_c", schedule.d_c),
      HDC_REAL("d_p", schedule.d_p),
      HDC_REAL("t_on", schedule.t_on),
      HDC_REAL("t_off", schedule.t_off),
      Key{"seed", SeedRef{[](SimConfig& c) -> std::uint64_t& { return c.seed; }}},
      HDC_REAL("t_end", t_end),
      HDC_REAL("dt", dt),
      HDC_REAL("tip_dt", tip_dt),
      HDC_REAL("snapshot_interval", snapshot_interval),
      HDC_REAL("R_F", R_F),
      HDC_REAL("epsilon1", epsilon1),
      HDC_REAL("q_h", q_h),
      HDC_INT("N_0", N_0),
      HDC_REAL("tumour_x", tumour_centre.x),
      HDC_REAL("tumour_y", tumour_centre.y),
      HDC_REAL("tumour_radius", tumour_radius),
      HDC_REAL("relax_tol", relax_tol),
      HDC_INT("relax_max_iters", relax_max_iters),
      HDC_REAL("preexisting_fraction", preexisting_fraction),
      HDC_BOOL("exposure_resistance", exposure_resistance),
      HDC_REAL("exposure_threshold", exposure_threshold),
      HDC_REAL("exposure_increment", exposure_increment),
      HDC_REAL("d_floor", d_floor),
      HDC_REAL("d_ref", d_ref),
      HDC_REAL("taf_k", taf_k),
      HDC_REAL("initial_oxygen", initial_oxygen),
      HDC_INT("initial_tips", initial_tips),
      HDC_REAL("tip_start_y", tip_start_y),
      HDC_REAL("endothelial_interval", endothelial_interval),
      HDC_BOOL("freeze_taf", freeze_taf),
  };
  return keys;
}

#undef HDC_REAL
#undef HDC_INT
#undef HDC_BOOL

const Key* find_key(std::string_view name) {
  for (const auto& k : key_table())
    if (name == k.name) return &k;
  return nullptr;
}

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

template <class T>
bool parse_number(std::string_view text, T& out) {
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// Assigns one value; returns an error message or empty on success.
std::string assign(SimConfig& c, const Key& key, std::string_view value) {
  return std::visit(
      [&](auto ref) -> std::string {
        using R = decltype(ref);
        if constexpr (std::is_same_v<R, RealRef>) {
          double v = 0.0;
          if (!parse_number(value, v) || !std::isfinite(v)) return "expected a real number";
          ref(c) = v;
        } else if constexpr (std::is_same_v<R, IntRef>) {
          int v = 0;
          if (!parse_number(value, v)) return "expected an integer";
          ref(c) = v;
        } else if constexpr (std::is_same_v<R, SeedRef>) {
          std::uint64_t v = 0;
          if (!parse_number(value, v)) return "expected a non-negative integer";
          ref(c) = v;
        } else if constexpr (std::is_same_v<R, BoolRef>) {
          if (value == "true" || value == "1") ref(c) = true;
          else if (value == "false" || value == "0") ref(c) = false;
          else return "expected true or false";
        } else {
          ref(c) = std::string(value);
        }
        return {};
      },
      key.ref);
}

std::string render(SimConfig& c, const Key& key) {
  return std::visit(
      [&](auto ref) -> std::string {
        using R = decltype(ref);
        if constexpr (std::is_same_v<R, RealRef>) return format_real(ref(c));
        else if constexpr (std::is_same_v<R, IntRef> || std::is_same_v<R, SeedRef>) return std::to_string(ref(c));
        else if constexpr (std::is_same_v<R, BoolRef>) return ref(c) ? "true" : "false";
        else return ref(c);
      },
      key.ref);
}

bool is_custom(const std::string& treatment) {
  return treatment == "continuous" || treatment == "pulsed" || treatment == "none";
}

// Rebuilds the schedule from the treatment name and the raw schedule fields.
std::string resolve_schedule(SimConfig& c) {
  const double t_init = c.schedule.t_init;
  if (auto preset = find_strategy(c.treatment, t_init)) {
    c.schedule = *preset;
    return {};
  }
  if (c.treatment == "continuous") {
    c.schedule = TreatmentSchedule::continuous(c.schedule.d_c, t_init);
  } else if (c.treatment == "pulsed") {
    c.schedule = TreatmentSchedule::pulsed(c.schedule.d_p, c.schedule.t_on, c.schedule.t_off, t_init);
  } else if (c.treatment == "none") {
    c.schedule = TreatmentSchedule::continuous(0.0, t_init);
  } else {
    return "unknown treatment '" + c.treatment + "' (strategy1..strategy7, continuous, pulsed, none)";
  }
  return {};
}

}  // namespace

ConfigError::ConfigError(std::vector<ConfigIssue> issues)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << issues.size() << " configuration error(s)";
        for (const auto& i : issues) {
          os << "\n  ";
          if (i.line > 0) os << "line " << i.line << ": ";
          os << i.message;
        }
        return os.str();
      }()),
      issues_(std::move(issues)) {}

SimConfig scenario_defaults(Scenario scenario) {
  SimConfig c;
  c.scenario = scenario;
  switch (scenario) {
    case Scenario::AngioOnly:
      c.treatment = "none";
      c.schedule = TreatmentSchedule::continuous(0.0, c.schedule.t_init);
      c.N_0 = 0;
      c.freeze_taf = true;
      c.t_end = 3.0;
      c.snapshot_interval = 0.5;
      break;
    case Scenario::NoResistance:
      break;
    case Scenario::PreExisting:
      c.preexisting_fraction = 0.01;
      break;
    case Scenario::Spontaneous:
      c.mu = 1e-3;
      break;
    case Scenario::DrugInduced:
      c.mu = 1e-3;
      c.exposure_resistance = true;
      break;
  }
  return c;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& k : key_table()) out.emplace_back(k.name);
  return out;
}

SimConfig parse_config(std::string_view text) {
  struct Entry {
    int line;
    std::string key;
    std::string value;
  };
  std::vector<Entry> entries;
  std::vector<ConfigIssue> issues;

  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    auto line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      issues.push_back({line_no, "expected key=value"});
      continue;
    }
    entries.push_back({line_no, std::string(trim(line.substr(0, eq))), std::string(trim(line.substr(eq + 1)))});
  }

  // The scenario selects the defaults every other key overrides.
  SimConfig c;
  std::map<std::string, int> seen;
  for (const auto& e : entries) {
    if (e.key != "scenario") continue;
    if (auto s = scenario_from(e.value)) c = scenario_defaults(*s);
    else issues.push_back({e.line, "unknown scenario '" + e.value + "'"});
  }

  for (const auto& e : entries) {
    if (auto [it, fresh] = seen.emplace(e.key, e.line); !fresh) {
      issues.push_back({e.line, "duplicate key '" + e.key + "' (first set on line " +
                                    std::to_string(it->second) + ")"});
      continue;
    }
    if (e.key == "scenario") continue;
    const Key* key = find_key(e.key);
    if (key == nullptr) {
      issues.push_back({e.line, "unknown key '" + e.key + "'"});
      continue;
    }
    if (auto err = assign(c, *key, e.value); !err.empty())
      issues.push_back({e.line, e.key + ": " + err + ", got '" + e.value + "'"});
  }

  if (find_strategy(c.treatment)) {
    for (auto k : kCustomTreatmentKeys)
      if (auto it = seen.find(std::string(k)); it != seen.end())
        issues.push_back({it->second, std::string(k) + " is fixed by preset '" + c.treatment + "'"});
  }
  if (auto err = resolve_schedule(c); !err.empty())
    issues.push_back({seen.count("treatment") ? seen["treatment"] : 0, err});

  // Invariant violations are reported against the line that set the key.
  for (auto issue : validate(c)) {
    const auto key = issue.message.substr(0, issue.message.find(':'));
    if (auto it = seen.find(key); it != seen.end()) issue.line = it->second;
    issues.push_back(std::move(issue));
  }

  if (!issues.empty()) throw ConfigError(std::move(issues));
  return c;
}

std::string emit_config(const SimConfig& config) {
  SimConfig c = config;
  std::ostringstream os;
  os << "scenario=" << to_string(c.scenario) << '\n';
  const bool custom = is_custom(c.treatment);
  for (const auto& key : key_table()) {
    const std::string_view name = key.name;
    if (name == "scenario") continue;
    bool custom_only = false;
    for (auto k : kCustomTreatmentKeys) custom_only |= (name == k);
    if (custom_only && !custom) continue;
    os << name << '=' << render(c, key) << '\n';
  }
  return os.str();
}

std::vector<ConfigIssue> validate(const SimConfig& c) {
  std::vector<ConfigIssue> out;
  auto need = [&](bool ok, const char* key, const std::string& what) {
    if (!ok) out.push_back({0, std::string(key) + ": " + what});
  };
  const auto& m = c.model;

  const std::pair<const char*, double> rates[] = {
      {"D_n", m.D_n},   {"chi0", m.chi0}, {"alpha", m.alpha}, {"D_c", m.D_c},   {"xi_c", m.xi_c},
      {"eta", m.eta},   {"lambda", m.lambda}, {"D_d", m.D_d}, {"xi_d", m.xi_d}, {"rho_d", m.rho_d},
      {"D_o", m.D_o},   {"xi_o", m.xi_o}, {"rho_o", m.rho_o}, {"S_o", m.S_o},   {"psi", m.psi},
      {"c_br", m.c_br}, {"mu", c.mu},
  };
  for (const auto& [name, v] : rates) need(v >= 0.0, name, "must be non-negative");

  need(m.p_r >= 0.0 && m.p_r <= 1.0, "p_r", "must lie in [0, 1]");
  need(m.o_max > 0.0, "o_max", "must be positive");
  need(m.o_apop > 0.0, "o_apop", "must be positive");
  need(m.o_apop < m.o_hyp, "o_hyp", "must exceed o_apop");
  need(m.o_hyp < 1.0, "o_hyp", "must be below 1");
  need(m.th_death > 0.0, "th_death", "must be positive");
  need(m.th_multi >= 1, "th_multi", "must be at least 1");
  need(m.F_max >= 1, "F_max", "must be at least 1");
  if (m.R_c > 0.0) {
    const double n = 1.0 / (2.0 * m.R_c);
    need(std::abs(n - std::round(n)) < 1e-9 && std::round(n) >= 3.0, "R_c",
         "1/(2 R_c) must be an integer of at least 3");
  } else {
    need(false, "R_c", "must be positive");
  }

  need(c.t_end >= 0.0, "t_end", "must be non-negative");
  need(c.dt > 0.0, "dt", "must be positive");
  need(c.tip_dt > 0.0 && c.tip_dt <= c.dt, "tip_dt", "must lie in (0, dt]");
  need(c.snapshot_interval >= 0.0, "snapshot_interval", "must be non-negative");

  need(c.R_F > 0.0, "R_F", "must be positive");
  need(c.epsilon1 >= 0.0, "epsilon1", "must be non-negative");
  need(c.q_h >= 0.0 && c.q_h <= 1.0, "q_h", "must lie in [0, 1]");
  need(c.N_0 >= 0, "N_0", "must be non-negative");
  need(GridGeometry::contains(c.tumour_centre), "tumour_x", "tumour centre must lie in the unit square");
  need(c.tumour_radius > 0.0, "tumour_radius", "must be positive");
  need(c.relax_tol > 0.0 && c.relax_tol < 1.0, "relax_tol", "must lie in (0, 1)");
  need(c.relax_max_iters >= 1, "relax_max_iters", "must be at least 1");

  need(c.preexisting_fraction >= 0.0 && c.preexisting_fraction <= 1.0, "preexisting_fraction",
       "must lie in [0, 1]");
  need(c.exposure_threshold > 0.0, "exposure_threshold", "must be positive");
  need(c.exposure_increment >= 1.0, "exposure_increment", "must be at least 1");
  need(c.d_floor >= 0.0, "d_floor", "must be non-negative");
  need(c.d_ref > 0.0, "d_ref", "must be positive");

  need(c.taf_k >= 0.0, "taf_k", "must be non-negative");
  need(c.initial_oxygen >= 0.0 && c.initial_oxygen <= m.o_max, "initial_oxygen", "must lie in [0, o_max]");
  need(c.initial_tips >= 0, "initial_tips", "must be non-negative");
  need(c.tip_start_y > 0.0 && c.tip_start_y < 1.0, "tip_start_y", "must lie in (0, 1)");
  need(c.endothelial_interval > 0.0, "endothelial_interval", "must be positive");

  need(c.schedule.d_c >= 0.0, "d_c", "must be non-negative");
  need(c.schedule.d_p >= 0.0, "d_p", "must be non-negative");
  need(c.schedule.t_on > 0.0, "t_on", "must be positive");
  need(c.schedule.t_off >= 0.0, "t_off", "must be non-negative");
  need(c.schedule.t_init >= 0.0, "t_init", "must be non-negative");

  if (out.empty() && c.has_tumour()) {
    // N_0 founders need N_0 distinct lattice squares inside the initial disc.
    const auto g = c.geometry();
    int squares = 0;
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i)
        if (distance(g.centre(i, j), c.tumour_centre) <= c.tumour_radius) ++squares;
    need(c.N_0 <= squares, "N_0",
         "exceeds the " + std::to_string(squares) + " lattice squares inside the initial tumour disc");
    need(c.initial_tips <= g.nx(), "initial_tips", "exceeds the number of lattice columns");
  }
  return out;
}

}  // namespace hdc
