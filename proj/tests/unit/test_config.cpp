#include <doctest.h>

#include <algorithm>

#include "hdc/config.hpp"
#include "hdc/errors.hpp"

using namespace hdc;

namespace {

std::vector<ConfigIssue> issues_of(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<ConfigIssue>& issues, int line, std::string_view fragment) {
  return std::any_of(issues.begin(), issues.end(), [&](const ConfigIssue& i) {
    return i.line == line && i.message.find(fragment) != std::string::npos;
  });
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("empty file gives the defaults") {
    const auto c = parse_config("");
    CHECK(c == SimConfig{});
    CHECK(c.model.D_n == doctest::Approx(4.608e-4));
    CHECK(c.model.S_o == doctest::Approx(3.5));
    CHECK(c.model.th_multi == 3);
    CHECK(c.schedule == TreatmentSchedule::continuous(2.0));
    CHECK(parse_config("# only a comment\n\n   \n") == SimConfig{});
  }

  TEST_CASE("scenario defaults") {
    const auto angio = parse_config("scenario=angio_only");
    CHECK_FALSE(angio.has_tumour());
    CHECK(angio.N_0 == 0);
    CHECK(angio.freeze_taf);
    CHECK(angio.treatment == "none");
    CHECK(parse_config("scenario=preexisting").preexisting_fraction == doctest::Approx(0.01));
    CHECK(parse_config("scenario=spontaneous").mu == doctest::Approx(1e-3));
    const auto di = parse_config("scenario=drug_induced");
    CHECK(di.exposure_resistance);
    CHECK(di.mu == doctest::Approx(1e-3));
    // scenario applies before the other keys regardless of position
    CHECK(parse_config("mu=0.01\nscenario=spontaneous").mu == doctest::Approx(0.01));
  }

  TEST_CASE("presets resolve to schedules") {
    const auto c = parse_config("treatment=strategy3\nt_init=10");
    CHECK(c.schedule.kind == TreatmentKind::Pulsed);
    CHECK(c.schedule.t_on == 30.0);
    CHECK(c.schedule.t_off == 20.0);
    CHECK(c.schedule.d_p == doctest::Approx(10.0 / 3.0));
    CHECK(c.schedule.t_init == 10.0);

    const auto p = parse_config("treatment=pulsed\nd_p=4\nt_on=5\nt_off=15");
    CHECK(p.schedule == TreatmentSchedule::pulsed(4.0, 5.0, 15.0));

    CHECK(mentions(issues_of("treatment=strategy2\nd_p=3"), 2, "fixed by preset"));
    CHECK(mentions(issues_of("treatment=strategy9"), 1, "unknown treatment"));
  }

  TEST_CASE("ordering constraint on oxygen thresholds") {
    const auto issues = issues_of("o_hyp=0.02");
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].line == 1);
    CHECK(issues[0].message.find("o_hyp") != std::string::npos);
    CHECK_NOTHROW(parse_config("o_hyp=0.3\no_apop=0.1"));
  }

  TEST_CASE("malformed input is reported with line numbers") {
    const auto issues = issues_of("D_n=abc\nbogus=1\nD_c=0.1\nD_c=0.2\nnot a pair\np_r=1.5\nfreeze_taf=maybe");
    CHECK(mentions(issues, 1, "D_n"));
    CHECK(mentions(issues, 2, "unknown key"));
    CHECK(mentions(issues, 4, "duplicate"));
    CHECK(mentions(issues, 5, "key=value"));
    CHECK(mentions(issues, 6, "p_r"));
    CHECK(mentions(issues, 7, "freeze_taf"));
    CHECK(issues.size() == 6);
    CHECK(mentions(issues_of("scenario=everything"), 1, "unknown scenario"));
    CHECK(mentions(issues_of("th_multi=2.5"), 1, "th_multi"));
    CHECK(mentions(issues_of("R_c=0.003"), 1, "R_c"));
    CHECK(mentions(issues_of("tip_dt=0.2"), 1, "tip_dt"));
    CHECK(mentions(issues_of("N_0=100000"), 1, "N_0"));
  }

  TEST_CASE("emit and parse round-trip") {
    SimConfig c = parse_config("scenario=spontaneous\nmu=0.0123456789\ntreatment=pulsed\nd_p=7.25\nt_on=3\nt_off=9");
    c.seed = 987654321987ULL;
    c.model.chi0 = 0.1 + 0.2;
    c.tumour_centre = {0.4, 0.6};
    CHECK(parse_config(emit_config(c)) == c);
    for (const char* s : {"scenario=angio_only", "treatment=strategy1", "scenario=drug_induced\ntreatment=strategy7"}) {
      const auto d = parse_config(s);
      CHECK(parse_config(emit_config(d)) == d);
    }
    const auto keys = config_keys();
    CHECK(keys.front() == "scenario");
    CHECK(std::find(keys.begin(), keys.end(), "endothelial_interval") != keys.end());
  }

  TEST_CASE("validate on assembled configs") {
    CHECK(validate(SimConfig{}).empty());
    SimConfig c;
    c.dt = 0.0;
    c.q_h = 2.0;
    CHECK(validate(c).size() >= 2);
  }
}
