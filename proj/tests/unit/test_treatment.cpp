#include <doctest.h>

#include "hdc/errors.hpp"
#include "hdc/treatment.hpp"

using namespace hdc;

TEST_SUITE("treatment") {
  TEST_CASE("nothing before t_init") {
    for (const auto& p : strategy_presets()) {
      CHECK(supply_rate(p.schedule, 0.0) == 0.0);
      CHECK(supply_rate(p.schedule, 13.99) == 0.0);
      CHECK(supply_rate(p.schedule, 14.0) > 0.0);
    }
  }

  TEST_CASE("preset table") {
    const auto& ps = strategy_presets();
    REQUIRE(ps.size() == 7);
    const double expected_dose[] = {100, 100, 100, 100, 100, 250, 500};
    for (std::size_t k = 0; k < ps.size(); ++k) {
      CHECK(ps[k].name == "strategy" + std::to_string(k + 1));
      CHECK(total_dose(ps[k].schedule, 14.0, 64.0) == doctest::Approx(expected_dose[k]));
      CHECK(total_dose(ps[k].schedule, 0.0, 64.0) == doctest::Approx(expected_dose[k]));
    }
    const auto s3 = *find_strategy("strategy3");
    CHECK(s3.kind == TreatmentKind::Pulsed);
    CHECK(s3.t_on == 30.0);
    CHECK(s3.t_off == 20.0);
    CHECK(s3.d_p == doctest::Approx(10.0 / 3.0));
    CHECK_FALSE(find_strategy("strategy8"));
    CHECK(find_strategy("strategy6", 20.0)->t_init == 20.0);
  }

  TEST_CASE("pulsed windows") {
    const auto s1 = *find_strategy("strategy1");
    CHECK(supply_rate(s1, 14.0) == 10.0);
    CHECK(supply_rate(s1, 24.0) == 10.0);
    CHECK(supply_rate(s1, 24.05) == 0.0);
    CHECK(supply_rate(s1, 63.9) == 0.0);
    CHECK(supply_rate(s1, 64.0) == 10.0);
    CHECK(total_dose(s1, 14.0, 114.0) == doctest::Approx(200.0));
    CHECK(total_dose(s1, 20.0, 30.0) == doctest::Approx(40.0));
    CHECK(total_dose(s1, 30.0, 20.0) == 0.0);
  }

  TEST_CASE("continuous and none") {
    const auto s7 = *find_strategy("strategy7");
    CHECK(supply_rate(s7, 1000.0) == 10.0);
    const auto off = TreatmentSchedule::none();
    CHECK(supply_rate(off, 20.0) == 0.0);
    CHECK(total_dose(off, 0.0, 50.0) == 0.0);
  }

  TEST_CASE("validation") {
    CHECK_NOTHROW(TreatmentSchedule::pulsed(5.0, 20.0, 30.0).validate());
    CHECK_THROWS_AS(TreatmentSchedule::continuous(-1.0).validate(), InvalidInput);
    CHECK_THROWS_AS(TreatmentSchedule::pulsed(5.0, 0.0, 30.0).validate(), InvalidInput);
    CHECK_THROWS_AS(TreatmentSchedule::pulsed(5.0, 10.0, -1.0).validate(), InvalidInput);
  }
}
