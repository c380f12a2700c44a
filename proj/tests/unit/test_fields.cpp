#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "hdc/errors.hpp"
#include "hdc/fields.hpp"

using namespace hdc;

namespace {

ScalarField random_field(const GridGeometry& g, std::mt19937_64& gen) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  ScalarField f(g, FieldKind::Taf);
  for (double& v : f.values) v = u(gen);
  return f;
}

int count_ones(const ScalarField& f) {
  int n = 0;
  for (double v : f.values) n += v == 1.0;
  return n;
}

}  // namespace

TEST_SUITE("fields") {
  TEST_CASE("linear TAF is exact and harmonic") {
    const GridGeometry g(100);
    const auto c = init_linear_taf(5.0, g);
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) CHECK(std::abs(c(i, j) - 5.0 * g.centre(i, j).y) <= 1e-12);
    CHECK(c(0, 49) == doctest::Approx(2.475).epsilon(1e-14));
    CHECK(c(7, 50) == doctest::Approx(2.525).epsilon(1e-14));

    const double h2 = g.dx() * g.dx();
    double worst = 0.0;
    for (int j = 1; j < g.ny() - 1; ++j)
      for (int i = 1; i < g.nx() - 1; ++i)
        worst = std::max(worst, std::abs((c(i + 1, j) + c(i - 1, j) + c(i, j + 1) + c(i, j - 1) - 4 * c(i, j)) / h2));
    CHECK(worst <= 1e-8);  // residual of O(1e-16 / h^2) round-off

    const auto zero = init_linear_taf(0.0, g);
    CHECK(zero.max() == 0.0);
    CHECK_THROWS_AS(init_linear_taf(-1.0, g), InvalidInput);
  }

  TEST_CASE("indicator stamps") {
    const GridGeometry g(100);
    const double rc = 0.005;
    CHECK(count_ones(deposit_indicator({}, g, rc)) == 0);

    const Point on_node = g.centre(20, 30);
    const std::vector<Point> one{on_node};
    const auto f = deposit_indicator(one, g, rc);
    CHECK(f(20, 30) == 1.0);
    CHECK(count_ones(f) == 1);

    const std::vector<Point> a{g.centre(40, 40)}, b{{g.centre(40, 40).x + 3 * rc, g.centre(40, 40).y}};
    std::vector<Point> both{a[0], b[0]};
    const auto fa = deposit_indicator(a, g, rc);
    const auto fb = deposit_indicator(b, g, rc);
    const auto fab = deposit_indicator(both, g, rc);
    CHECK(count_ones(fab) == count_ones(fa) + count_ones(fb));
    // brute force oracle
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) {
        const double reach = rc * (1.0 + 1e-12);
        const bool inside = distance(g.centre(i, j), a[0]) <= reach || distance(g.centre(i, j), b[0]) <= reach;
        CHECK(fab(i, j) == (inside ? 1.0 : 0.0));
      }
    for (double v : fab.values) CHECK((v == 0.0 || v == 1.0));

    const std::vector<Point> outside{{1.2, 0.5}};
    CHECK_THROWS_AS(deposit_indicator(outside, g, rc), InvalidInput);
  }

  TEST_CASE("uptake rates add up per node") {
    const GridGeometry g(50);
    const Point p = g.centre(10, 10);
    const std::vector<UptakeSite> sites{{p, 0.57}, {p, 0.285}};
    const auto r = deposit_rates(sites, g, 0.005);
    CHECK(r[g.index(10, 10)] == doctest::Approx(0.855));
    CHECK(r[g.index(11, 10)] == 0.0);
  }

  TEST_CASE("ADI identity without diffusion or reaction") {
    const GridGeometry g(20);
    std::mt19937_64 gen(3);
    const auto f = random_field(g, gen);
    const auto out = adi_step(f, 0.0, Reaction{}, 0.1);
    CHECK(out.values == f.values);
  }

  TEST_CASE("ADI conserves mass under zero flux") {
    std::mt19937_64 gen(11);
    const GridGeometry g(12);
    for (int trial = 0; trial < 10000; ++trial) {
      const auto f = random_field(g, gen);
      const double D = std::uniform_real_distribution<double>(0.0, 2.0)(gen);
      const auto out = adi_step(f, D, Reaction{}, 0.1);
      REQUIRE(std::abs(out.sum() - f.sum()) <= 1e-10 * std::abs(f.sum()));
    }
  }

  TEST_CASE("ADI relaxes a cosine mode at the discrete rate") {
    // Cosine modes are eigenvectors of the cell-centred Neumann Laplacian, so
    // one step multiplies the mode by the Peaceman-Rachford amplification factor.
    const int n = 32;
    const GridGeometry g(n);
    const double h = g.dx(), D = 0.3, dt = 0.05;
    ScalarField f(g, FieldKind::Taf);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) f(i, j) = std::cos(std::numbers::pi * g.centre(i, j).x);
    const double lam = 4.0 / (h * h) * std::pow(std::sin(std::numbers::pi * h / 2.0), 2);
    const double r = 0.5 * D * dt;
    const double expected = (1.0 - r * lam) / (1.0 + r * lam);
    const auto out = adi_step(f, D, Reaction{}, dt);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) CHECK(out(i, j) == doctest::Approx(expected * f(i, j)).epsilon(1e-12));
  }

  TEST_CASE("ADI rejects non-finite data and bad arguments") {
    const GridGeometry g(10);
    ScalarField f(g, FieldKind::Drug, 1.0);
    f(3, 4) = std::nan("");
    try {
      adi_step(f, 0.1, Reaction{}, 0.1);
      FAIL("expected NumericalFailure");
    } catch (const NumericalFailure& e) {
      CHECK(e.i() == 3);
      CHECK(e.j() == 4);
    }
    ScalarField ok(g, FieldKind::Drug, 1.0);
    CHECK_THROWS_AS(adi_step(ok, 0.1, Reaction{}, 0.0), InvalidInput);
    CHECK_THROWS_AS(adi_step(ok, -1.0, Reaction{}, 0.1), InvalidInput);
    const Reaction blowup = [](double, double x, double, double) { return x > 0.5 ? INFINITY : 0.0; };
    CHECK_THROWS_AS(adi_step(ok, 0.1, blowup, 0.1), NumericalFailure);
  }

  TEST_CASE("TAF step") {
    const GridGeometry g(100);
    ModelParameters p;

    SUBCASE("pure diffusion conserves mass") {
      p.xi_c = 0.0;
      ScalarField c(g, FieldKind::Taf);
      for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) {
          const Point q = g.centre(i, j);
          c(i, j) = 2.0 + std::cos(std::numbers::pi * q.x) * std::cos(2.0 * std::numbers::pi * q.y);
        }
      const auto out = step_taf(c, {}, {}, p, 0.1);
      CHECK(out.sum() == doctest::Approx(c.sum()).epsilon(1e-10));
    }
    SUBCASE("uniform decay") {
      p.D_c = 0.0;
      const ScalarField c(g, FieldKind::Taf, 1.0);
      const auto out = step_taf(c, {}, {}, p, 0.1);
      for (double v : out.values) CHECK(v == doctest::Approx(1.0 - p.xi_c * 0.1).epsilon(1e-14));
    }
    SUBCASE("production at hypoxic cells, consumption at vessels") {
      p.D_c = 0.0;
      const ScalarField c(g, FieldKind::Taf, 1.0);
      const std::vector<Point> hyp{g.centre(30, 30)}, ves{g.centre(60, 60)};
      const auto out = step_taf(c, hyp, ves, p, 0.1);
      CHECK(out(30, 30) > c(30, 30));
      CHECK(out(30, 30) == doctest::Approx(1.0 + 0.1 * (p.eta - p.xi_c)));
      CHECK(out(60, 60) < c(60, 60));
      CHECK(out(60, 60) == doctest::Approx(1.0 - 0.1 * (p.xi_c + p.lambda)));
    }
  }

  TEST_CASE("drug step") {
    const GridGeometry g(100);
    ModelParameters p;
    SUBCASE("no supply keeps zero") {
      const ScalarField d(g, FieldKind::Drug);
      const std::vector<Point> ves{g.centre(5, 5)};
      CHECK(step_drug(d, {}, ves, 0.0, p, 0.1).max() == 0.0);
    }
    SUBCASE("vessel node gains S_d dt") {
      p.D_d = 0.0;
      p.xi_d = 0.0;
      const ScalarField d(g, FieldKind::Drug);
      const std::vector<Point> ves{g.centre(5, 5)};
      const auto out = step_drug(d, {}, ves, 2.0, p, 0.1);
      CHECK(out(5, 5) == doctest::Approx(0.2).epsilon(1e-14));
      CHECK(out(6, 5) == 0.0);
    }
    SUBCASE("tumour node decays at xi_d + rho_d") {
      p.D_d = 0.0;
      const ScalarField d(g, FieldKind::Drug, 1.0);
      const std::vector<Point> tum{g.centre(50, 50)};
      const auto out = step_drug(d, tum, {}, 0.0, p, 0.1);
      CHECK(p.xi_d + p.rho_d == doctest::Approx(0.51));
      CHECK(out(50, 50) == doctest::Approx(1.0 - 0.51 * 0.1).epsilon(1e-14));
    }
    CHECK_THROWS_AS(step_drug(ScalarField(g, FieldKind::Drug), {}, {}, -1.0, p, 0.1), InvalidInput);
  }

  TEST_CASE("oxygen step") {
    const GridGeometry g(40);
    ModelParameters p;
    SUBCASE("saturated vessels are a fixed point") {
      p.xi_o = 0.0;
      const ScalarField o(g, FieldKind::Oxygen, 1.0);
      std::vector<Point> all;
      for (int j = 0; j < g.ny(); ++j)
        for (int i = 0; i < g.nx(); ++i) all.push_back(g.centre(i, j));
      const auto out = step_oxygen(o, {}, all, p, 0.1);
      for (double v : out.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("pointwise decay") {
      p.D_o = 0.0;
      const ScalarField o(g, FieldKind::Oxygen, 0.8);
      const auto out = step_oxygen(o, {}, {}, p, 0.1);
      for (double v : out.values) CHECK(v == doctest::Approx(0.8 * (1.0 - p.xi_o * 0.1)).epsilon(1e-14));
    }
    SUBCASE("empty vessel node refills at S_o dt") {
      p.D_o = 0.0;
      p.xi_o = 0.0;
      const ScalarField o(g, FieldKind::Oxygen, 0.0);
      const std::vector<Point> ves{g.centre(10, 10)};
      const auto out = step_oxygen(o, {}, ves, p, 0.1);
      CHECK(out(10, 10) == doctest::Approx(0.35).epsilon(1e-14));
    }
    SUBCASE("uptake overshoot is clamped at zero") {
      p.D_o = 0.0;
      const ScalarField o(g, FieldKind::Oxygen, 0.01);
      const std::vector<UptakeSite> sites{{g.centre(3, 3), 0.57}};
      const auto out = step_oxygen(o, sites, {}, p, 0.1);
      CHECK(out(3, 3) == 0.0);
      CHECK(out.max() <= 1.0);
    }
  }

  TEST_CASE("positivity over random agent layouts") {
    const GridGeometry g(30);
    const ModelParameters p;
    std::mt19937_64 gen(21);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ScalarField c(g, FieldKind::Taf, 0.0), d(g, FieldKind::Drug, 0.0), o(g, FieldKind::Oxygen, 0.2);
    for (int step = 0; step < 50; ++step) {
      std::vector<Point> cells, vessels;
      std::vector<UptakeSite> sites;
      for (int k = 0; k < 40; ++k) {
        cells.push_back({u(gen), u(gen)});
        sites.push_back({cells.back(), 0.57});
      }
      for (int k = 0; k < 5; ++k) vessels.push_back({u(gen), u(gen)});
      c = step_taf(c, cells, vessels, p, 0.1);
      d = step_drug(d, cells, vessels, 10.0, p, 0.1);
      o = step_oxygen(o, sites, vessels, p, 0.1);
      for (std::size_t k = 0; k < g.size(); ++k) {
        REQUIRE(c.values[k] >= 0.0);
        REQUIRE(d.values[k] >= 0.0);
        REQUIRE(o.values[k] >= 0.0);
        REQUIRE(o.values[k] <= 1.0);
      }
    }
  }

  TEST_CASE("move coefficients on a flat field") {
    const GridGeometry g(100);
    const ModelParameters p;
    const ScalarField c(g, FieldKind::Taf, 2.0);
    const auto raw = raw_move_coefficients(c, 40, 40, 0.05, p);
    for (int d = Left; d <= Up; ++d) CHECK(raw.p[d] == doctest::Approx(0.2304).epsilon(1e-12));
    CHECK(raw.p[Stay] == doctest::Approx(0.0784).epsilon(1e-12));
    const auto m = move_coefficients(c, 40, 40, 0.05, p);
    CHECK(m.normalized);
    CHECK_FALSE(m.corrected_x);
    CHECK_FALSE(m.corrected_y);
    for (int d = 0; d < 5; ++d) CHECK(m.p[d] == doctest::Approx(raw.p[d]).epsilon(1e-12));

    ModelParameters no_chemo = p;
    no_chemo.chi0 = 0.0;
    const auto lin = init_linear_taf(5.0, g);
    const auto s = move_coefficients(lin, 10, 70, 0.05, no_chemo);
    CHECK(s.p[Left] == doctest::Approx(s.p[Right]));
    CHECK(s.p[Down] == doctest::Approx(s.p[Up]));
    CHECK(s.p[Left] == doctest::Approx(s.p[Up]));
  }

  TEST_CASE("chemotaxis favours climbing the gradient") {
    const GridGeometry g(100);
    const ModelParameters p;
    const auto c = init_linear_taf(5.0, g);
    const auto m = move_coefficients(c, 50, 50, 0.001, p);
    for (int d = 0; d < 5; ++d)
      if (d != Up && d != Stay) CHECK(m.p[Up] > m.p[d]);
    CHECK(m.p[Left] == doctest::Approx(m.p[Right]));
  }

  TEST_CASE("one-sided correction fires on a steep gradient") {
    const GridGeometry g(100);
    const ModelParameters p;
    ScalarField c(g, FieldKind::Taf);
    for (int j = 0; j < g.ny(); ++j)
      for (int i = 0; i < g.nx(); ++i) c(i, j) = 5.0 * g.centre(i, j).x;
    const double dt = 0.001;
    const auto raw = raw_move_coefficients(c, 50, 50, dt, p);
    REQUIRE(raw.p[Left] < 0.0);
    const auto m = move_coefficients(c, 50, 50, dt, p);
    CHECK(m.corrected_x);
    CHECK_FALSE(m.swapped_x);
    CHECK(m.p[Left] == 0.0);
    // P2 <- P2 - P1, then normalised
    const double total = raw.p[Stay] + (raw.p[Right] - raw.p[Left]) + raw.p[Down] + raw.p[Up];
    CHECK(m.p[Right] == doctest::Approx((raw.p[Right] - raw.p[Left]) / total).epsilon(1e-12));
  }

  TEST_CASE("both-negative pair is swapped") {
    // Unreachable from the stencil with D_n >= 0 (P1 + P2 = 2 D_n dt / dx^2),
    // so the rule is exercised on synthetic raw coefficients.
    MoveCoefficients raw;
    raw.p = {0.5, -0.1, -0.05, 0.2, 0.3};
    const auto m = correct_and_normalize(raw);
    CHECK(m.swapped_x);
    CHECK_FALSE(m.corrected_x);
    const double total = 0.5 + 0.05 + 0.1 + 0.2 + 0.3;
    CHECK(m.p[Left] == doctest::Approx(0.05 / total));
    CHECK(m.p[Right] == doctest::Approx(0.1 / total));

    MoveCoefficients down;
    down.p = {0.5, 0.1, 0.1, -0.2, -0.1};
    const auto md = correct_and_normalize(down);
    CHECK(md.swapped_y);
    CHECK(md.p[Down] == doctest::Approx(0.1));
    CHECK(md.p[Up] == doctest::Approx(0.2));
  }

  TEST_CASE("negative stay coefficient is a step-size violation") {
    const GridGeometry g(100);
    const ModelParameters p;
    const ScalarField c(g, FieldKind::Taf, 1.0);
    CHECK_THROWS_AS(move_coefficients(c, 5, 5, 0.2, p), StepSizeViolation);
    MoveCoefficients raw;
    raw.p = {-0.01, 0.3, 0.3, 0.3, 0.3};
    CHECK_THROWS_AS(correct_and_normalize(raw), StepSizeViolation);
  }

  TEST_CASE("simplex property over random fields") {
    const GridGeometry g(100);
    const ModelParameters p;
    std::mt19937_64 gen(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    ScalarField c(g, FieldKind::Taf);
    int fired = 0;
    for (int trial = 0; trial < 200; ++trial) {
      const double sx = 20.0 * u(gen) - 10.0, sy = 20.0 * u(gen) - 10.0;
      for (int jj = 0; jj < g.ny(); ++jj)
        for (int ii = 0; ii < g.nx(); ++ii) {
          const Point q = g.centre(ii, jj);
          c(ii, jj) = 10.0 + sx * q.x + sy * q.y + 0.001 * u(gen);
        }
      const int i = static_cast<int>(u(gen) * g.nx()), j = static_cast<int>(u(gen) * g.ny());
      const auto raw = raw_move_coefficients(c, i, j, 0.001, p);
      const auto m = move_coefficients(c, i, j, 0.001, p);
      double sum = 0.0;
      for (double v : m.p) {
        REQUIRE(v >= 0.0);
        sum += v;
      }
      REQUIRE(std::abs(sum - 1.0) <= 1e-12);
      const bool all_nonneg = std::all_of(raw.p.begin(), raw.p.end(), [](double v) { return v >= 0.0; });
      if (all_nonneg) REQUIRE_FALSE((m.corrected_x || m.corrected_y || m.swapped_x || m.swapped_y));
      fired += m.corrected_x || m.corrected_y;
    }
    CHECK(fired > 0);
  }

  TEST_CASE("field CSV export") {
    const GridGeometry g(4);
    const auto c = init_linear_taf(5.0, g);
    std::ostringstream os;
    write_field_csv(os, c);
    std::istringstream in(os.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,y,value");
    std::getline(in, line);
    CHECK(line == "0.125,0.125,0.625");
    int rows = 1;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 16);
  }
}
