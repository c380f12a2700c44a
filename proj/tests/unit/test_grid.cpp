#include <doctest.h>

#include <cmath>
#include <set>

#include "hdc/errors.hpp"
#include "hdc/grid.hpp"
#include "hdc/lineage.hpp"
#include "hdc/rng.hpp"

using namespace hdc;

TEST_SUITE("grid") {
  TEST_CASE("cell-centred geometry") {
    const GridGeometry g(100);
    CHECK(g.dx() == doctest::Approx(0.01));
    CHECK(g.size() == 10000);
    CHECK(g.centre(0, 0).x == doctest::Approx(0.005));
    CHECK(g.centre(99, 99).y == doctest::Approx(0.995));
    CHECK(g.square_of({0.0, 0.0}) == NodeIndex{0, 0});
    CHECK(g.square_of({1.0, 1.0}) == NodeIndex{99, 99});
    CHECK(g.square_of({0.0149, 0.7551}) == NodeIndex{1, 75});
    for (std::size_t k : {std::size_t{0}, std::size_t{123}, std::size_t{9999}}) CHECK(g.index(g.node(k)) == k);
    CHECK(g.in_bounds(0, 99));
    CHECK_FALSE(g.in_bounds(-1, 0));
    CHECK_FALSE(g.in_bounds(0, 100));
  }

  TEST_CASE("lattice from the cell radius") {
    CHECK(GridGeometry::from_cell_radius(0.005) == GridGeometry(100));
    CHECK_THROWS_AS(GridGeometry::from_cell_radius(0.003), InvalidInput);
    CHECK_THROWS_AS(GridGeometry::from_cell_radius(0.0), InvalidInput);
    CHECK_THROWS_AS(GridGeometry(2), InvalidInput);
    CHECK_THROWS_AS(GridGeometry(10, 20), InvalidInput);
  }

  TEST_CASE("bilinear sampling") {
    const GridGeometry g(10);
    ScalarField f(g, FieldKind::Oxygen);
    f(3, 4) = 0.0;
    f(4, 4) = 0.0;
    f(3, 5) = 1.0;
    f(4, 5) = 1.0;
    // Corner shared by squares (3,4), (4,4), (3,5), (4,5) is the midpoint of those four nodes.
    CHECK(sample_bilinear(f, {0.4, 0.5}) == doctest::Approx(0.5));
    CHECK(sample_bilinear(f, g.centre(3, 5)) == doctest::Approx(1.0));

    ScalarField lin(g, FieldKind::Taf);
    for (int j = 0; j < 10; ++j)
      for (int i = 0; i < 10; ++i) lin(i, j) = 2.0 * g.centre(i, j).x + 3.0 * g.centre(i, j).y;
    CHECK(sample_bilinear(lin, {0.37, 0.61}) == doctest::Approx(2.0 * 0.37 + 3.0 * 0.61));
    // Constant extrapolation in the wall strip.
    CHECK(sample_bilinear(lin, {0.01, 0.61}) == doctest::Approx(sample_bilinear(lin, {0.05, 0.61})));
  }

  TEST_CASE("field reductions") {
    const GridGeometry g(4);
    ScalarField f(g, FieldKind::Drug, 0.5);
    f(2, 1) = 3.0;
    CHECK(f.sum() == doctest::Approx(15 * 0.5 + 3.0));
    CHECK(f.max() == 3.0);
    CHECK(std::string(to_string(FieldKind::Oxygen)) == "oxygen");
  }

  TEST_CASE("lineage ids") {
    const LineageId root(4);
    const auto a = root.child(1).child(2);
    CHECK(a.str() == "4.1.2");
    CHECK(a.generation() == 2);
    CHECK(LineageId::parse("4.1.2") == a);
    CHECK(root.is_ancestor_of(a));
    CHECK_FALSE(a.is_ancestor_of(a));
    CHECK_FALSE(LineageId(3).is_ancestor_of(a));
    CHECK(root.child(1) < root.child(2));
    CHECK(LineageId(3).child(2) < LineageId(4));
    CHECK_THROWS_AS(root.child(3), InvalidInput);
    CHECK_THROWS_AS(LineageId(0), InvalidInput);
    CHECK_THROWS_AS(LineageId::parse("2.3"), InvalidInput);

    // Descendants of distinct cells never collide.
    std::set<std::string> seen;
    std::vector<LineageId> frontier{LineageId(1), LineageId(2)};
    for (int gen = 0; gen < 8; ++gen) {
      std::vector<LineageId> next;
      for (const auto& id : frontier) {
        CHECK(seen.insert(id.str()).second);
        next.push_back(id.child(1));
        next.push_back(id.child(2));
      }
      frontier = std::move(next);
    }
  }

  TEST_CASE("seeded stream is reproducible") {
    Rng a(42), b(42), c(43);
    bool differs = false;
    for (int k = 0; k < 100; ++k) {
      const double x = a.uniform();
      CHECK(x == b.uniform());
      differs |= x != c.uniform();
      CHECK(x >= 0.0);
      CHECK(x < 1.0);
    }
    CHECK(differs);
    Rng r(7);
    for (int k = 0; k < 1000; ++k) CHECK(r.index(5) < 5);
  }
}
