#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hopf/energy.hpp"
#include "hopf/field.hpp"
#include "hopf/geometry.hpp"

using namespace hopf;

static constexpr double PI = 3.14159265358979323846;

TEST_CASE("spec validation") {
  ManifoldSpec s{Manifold::T3, {16, 16, 16}, {}, {}};
  CHECK_NOTHROW(s.validate());
  s.dims = {3, 16, 16};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);
  s.dims = {16, 16};
  CHECK_THROWS_AS(s.validate(), std::invalid_argument);

  ManifoldSpec prod{Manifold::S2xS1, {16, 16, 16}, {}, {}};
  CHECK_THROWS_AS(prod.validate(), std::invalid_argument);  // L required
  prod.L = 1.51;
  CHECK_NOTHROW(prod.validate());

  ManifoldSpec s3{Manifold::S3, {16, 16, 16}, 2.0, {}};
  CHECK_THROWS_AS(s3.validate(), std::invalid_argument);  // L only on s2s1

  ManifoldSpec t2{Manifold::T2, {16, 16}, {}, {1.0, 1.5}};
  CHECK_THROWS_AS(t2.validate(), std::invalid_argument);  // period > 1
  t2.periods = {1.0, 0.9};
  CHECK_NOTHROW(t2.validate());
  ManifoldSpec s2p{Manifold::S2, {16, 16}, {}, {1.0, 1.0}};
  CHECK_THROWS_AS(s2p.validate(), std::invalid_argument);  // periods on curved
}

TEST_CASE("flat torus spacings and volume") {
  ManifoldSpec s{Manifold::T3, {16, 16, 16}, {}, {}};
  LatticeGeometry g = build_geometry(s);
  double h = 2 * PI / 16;
  CHECK(g.h[0] == doctest::Approx(h).epsilon(1e-14));
  CHECK(g.h[1] == doctest::Approx(h).epsilon(1e-14));
  for (double w : g.cell_volume)
    CHECK(w == doctest::Approx(h * h * h).epsilon(1e-14));
  CHECK(g.volume ==
        doctest::Approx(8 * PI * PI * PI).epsilon(1e-12));
}

TEST_CASE("curved volumes converge to the analytic values") {
  ManifoldSpec s3{Manifold::S3, {32, 32, 32}, {}, {}};
  CHECK(build_geometry(s3).volume ==
        doctest::Approx(2 * PI * PI).epsilon(1e-3));

  ManifoldSpec s2{Manifold::S2, {32, 32}, {}, {}};
  CHECK(build_geometry(s2).volume == doctest::Approx(4 * PI).epsilon(1e-3));

  ManifoldSpec t2{Manifold::T2, {32, 32}, {}, {}};
  CHECK(build_geometry(t2).volume ==
        doctest::Approx(4 * PI * PI).epsilon(1e-12));

  ManifoldSpec prod{Manifold::S2xS1, {32, 32, 32}, 1.51, {}};
  CHECK(build_geometry(prod).volume ==
        doctest::Approx(8 * PI * PI * 1.51 * 1.51).epsilon(1e-3));
}

TEST_CASE("normalization constants") {
  double pref = 32 * PI * PI;
  ManifoldSpec t3{Manifold::T3, {8, 8, 8}, {}, {}};
  CHECK(normalization_kappa(t3) == doctest::Approx(1.0 / pref).epsilon(1e-14));
  ManifoldSpec s3{Manifold::S3, {8, 8, 8}, {}, {}};
  CHECK(normalization_kappa(s3) ==
        doctest::Approx(1.0 / (64 * PI * PI)).epsilon(1e-14));
  ManifoldSpec prod{Manifold::S2xS1, {8, 8, 8}, 2.0, {}};
  CHECK(normalization_kappa(prod) ==
        doctest::Approx(2.0 / (pref * std::sqrt(2.0))).epsilon(1e-14));
  ManifoldSpec s2{Manifold::S2, {8, 8}, {}, {}};
  CHECK(normalization_kappa(s2) ==
        doctest::Approx(4 * PI / pref).epsilon(1e-14));
  ManifoldSpec t2{Manifold::T2, {8, 8}, {}, {0.5, 1.0}};
  CHECK(normalization_kappa(t2) ==
        doctest::Approx(4 * PI * PI * 0.5 / pref).epsilon(1e-14));
}

TEST_CASE("staggered grids avoid coordinate singularities") {
  ManifoldSpec s3{Manifold::S3, {16, 16, 16}, {}, {}};
  LatticeGeometry g = build_geometry(s3);
  CHECK(g.coord[0].front() == doctest::Approx(0.5 * g.h[0]));
  CHECK(g.coord[0].back() == doctest::Approx(PI / 2 - 0.5 * g.h[0]));
  for (double r : g.coord[0]) {
    CHECK(r > 0.0);
    CHECK(r < PI / 2);
  }
  ManifoldSpec s2{Manifold::S2, {16, 16}, {}, {}};
  LatticeGeometry g2 = build_geometry(s2);
  for (double th : g2.coord[0]) {
    CHECK(th > 0.0);
    CHECK(th < PI);
  }
}

TEST_CASE("plaquette enumeration covers each oriented 2-cell once") {
  ManifoldSpec s3{Manifold::S3, {8, 10, 12}, {}, {}};
  LatticeGeometry g = build_geometry(s3);
  REQUIRE(g.plaq.size() == 3);
  // pairs (0,1), (0,2): the open r direction spans N-1; (1,2) spans N
  CHECK(g.plaq[0].count() == (8 - 1) * 10 * 12);
  CHECK(g.plaq[1].count() == (8 - 1) * 10 * 12);
  CHECK(g.plaq[2].count() == 8 * 10 * 12);
  // plus the zero-width boundary closures at both r ends
  CHECK(g.caps.size() == 4);

  ManifoldSpec t3{Manifold::T3, {8, 10, 12}, {}, {}};
  LatticeGeometry gt = build_geometry(t3);
  for (const auto& blk : gt.plaq) CHECK(blk.count() == 8 * 10 * 12);
  CHECK(gt.caps.empty());

  ManifoldSpec t2{Manifold::T2, {8, 10}, {}, {}};
  LatticeGeometry g2 = build_geometry(t2);
  REQUIRE(g2.plaq.size() == 1);
  CHECK(g2.plaq[0].count() == 8 * 10);
}

TEST_CASE("all weights positive") {
  for (ManifoldSpec s :
       {ManifoldSpec{Manifold::S3, {8, 8, 8}, {}, {}},
        ManifoldSpec{Manifold::S2xS1, {8, 8, 8}, 1.0, {}},
        ManifoldSpec{Manifold::S2, {8, 8}, {}, {}}}) {
    LatticeGeometry g = build_geometry(s);
    for (double w : g.cell_volume) CHECK(w > 0.0);
    for (const auto& blk : g.plaq)
      for (double c : blk.coeff) CHECK(c > 0.0);
    for (const auto& cap : g.caps) CHECK(cap.coeff > 0.0);
  }
}

TEST_CASE("common period rescaling leaves the normalized energy unchanged") {
  // transported field: same site values, all periods scaled by 0.8
  ManifoldSpec a{Manifold::T3, {12, 12, 12}, {}, {}};
  ManifoldSpec b{Manifold::T3, {12, 12, 12}, {}, {0.8, 0.8, 0.8}};
  Field fa = init_t3_vav(a, 1);
  Field fb = fa;
  fb.spec = b;
  double Ea = energy_e4_value(fa, build_geometry(a));
  double Eb = energy_e4_value(fb, build_geometry(b));
  CHECK(Ea == doctest::Approx(Eb).epsilon(1e-12));
}
