#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hopf/ansatz1d.hpp"
#include "hopf/energy.hpp"
#include "hopf/field.hpp"
#include "hopf/geometry.hpp"

using namespace hopf;

static constexpr double PI = 3.14159265358979323846;

// closed-form minimum of the reduced VAV functional at fixed L, obtained by
// the substitution u = 1 - cos f (the minimizer makes u' proportional to
// 1/G): E_min(L) = sqrt(2) sqrt(1+L^2) / artanh(L/sqrt(1+L^2)).
static double vav_closed_form(double L) {
  double s = std::sqrt(1.0 + L * L);
  return std::sqrt(2.0) * s / std::atanh(L / s);
}

TEST_CASE("closed-form A_mn energies reproduce the 4-digit values") {
  CHECK(std::abs(amn_energy_formula(2, 1) / 2 - 1.0820) < 5e-5);
  CHECK(std::abs(amn_energy_formula(3, 2) / 6 - 1.0276) < 5e-5);
  CHECK(std::abs(amn_energy_formula(4, 3) / 12 - 1.0139) < 5e-5);
  CHECK(std::abs(amn_energy_formula(3, 1) / 3 - 1.2137) < 5e-5);
  // equivalent closed form (m^2-n^2)/(2 log(m/n))
  for (int m = 1; m <= 5; ++m)
    for (int n = 1; n <= 5; ++n) {
      double expect = m == n ? double(m) * n
                             : (double(m) * m - double(n) * n) /
                                   (2.0 * std::log(double(m) / n));
      CHECK(amn_energy_formula(m, n) ==
            doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("A_mn formula: symmetry and lower bound") {
  for (int m = 1; m <= 6; ++m)
    for (int n = 1; n <= 6; ++n) {
      CHECK(amn_energy_formula(m, n) ==
            doctest::Approx(amn_energy_formula(n, m)).epsilon(1e-12));
      double e = amn_energy_formula(m, n);
      if (m == n)
        CHECK(e == doctest::Approx(double(m) * n));
      else
        CHECK(e > double(m) * n);
    }
}

TEST_CASE("A_11 profile minimization recovers alpha = 2r") {
  ProfileSolution sol = amn_profile_minimize(1, 1, 256);
  CHECK(std::abs(sol.energy - 1.0) < 1e-4);
  for (size_t i = 0; i < sol.grid.size(); ++i)
    CHECK(std::abs(sol.f[i] - 2.0 * sol.grid[i]) < 2e-3);
  CHECK(sol.monotone);
}

TEST_CASE("A_mn profile minimization matches the closed form") {
  for (auto [m, n] : {std::pair{2, 1}, {3, 2}, {4, 3}, {3, 1}}) {
    ProfileSolution sol = amn_profile_minimize(m, n, 512);
    double expect = amn_energy_formula(m, n);
    CHECK(std::abs(sol.energy - expect) / expect < 3e-3);
  }
}

TEST_CASE("A_mn minimized energy approaches the formula from above") {
  double expect = amn_energy_formula(3, 2);
  double e128 = amn_profile_minimize(3, 2, 128).energy;
  double e512 = amn_profile_minimize(3, 2, 512).energy;
  CHECK(e128 > expect - 1e-6);
  CHECK(std::abs(e512 - expect) < std::abs(e128 - expect) + 1e-9);
}

TEST_CASE("reduced VAV energy of the linear profile") {
  // E[2 theta] = (1/sqrt(2)) (8/(3L) + 16 L/15), by direct quadrature
  ProfileSolution lin;
  int n = 512;
  lin.grid.resize(size_t(n + 1));
  lin.f.resize(size_t(n + 1));
  for (int i = 0; i <= n; ++i) {
    lin.grid[size_t(i)] = PI * i / n;
    lin.f[size_t(i)] = 2.0 * lin.grid[size_t(i)];
  }
  double L = 1.51;
  double expect = (8.0 / (3 * L) + 16.0 * L / 15) / std::sqrt(2.0);
  double got = vav_energy(lin, L);
  CHECK(got == doctest::Approx(expect).epsilon(1e-4));
  CHECK(got > 2.134);
}

TEST_CASE("vav_energy rejects profiles violating the boundary conditions") {
  ProfileSolution bad;
  bad.grid = {0.0, PI / 2, PI};
  bad.f = {0.0, PI / 2, 2 * PI};  // f(pi/2) != pi
  CHECK_THROWS(vav_energy(bad, 1.5));
}

TEST_CASE("vav minimization at fixed L hits the closed form") {
  for (double L : {1.0, 1.51, 2.0}) {
    ProfileSolution sol = vav_minimize(256, L);
    CHECK(sol.energy == doctest::Approx(vav_closed_form(L)).epsilon(1e-3));
    CHECK(sol.monotone);
  }
}

TEST_CASE("vav auto-L optimum near L = 1.509") {
  ProfileSolution sol = vav_minimize(256, 0.0, true);
  // exact optimum: L* = sinh(u*) with u* tanh(u*) = 1, E* = sqrt(2) L*
  CHECK(std::abs(sol.L - 1.50888) < 0.02);
  CHECK(sol.energy == doctest::Approx(std::sqrt(2.0) * 1.50888).epsilon(2e-3));
  // a fixed non-optimal L is strictly worse
  CHECK(vav_minimize(256, 1.0).energy > sol.energy + 1e-3);
}

TEST_CASE("vav energy refinement: small change, no increase") {
  double e128 = vav_minimize(128, 1.51).energy;
  double e256 = vav_minimize(256, 1.51).energy;
  CHECK(std::abs(e256 - e128) / e128 < 1e-3);
  CHECK(e256 <= e128 + 1e-9);
}

TEST_CASE("reduced VAV energy is consistent with the 3D lattice energy") {
  ProfileSolution sol = vav_minimize(256, 1.51);
  ManifoldSpec spec{Manifold::S2xS1, {48, 48, 48}, 1.51, {}};
  double E3 = energy_e4_value(init_vav_s2s1(spec, sol), build_geometry(spec));
  CHECK(E3 == doctest::Approx(sol.energy).epsilon(5e-3));

  // and for a non-optimal admissible profile
  ProfileSolution lin;
  int n = 256;
  lin.grid.resize(size_t(n + 1));
  lin.f.resize(size_t(n + 1));
  for (int i = 0; i <= n; ++i) {
    lin.grid[size_t(i)] = PI * i / n;
    lin.f[size_t(i)] = 2.0 * lin.grid[size_t(i)];
  }
  double E3lin = energy_e4_value(init_vav_s2s1(spec, lin), build_geometry(spec));
  CHECK(E3lin == doctest::Approx(vav_energy(lin, 1.51)).epsilon(5e-3));
}

TEST_CASE("optimal-profile A_32 field reaches the formula energy in 3D") {
  ProfileSolution prof = amn_profile_minimize(3, 2, 512);
  ManifoldSpec spec{Manifold::S3, {32, 32, 32}, {}, {}};
  double E3 = energy_e4_value(init_amn(spec, 3, 2, &prof), build_geometry(spec));
  CHECK(E3 == doctest::Approx(1.0276 * 6).epsilon(0.01));
}

TEST_CASE("topological lower bounds") {
  ManifoldSpec s3{Manifold::S3, {8, 8, 8}, {}, {}};
  CHECK(bound_value(s3, 6) == 6.0);
  CHECK(bound_value(s3, -6) == 6.0);
  ManifoldSpec t2{Manifold::T2, {8, 8}, {}, {}};
  CHECK(bound_value(t2, 2) == 4.0);
  ManifoldSpec ps{Manifold::S2xS1, {8, 8, 8}, 1.51, {}};
  CHECK(bound_value(ps, 2) == 2.0);
}
