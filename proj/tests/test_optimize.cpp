#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hopf/ansatz1d.hpp"
#include "hopf/energy.hpp"
#include "hopf/field.hpp"
#include "hopf/lattice.hpp"
#include "hopf/optimize.hpp"

using namespace hopf;

TEST_CASE("line search: zero and ascent directions give step 0") {
  ManifoldSpec s{Manifold::T2, {16, 16}, {}, {}};
  LatticeGeometry g = build_geometry(s);
  Field f = perturb(init_baby_t2(s), 0.05, 3);
  std::vector<double> zero(f.data.size(), 0.0);
  CHECK(line_search(f, g, zero, 0.0, 1.0) == 0.0);
  // ascent: along +gradient
  std::vector<double> up = gradient(f, g, 0.0);
  CHECK(line_search(f, g, up, 0.0, 1.0) == 0.0);
}

TEST_CASE("line search: steepest descent at a perturbed minimum decreases E") {
  ManifoldSpec s{Manifold::T2, {16, 16}, {}, {}};
  LatticeGeometry g = build_geometry(s);
  Field f = perturb(init_baby_t2(s), 0.05, 3);
  std::vector<double> d = gradient(f, g, 0.0);
  for (auto& x : d) x = -x;
  double E0 = energy_e4_value(f, g);
  double step = line_search(f, g, d, 0.0, 0.1);
  CHECK(step > 0.0);
  Field t = f;
  for (std::int64_t site = 0; site < f.n_sites(); ++site) {
    Vec3 phi = f.get(site);
    Vec3 v;
    for (int c = 0; c < 3; ++c) v[c] = phi[c] + step * d[3 * site + c];
    t.set(site, normalized(v));
  }
  CHECK(energy_e4_value(t, g) < E0);
}

TEST_CASE("relax from the exact Hopf construction stays put") {
  ManifoldSpec s{Manifold::S3, {16, 16, 16}, {}, {}};
  LatticeGeometry g = build_geometry(s);
  RelaxConfig cfg;
  cfg.beta_stages = 1;  // straight to beta = 0
  cfg.grad_tol = 1e-7;
  cfg.max_iters = 300;
  RelaxResult res = relax(init_amn(s, 1, 1), g, cfg);
  CHECK(res.converged);
  CHECK_FALSE(res.discontinuous);
  CHECK(res.iterations < 100);
  CHECK(res.final_report.E4 == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("relaxed iterates stay exactly unit norm") {
  ManifoldSpec s{Manifold::T2, {12, 12}, {}, {}};
  LatticeGeometry g = build_geometry(s);
  RelaxConfig cfg;
  cfg.max_iters = 50;
  cfg.beta_stages = 2;
  RelaxResult res = relax(perturb(init_baby_t2(s), 0.1, 5), g, cfg);
  for (std::int64_t site = 0; site < res.field.n_sites(); ++site) {
    Vec3 v = res.field.get(site);
    CHECK(std::abs(dot(v, v) - 1.0) < 1e-14);
  }
}

TEST_CASE("2D relaxation never goes below the topological bound") {
  // beta = 0 from the start on the exact degree-2 solution
  ManifoldSpec s{Manifold::T2, {32, 32}, {}, {}};
  LatticeGeometry g = build_geometry(s);
  RelaxConfig cfg;
  cfg.beta_stages = 1;
  cfg.grad_tol = 1e-9;
  cfg.max_iters = 2000;
  RelaxResult res = relax(init_baby_t2(s), g, cfg);
  CHECK_FALSE(res.discontinuous);
  CHECK(res.final_report.E4 >= 4.0 - 0.05);
  for (const TraceRow& r : res.trace) CHECK(r.E4 >= 4.0 - 0.05);
}

TEST_CASE("trace: E4 + beta E2 non-increasing within each stage") {
  ManifoldSpec s{Manifold::T2, {16, 16}, {}, {}};
  LatticeGeometry g = build_geometry(s);
  RelaxConfig cfg;
  cfg.beta_stages = 4;
  cfg.max_iters = 120;
  RelaxResult res = relax(perturb(init_baby_t2(s), 0.15, 11), g, cfg);
  std::vector<double> betas = {cfg.beta0, cfg.beta0 * cfg.beta_decay,
                               cfg.beta0 * cfg.beta_decay * cfg.beta_decay,
                               0.0};
  for (size_t i = 1; i < res.trace.size(); ++i) {
    const TraceRow& a = res.trace[i - 1];
    const TraceRow& b = res.trace[i];
    if (a.stage != b.stage) continue;
    double beta = betas[size_t(b.stage)];
    CHECK(b.E4 + beta * b.E2 <= a.E4 + beta * a.E2 + 1e-10);
  }
}

TEST_CASE("relaxation is deterministic: identical runs, identical traces") {
  ManifoldSpec s{Manifold::T2, {12, 12}, {}, {}};
  LatticeGeometry g = build_geometry(s);
  RelaxConfig cfg;
  cfg.max_iters = 60;
  cfg.beta_stages = 3;
  Field f = perturb(init_baby_t2(s), 0.1, 21);
  RelaxResult a = relax(f, g, cfg);
  RelaxResult b = relax(f, g, cfg);
  REQUIRE(a.trace.size() == b.trace.size());
  for (size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].E4 == b.trace[i].E4);
    CHECK(a.trace[i].E2 == b.trace[i].E2);
    CHECK(a.trace[i].grad_norm == b.trace[i].grad_norm);
  }
  CHECK(a.field.data == b.field.data);
}

TEST_CASE("degree-1 field on T2 spreads out and trips the tripwire") {
  ManifoldSpec s{Manifold::T2, {48, 48}, {}, {}};
  LatticeGeometry g = build_geometry(s);
  RelaxConfig cfg;
  cfg.grad_tol = 1e-9;
  cfg.max_iters = 3000;
  RelaxResult res = relax(init_baby_t2_q1(s), g, cfg);
  CHECK(res.discontinuous);
  CHECK_FALSE(res.converged);
}

TEST_CASE("degree-2 field on T2 relaxes without losing continuity") {
  ManifoldSpec s{Manifold::T2, {48, 48}, {}, {}};
  LatticeGeometry g = build_geometry(s);
  RelaxConfig cfg;
  cfg.grad_tol = 1e-6;
  cfg.max_iters = 3000;
  RelaxResult res = relax(perturb(init_baby_t2(s), 0.05, 17), g, cfg);
  CHECK_FALSE(res.discontinuous);
  CHECK(res.final_report.E4 == doctest::Approx(4.0).epsilon(0.01));
}

TEST_CASE("perturbed A21 relaxes back to the symmetric energy (small grid)") {
  ManifoldSpec s{Manifold::S3, {20, 20, 20}, {}, {}};
  LatticeGeometry g = build_geometry(s);
  RelaxConfig cfg;
  cfg.grad_tol = 5e-7;
  cfg.max_iters = 2000;
  RelaxResult res = relax(perturb(init_amn(s, 2, 1), 0.1, 12345), g, cfg);
  CHECK_FALSE(res.discontinuous);
  CHECK(res.final_report.E4 / 2 == doctest::Approx(1.0820).epsilon(0.02));
}
