#include "hopf/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "hopf/lattice.hpp"

namespace hopf {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Diagonal metric data at a point, parametrized by the one coordinate the
// metrics depend on (r on S3, theta on S2(xS1); flat otherwise).
struct MetricPoint {
  std::array<double, 3> g_inv{1, 1, 1};  // g^{mumu}
  double sqrt_g = 1;
};

MetricPoint metric_at(const ManifoldSpec& spec, double c0) {
  MetricPoint m;
  switch (spec.kind) {
    case Manifold::S3: {
      double cr = std::cos(c0), sr = std::sin(c0);
      m.g_inv = {1.0, 1.0 / (cr * cr), 1.0 / (sr * sr)};
      m.sqrt_g = cr * sr;
      break;
    }
    case Manifold::S2xS1: {
      double L = *spec.L;
      double st = std::sin(c0);
      m.g_inv = {1.0 / (L * L), 1.0 / (L * L * st * st), 1.0};
      m.sqrt_g = L * L * st;
      break;
    }
    case Manifold::S2: {
      double st = std::sin(c0);
      m.g_inv = {1.0, 1.0 / (st * st), 1.0};
      m.sqrt_g = st;
      break;
    }
    case Manifold::T3:
    case Manifold::T2:
      break;  // identity metric
  }
  return m;
}

}  // namespace

double normalization_kappa(const ManifoldSpec& spec) {
  spec.validate();
  const double pref = 32.0 * kPi * kPi;
  switch (spec.kind) {
    case Manifold::S3:
      return 1.0 / (pref * 2.0);  // lambda = 4
    case Manifold::T3: {
      // lambda = (2pi / longest period)^2; kappa scales with the longest
      // period so a common rescaling of all periods leaves E unchanged.
      double pmax = 0;
      for (int a = 0; a < 3; ++a) pmax = std::max(pmax, spec.period_factor(a));
      return pmax / pref;
    }
    case Manifold::S2xS1:
      return *spec.L / (pref * std::sqrt(2.0));  // lambda = 2/L^2
    case Manifold::S2:
      return 4.0 * kPi / pref;
    case Manifold::T2: {
      double V = 4.0 * kPi * kPi * spec.period_factor(0) * spec.period_factor(1);
      return V / pref;
    }
  }
  throw std::logic_error("unreachable");
}

int LatticeGeometry::span(int axis) const {
  return periodic[size_t(axis)] ? spec.dims[size_t(axis)]
                                : spec.dims[size_t(axis)] - 1;
}

LatticeGeometry build_geometry(const ManifoldSpec& spec) {
  spec.validate();
  LatticeGeometry g;
  g.spec = spec;
  const int rank = spec.rank();

  // Coordinate ranges: staggered grids in the non-periodic coordinate keep
  // every site off the r=0, pi/2 circles of S3 and the poles of S2.
  for (int a = 0; a < 3; ++a) {
    int n = a < rank ? spec.dims[size_t(a)] : 1;
    double extent = 2.0 * kPi;
    bool per = true;
    if ((spec.kind == Manifold::S3 && a == 0)) {
      extent = kPi / 2.0;
      per = false;
    } else if ((spec.kind == Manifold::S2xS1 || spec.kind == Manifold::S2) &&
               a == 0) {
      extent = kPi;
      per = false;
    } else if (manifold_is_flat(spec.kind) && a < rank) {
      extent = 2.0 * kPi * spec.period_factor(a);
    }
    double h = extent / n;
    g.h[size_t(a)] = a < rank ? h : 1.0;
    g.periodic[size_t(a)] = per;
    g.coord[size_t(a)].resize(size_t(n));
    for (int i = 0; i < n; ++i)
      g.coord[size_t(a)][size_t(i)] = per ? i * h : (i + 0.5) * h;
  }

  g.kappa = normalization_kappa(spec);
  switch (spec.kind) {
    case Manifold::S3: g.lambda = 4.0; break;
    case Manifold::T3: {
      double pmax = 0;
      for (int a = 0; a < 3; ++a) pmax = std::max(pmax, spec.period_factor(a));
      g.lambda = 1.0 / (pmax * pmax);
      break;
    }
    case Manifold::S2xS1: g.lambda = 2.0 / (*spec.L * *spec.L); break;
    default: g.lambda = 0.0; break;
  }

  Indexer idx(spec);
  const double h_all = g.h[0] * g.h[1] * (rank == 3 ? g.h[2] : 1.0);

  // Site-centered cell volumes (midpoint rule on an exact tiling).
  g.cell_volume.resize(size_t(idx.size()));
  g.volume = 0;
  for (std::int64_t s = 0; s < idx.size(); ++s) {
    auto c = idx.coords(s);
    double vol = metric_at(spec, g.coord[0][size_t(c[0])]).sqrt_g * h_all;
    g.cell_volume[size_t(s)] = vol;
    g.volume += vol;
  }

  // E2 link coefficients g^{mumu} sqrt(g) h1h2h3 / h_mu^2 at link midpoints.
  for (int a = 0; a < rank; ++a) {
    g.e2_coeff[size_t(a)].resize(size_t(idx.size()));
    for (std::int64_t s = 0; s < idx.size(); ++s) {
      auto c = idx.coords(s);
      double c0 = g.coord[0][size_t(c[0])];
      if (a == 0 && !g.periodic[0]) c0 += 0.5 * g.h[0];  // midpoint in r/theta
      MetricPoint m = metric_at(spec, c0);
      g.e2_coeff[size_t(a)][size_t(s)] =
          m.g_inv[size_t(a)] * m.sqrt_g * h_all / (g.h[size_t(a)] * g.h[size_t(a)]);
    }
  }

  // Plaquette coefficient tables, one block per orientation pair mu < nu.
  // A plaquette with signed target area W contributes C * W^2 to the energy:
  //   3D: C = 2 kappa g^{mumu} g^{nunu} sqrt(g) h1h2h3 / (h_mu h_nu)^2
  //   2D: C = 2 (V/32pi^2) / (sqrt(g) h1 h2)
  const int n_pairs = rank == 3 ? 3 : 1;
  static const int pair_mu[3] = {0, 0, 1};
  static const int pair_nu[3] = {1, 2, 2};
  for (int p = 0; p < n_pairs; ++p) {
    PlaquetteBlock blk;
    blk.mu = pair_mu[p];
    blk.nu = pair_nu[p];
    for (int a = 0; a < 3; ++a) {
      int n = a < rank ? spec.dims[size_t(a)] : 1;
      blk.dims[size_t(a)] =
          (a == blk.mu || a == blk.nu) ? (a < rank ? g.span(a) : 1) : n;
    }
    blk.coeff.resize(size_t(blk.count()));
    blk.inv_measure.resize(size_t(blk.count()));
    Indexer bidx(blk.dims[0], blk.dims[1], blk.dims[2]);
    for (std::int64_t q = 0; q < bidx.size(); ++q) {
      auto c = bidx.coords(q);
      double c0 = g.coord[0][size_t(c[0])];
      bool mid0 = (blk.mu == 0 && !g.periodic[0]);
      if (mid0) c0 += 0.5 * g.h[0];
      MetricPoint m = metric_at(spec, c0);
      double hmn = g.h[size_t(blk.mu)] * g.h[size_t(blk.nu)];
      double C;
      if (rank == 3) {
        C = 2.0 * g.kappa * m.g_inv[size_t(blk.mu)] * m.g_inv[size_t(blk.nu)] *
            m.sqrt_g * h_all / (hmn * hmn);
      } else {
        C = 2.0 * g.kappa / (m.sqrt_g * hmn);
      }
      blk.coeff[size_t(q)] = C;
      blk.inv_measure[size_t(q)] = 1.0 / (m.sqrt_g * h_all);
    }
    g.plaq.push_back(std::move(blk));
  }

  // Boundary caps.  Which coordinate circle degenerates at each end:
  //   S3:    r=0 -> t collapses;  r=pi/2 -> s collapses
  //   S2xS1: theta=0, pi -> a collapses (vary chi)
  //   S2:    theta=0, pi -> a collapses (single virtual point)
  if (!g.periodic[0]) {
    for (int side = 0; side < 2; ++side) {
      int degen;
      if (spec.kind == Manifold::S3)
        degen = side == 0 ? 2 : 1;
      else
        degen = 1;
      int vary = rank == 3 ? 3 - degen : 2;
      double extent = spec.kind == Manifold::S3 ? kPi / 2.0 : kPi;
      double c_cap = side == 0 ? 0.25 * g.h[0] : extent - 0.25 * g.h[0];
      double h_eff = 0.5 * g.h[0];
      MetricPoint m = metric_at(spec, c_cap);
      for (int nu = 1; nu < rank; ++nu) {
        CapBlock cap;
        cap.side = side;
        cap.nu = nu;
        cap.degen = degen;
        cap.vary = vary;
        double measure = m.sqrt_g * h_eff * g.h[1] * (rank == 3 ? g.h[2] : 1.0);
        double hmn = h_eff * g.h[size_t(nu)];
        if (rank == 3) {
          cap.coeff = 2.0 * g.kappa * m.g_inv[0] * m.g_inv[size_t(nu)] *
                      measure / (hmn * hmn);
        } else {
          cap.coeff = 2.0 * g.kappa / (m.sqrt_g * hmn);
        }
        cap.inv_measure = 1.0 / (m.sqrt_g * h_eff * g.h[1] *
                                 (rank == 3 ? g.h[2] : 1.0));
        g.caps.push_back(cap);
      }
    }
  }
  return g;
}

}  // namespace hopf
