#include "hopf/energy.hpp"

#include <cmath>

#include "hopf/lattice.hpp"

namespace hopf {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kE2Norm = 1.0 / (32.0 * kPi * kPi);
constexpr double kAntipodalTol = 1e-9;   // 1 + a.b below this -> degenerate
constexpr double kAtanFloor = 1e-28;     // s^2 + c0^2 floor

inline void check_pair(const Vec3& a, const Vec3& b) {
  if (1.0 + dot(a, b) < kAntipodalTol) throw IllConditionedPlaquette();
}

// Signed area of the spherical triangle (a,b,c):
//   2 atan2(a.(b x c), 1 + a.b + b.c + c.a).
inline double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  double s = dot(a, cross(b, c));
  double c0 = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
  if (s * s + c0 * c0 < kAtanFloor) throw IllConditionedPlaquette();
  return 2.0 * std::atan2(s, c0);
}

// d(area)/d(a,b,c) for the triangle above.
inline void triangle_area_grad(const Vec3& a, const Vec3& b, const Vec3& c,
                               Vec3& da, Vec3& db, Vec3& dc) {
  double s = dot(a, cross(b, c));
  double c0 = 1.0 + dot(a, b) + dot(b, c) + dot(c, a);
  double denom = s * s + c0 * c0;
  if (denom < kAtanFloor) throw IllConditionedPlaquette();
  double ws = 2.0 * c0 / denom, wc = 2.0 * s / denom;
  Vec3 bc = cross(b, c), ca = cross(c, a), ab = cross(a, b);
  for (int d = 0; d < 3; ++d) {
    da[d] = ws * bc[d] - wc * (b[d] + c[d]);
    db[d] = ws * ca[d] - wc * (c[d] + a[d]);
    dc[d] = ws * ab[d] - wc * (a[d] + b[d]);
  }
}

inline double quad_area(const Vec3& v1, const Vec3& v2, const Vec3& v3,
                        const Vec3& v4) {
  check_pair(v1, v2);
  check_pair(v2, v3);
  check_pair(v3, v4);
  check_pair(v4, v1);
  check_pair(v1, v3);  // split diagonal
  return triangle_area(v1, v2, v3) + triangle_area(v1, v3, v4);
}

inline void quad_area_grad(const Vec3& v1, const Vec3& v2, const Vec3& v3,
                           const Vec3& v4, Vec3& g1, Vec3& g2, Vec3& g3,
                           Vec3& g4) {
  Vec3 e1, e3;
  triangle_area_grad(v1, v2, v3, g1, g2, g3);
  triangle_area_grad(v1, v3, v4, e1, e3, g4);
  for (int d = 0; d < 3; ++d) {
    g1[d] += e1[d];
    g3[d] += e3[d];
  }
}

inline Vec3 slerp_mid(const Vec3& a, const Vec3& b) {
  return normalized({a[0] + b[0], a[1] + b[1], a[2] + b[2]});
}

// Richardson-extrapolated plaquette area: the coarse quad against the sum of
// its four slerp-subdivided quarters (half the step), eliminating the O(h^2)
// term.  Used for the density diagnostic only; the energy itself is the
// plain plaquette sum.
double plaquette_area_rich(const Vec3& v1, const Vec3& v2, const Vec3& v3,
                           const Vec3& v4) {
  double coarse = triangle_area(v1, v2, v3) + triangle_area(v1, v3, v4);
  Vec3 m12 = slerp_mid(v1, v2), m23 = slerp_mid(v2, v3);
  Vec3 m34 = slerp_mid(v3, v4), m41 = slerp_mid(v4, v1);
  Vec3 c = normalized(
      {v1[0] + v2[0] + v3[0] + v4[0], v1[1] + v2[1] + v3[1] + v4[1],
       v1[2] + v2[2] + v3[2] + v4[2]});
  double fine = triangle_area(v1, m12, c) + triangle_area(v1, c, m41) +
                triangle_area(m12, v2, m23) + triangle_area(m12, m23, c) +
                triangle_area(c, m23, v3) + triangle_area(c, v3, m34) +
                triangle_area(m41, c, m34) + triangle_area(m41, m34, v4);
  return fine + (fine - coarse) / 3.0;
}

// Plaquette traversal: fetch the 4 corner site indices of the plaquette with
// base coords (i,j,k) in block blk.
struct PlaquetteWalk {
  Indexer sites;
  explicit PlaquetteWalk(const ManifoldSpec& spec) : sites(spec) {}

  void corners(const PlaquetteBlock& blk, int i, int j, int k,
               std::int64_t out[4]) const {
    std::array<int, 3> c{i, j, k};
    std::array<int, 3> cm = c, cn = c, cmn = c;
    cm[size_t(blk.mu)] = sites.wrap(blk.mu, c[size_t(blk.mu)] + 1);
    cn[size_t(blk.nu)] = sites.wrap(blk.nu, c[size_t(blk.nu)] + 1);
    cmn[size_t(blk.mu)] = cm[size_t(blk.mu)];
    cmn[size_t(blk.nu)] = cn[size_t(blk.nu)];
    out[0] = sites.at(c[0], c[1], c[2]);
    out[1] = sites.at(cm[0], cm[1], cm[2]);
    out[2] = sites.at(cmn[0], cmn[1], cmn[2]);
    out[3] = sites.at(cn[0], cn[1], cn[2]);
  }
};

// Virtual boundary sites: at each non-periodic end the collapsing coordinate
// circle is identified to the normalized mean of the adjacent lattice row.
struct VirtualBoundary {
  bool active = false;
  // [side]: values indexed along the vary axis (single entry in 2D)
  std::array<std::vector<Vec3>, 2> value;
  std::array<std::vector<Vec3>, 2> mean;  // unnormalized (for the chain rule)
};

VirtualBoundary compute_virtual(const Field& field,
                                const LatticeGeometry& geom) {
  VirtualBoundary vb;
  if (geom.caps.empty()) return vb;
  vb.active = true;
  Indexer idx(field.spec);
  const int rank = geom.rank();
  for (int side = 0; side < 2; ++side) {
    // all caps of one side share degen/vary; fetch them from any entry
    const CapBlock* c0 = nullptr;
    for (const CapBlock& c : geom.caps)
      if (c.side == side) { c0 = &c; break; }
    if (!c0) continue;
    int row = side == 0 ? 0 : idx.n[0] - 1;
    int n_vary = rank == 3 ? idx.n[size_t(c0->vary)] : 1;
    int n_degen = idx.n[size_t(c0->degen)];
    vb.value[size_t(side)].resize(size_t(n_vary));
    vb.mean[size_t(side)].resize(size_t(n_vary));
    for (int iv = 0; iv < n_vary; ++iv) {
      Vec3 m{0, 0, 0};
      for (int id = 0; id < n_degen; ++id) {
        std::array<int, 3> c{row, 0, 0};
        c[size_t(c0->degen)] = id;
        if (rank == 3) c[size_t(c0->vary)] = iv;
        Vec3 phi = field.get(idx.at(c[0], c[1], c[2]));
        m[0] += phi[0];
        m[1] += phi[1];
        m[2] += phi[2];
      }
      double r = norm(m);
      if (r < 1e-12 * n_degen) throw IllConditionedPlaquette();
      vb.mean[size_t(side)][size_t(iv)] = m;
      vb.value[size_t(side)][size_t(iv)] = {m[0] / r, m[1] / r, m[2] / r};
    }
  }
  return vb;
}

// Iterate the plaquettes of one cap block: cb(i1, i2, A, Ap, B, Bp, siteA,
// siteAp, varyA, varyAp) with corners ordered (A, B, Bp, Ap).
template <typename F>
void for_each_cap_plaquette(const Field& field, const LatticeGeometry& geom,
                            const CapBlock& cap, const VirtualBoundary& vb,
                            F&& cb) {
  Indexer idx(field.spec);
  const int rank = geom.rank();
  int row = cap.side == 0 ? 0 : idx.n[0] - 1;
  int n1 = idx.n[1], n2 = rank == 3 ? idx.n[2] : 1;
  for (int j = 0; j < n1; ++j)
    for (int k = 0; k < n2; ++k) {
      std::array<int, 3> c{row, j, k};
      std::array<int, 3> cn = c;
      cn[size_t(cap.nu)] = idx.wrap(cap.nu, c[size_t(cap.nu)] + 1);
      std::int64_t sA = idx.at(c[0], c[1], c[2]);
      std::int64_t sAp = idx.at(cn[0], cn[1], cn[2]);
      int vA = 0, vAp = 0;
      if (rank == 3) {
        vA = c[size_t(cap.vary)];
        vAp = cn[size_t(cap.vary)];
      }
      cb(field.get(sA), field.get(sAp), vb.value[size_t(cap.side)][size_t(vA)],
         vb.value[size_t(cap.side)][size_t(vAp)], sA, sAp, vA, vAp);
    }
}

}  // namespace

double plaquette_area(const Vec3& v1, const Vec3& v2, const Vec3& v3,
                      const Vec3& v4) {
  return quad_area(v1, v2, v3, v4);
}

double energy_e4_value(const Field& field, const LatticeGeometry& geom) {
  PlaquetteWalk walk(field.spec);
  double E = 0;
  for (const PlaquetteBlock& blk : geom.plaq) {
    std::int64_t q = 0;
    for (int i = 0; i < blk.dims[0]; ++i)
      for (int j = 0; j < blk.dims[1]; ++j)
        for (int k = 0; k < blk.dims[2]; ++k, ++q) {
          std::int64_t s[4];
          walk.corners(blk, i, j, k, s);
          double W = quad_area(field.get(s[0]), field.get(s[1]),
                               field.get(s[2]), field.get(s[3]));
          E += blk.coeff[size_t(q)] * W * W;
        }
  }
  VirtualBoundary vb = compute_virtual(field, geom);
  for (const CapBlock& cap : geom.caps)
    for_each_cap_plaquette(
        field, geom, cap, vb,
        [&](const Vec3& A, const Vec3& Ap, const Vec3& B, const Vec3& Bp,
            std::int64_t, std::int64_t, int, int) {
          double W = quad_area(A, B, Bp, Ap);
          E += cap.coeff * W * W;
        });
  return E;
}

EnergyReport energy_e4(const Field& field, const LatticeGeometry& geom) {
  PlaquetteWalk walk(field.spec);
  EnergyReport rep;
  rep.kappa = geom.kappa;
  const std::int64_t n_sites = field.n_sites();
  rep.density.assign(size_t(n_sites), 0.0);
  rep.directional.assign(geom.rank() == 3 ? 3 : 1, 0.0);
  std::vector<double> sum(static_cast<size_t>(n_sites));
  std::vector<int> cnt(static_cast<size_t>(n_sites));
  VirtualBoundary vb = compute_virtual(field, geom);

  for (const PlaquetteBlock& blk : geom.plaq) {
    std::fill(sum.begin(), sum.end(), 0.0);
    std::fill(cnt.begin(), cnt.end(), 0);
    double Eblk = 0;
    std::int64_t q = 0;
    for (int i = 0; i < blk.dims[0]; ++i)
      for (int j = 0; j < blk.dims[1]; ++j)
        for (int k = 0; k < blk.dims[2]; ++k, ++q) {
          std::int64_t s[4];
          walk.corners(blk, i, j, k, s);
          Vec3 c1 = field.get(s[0]), c2 = field.get(s[1]),
               c3 = field.get(s[2]), c4 = field.get(s[3]);
          double W = quad_area(c1, c2, c3, c4);
          double e = blk.coeff[size_t(q)] * W * W;
          Eblk += e;
          double Wd = plaquette_area_rich(c1, c2, c3, c4);
          double dens =
              blk.coeff[size_t(q)] * Wd * Wd * blk.inv_measure[size_t(q)];
          for (int c = 0; c < 4; ++c) {
            sum[size_t(s[c])] += dens;
            cnt[size_t(s[c])] += 1;
          }
        }
    // boundary caps belonging to this orientation pair
    for (const CapBlock& cap : geom.caps) {
      if (cap.nu != blk.nu || blk.mu != 0) continue;
      for_each_cap_plaquette(
          field, geom, cap, vb,
          [&](const Vec3& A, const Vec3& Ap, const Vec3& B, const Vec3& Bp,
              std::int64_t sA, std::int64_t sAp, int, int) {
            double W = quad_area(A, B, Bp, Ap);
            Eblk += cap.coeff * W * W;
            double Wd = plaquette_area_rich(A, B, Bp, Ap);
            double dens = cap.coeff * Wd * Wd * cap.inv_measure;
            sum[size_t(sA)] += dens;
            cnt[size_t(sA)] += 1;
            sum[size_t(sAp)] += dens;
            cnt[size_t(sAp)] += 1;
          });
    }
    int missing = geom.rank() == 3 ? (3 - blk.mu - blk.nu) : 0;
    rep.directional[size_t(missing)] += Eblk;
    rep.E4 += Eblk;
    for (std::int64_t s = 0; s < n_sites; ++s)
      if (cnt[size_t(s)])
        rep.density[size_t(s)] += sum[size_t(s)] / cnt[size_t(s)];
  }
  rep.density_min = rep.density.empty() ? 0 : rep.density[0];
  rep.density_max = rep.density_min;
  for (double d : rep.density) {
    rep.density_min = std::min(rep.density_min, d);
    rep.density_max = std::max(rep.density_max, d);
  }
  rep.E_total = rep.E4;
  return rep;
}

double energy_e2(const Field& field, const LatticeGeometry& geom) {
  Indexer idx(field.spec);
  double E = 0;
  for (int axis = 0; axis < geom.rank(); ++axis) {
    int span = geom.span(axis);
    const std::vector<double>& coeff = geom.e2_coeff[size_t(axis)];
    for (int i = 0; i < idx.n[0]; ++i)
      for (int j = 0; j < idx.n[1]; ++j)
        for (int k = 0; k < idx.n[2]; ++k) {
          std::array<int, 3> c{i, j, k};
          if (c[size_t(axis)] >= span) continue;
          std::array<int, 3> d = c;
          d[size_t(axis)] = idx.wrap(axis, c[size_t(axis)] + 1);
          std::int64_t sa = idx.at(c[0], c[1], c[2]);
          std::int64_t sb = idx.at(d[0], d[1], d[2]);
          Vec3 a = field.get(sa), b = field.get(sb);
          double dx = b[0] - a[0], dy = b[1] - a[1], dz = b[2] - a[2];
          E += coeff[size_t(sa)] * (dx * dx + dy * dy + dz * dz);
        }
  }
  return kE2Norm * E;
}

std::vector<double> gradient(const Field& field, const LatticeGeometry& geom,
                             double beta) {
  if (beta < 0) throw std::invalid_argument("gradient: beta must be >= 0");
  const std::int64_t n_sites = field.n_sites();
  std::vector<double> g(size_t(3 * n_sites), 0.0);
  auto add = [&g](std::int64_t site, double w, const Vec3& v) {
    g[size_t(3 * site)] += w * v[0];
    g[size_t(3 * site + 1)] += w * v[1];
    g[size_t(3 * site + 2)] += w * v[2];
  };

  PlaquetteWalk walk(field.spec);
  for (const PlaquetteBlock& blk : geom.plaq) {
    std::int64_t q = 0;
    for (int i = 0; i < blk.dims[0]; ++i)
      for (int j = 0; j < blk.dims[1]; ++j)
        for (int k = 0; k < blk.dims[2]; ++k, ++q) {
          std::int64_t s[4];
          walk.corners(blk, i, j, k, s);
          Vec3 v1 = field.get(s[0]), v2 = field.get(s[1]),
               v3 = field.get(s[2]), v4 = field.get(s[3]);
          double W = quad_area(v1, v2, v3, v4);
          double w = 2.0 * blk.coeff[size_t(q)] * W;  // d(C W^2)/dW
          Vec3 g1, g2, g3, g4;
          quad_area_grad(v1, v2, v3, v4, g1, g2, g3, g4);
          add(s[0], w, g1);
          add(s[1], w, g2);
          add(s[2], w, g3);
          add(s[3], w, g4);
        }
  }

  // caps: route the virtual-corner gradient through the normalized row mean
  VirtualBoundary vb = compute_virtual(field, geom);
  if (vb.active) {
    std::array<std::vector<Vec3>, 2> gv;
    for (int side = 0; side < 2; ++side)
      gv[size_t(side)].assign(vb.value[size_t(side)].size(), Vec3{0, 0, 0});
    for (const CapBlock& cap : geom.caps)
      for_each_cap_plaquette(
          field, geom, cap, vb,
          [&](const Vec3& A, const Vec3& Ap, const Vec3& B, const Vec3& Bp,
              std::int64_t sA, std::int64_t sAp, int vA, int vAp) {
            double W = quad_area(A, B, Bp, Ap);
            double w = 2.0 * cap.coeff * W;
            Vec3 gA, gB, gBp, gAp;
            quad_area_grad(A, B, Bp, Ap, gA, gB, gBp, gAp);
            add(sA, w, gA);
            add(sAp, w, gAp);
            for (int d = 0; d < 3; ++d) {
              gv[size_t(cap.side)][size_t(vA)][size_t(d)] += w * gB[size_t(d)];
              gv[size_t(cap.side)][size_t(vAp)][size_t(d)] += w * gBp[size_t(d)];
            }
          });
    // distribute d/d(mean) over the contributing row sites
    Indexer idx(field.spec);
    const int rank = geom.rank();
    for (int side = 0; side < 2; ++side) {
      const CapBlock* c0 = nullptr;
      for (const CapBlock& c : geom.caps)
        if (c.side == side) { c0 = &c; break; }
      if (!c0) continue;
      int row = side == 0 ? 0 : idx.n[0] - 1;
      int n_degen = idx.n[size_t(c0->degen)];
      for (size_t iv = 0; iv < gv[size_t(side)].size(); ++iv) {
        const Vec3& m = vb.mean[size_t(side)][iv];
        const Vec3& v = vb.value[size_t(side)][iv];
        double r = norm(m);
        const Vec3& gvv = gv[size_t(side)][iv];
        double gdotv = dot(gvv, v);
        Vec3 dm = {(gvv[0] - gdotv * v[0]) / r, (gvv[1] - gdotv * v[1]) / r,
                   (gvv[2] - gdotv * v[2]) / r};
        for (int id = 0; id < n_degen; ++id) {
          std::array<int, 3> c{row, 0, 0};
          c[size_t(c0->degen)] = id;
          if (rank == 3) c[size_t(c0->vary)] = int(iv);
          add(idx.at(c[0], c[1], c[2]), 1.0, dm);
        }
      }
    }
  }

  if (beta > 0) {
    Indexer idx(field.spec);
    for (int axis = 0; axis < geom.rank(); ++axis) {
      int span = geom.span(axis);
      const std::vector<double>& coeff = geom.e2_coeff[size_t(axis)];
      for (int i = 0; i < idx.n[0]; ++i)
        for (int j = 0; j < idx.n[1]; ++j)
          for (int k = 0; k < idx.n[2]; ++k) {
            std::array<int, 3> c{i, j, k};
            if (c[size_t(axis)] >= span) continue;
            std::array<int, 3> d = c;
            d[size_t(axis)] = idx.wrap(axis, c[size_t(axis)] + 1);
            std::int64_t sa = idx.at(c[0], c[1], c[2]);
            std::int64_t sb = idx.at(d[0], d[1], d[2]);
            Vec3 a = field.get(sa), b = field.get(sb);
            Vec3 delta = {b[0] - a[0], b[1] - a[1], b[2] - a[2]};
            double w = 2.0 * beta * kE2Norm * coeff[size_t(sa)];
            add(sa, -w, delta);
            add(sb, w, delta);
          }
    }
  }

  // project onto tangent planes: g <- g - (g.phi) phi, exactly per site
  for (std::int64_t s = 0; s < n_sites; ++s) {
    Vec3 phi = field.get(s);
    Vec3 gs = {g[size_t(3 * s)], g[size_t(3 * s + 1)], g[size_t(3 * s + 2)]};
    double gp = dot(gs, phi);
    g[size_t(3 * s)] -= gp * phi[0];
    g[size_t(3 * s + 1)] -= gp * phi[1];
    g[size_t(3 * s + 2)] -= gp * phi[2];
  }
  return g;
}

double anisotropy_first_order(double E_x, double E_y, double E_z, double eps_y,
                              double eps_z) {
  return (E_x - E_y + E_z) * eps_y + (E_x - E_z + E_y) * eps_z;
}

bool period_stable(double E_x, double E_y, double E_z) {
  return (E_x - E_y + E_z) > 0 && (E_x - E_z + E_y) > 0;
}

std::vector<double> cap_areas(const Field& field, const LatticeGeometry& geom,
                              const CapBlock& cap) {
  VirtualBoundary vb = compute_virtual(field, geom);
  std::vector<double> W;
  W.reserve(size_t(field.spec.dims[1]) *
            (geom.rank() == 3 ? size_t(field.spec.dims[2]) : 1));
  for_each_cap_plaquette(
      field, geom, cap, vb,
      [&](const Vec3& A, const Vec3& Ap, const Vec3& B, const Vec3& Bp,
          std::int64_t, std::int64_t, int, int) {
        W.push_back(quad_area(A, B, Bp, Ap));
      });
  return W;
}

std::vector<double> b_density(const Field& field,
                              const LatticeGeometry& geom) {
  if (geom.rank() != 2)
    throw std::invalid_argument("b_density is defined for 2D manifolds");
  const PlaquetteBlock& blk = geom.plaq[0];
  PlaquetteWalk walk(field.spec);
  std::vector<double> B(static_cast<size_t>(blk.count()));
  std::int64_t q = 0;
  for (int i = 0; i < blk.dims[0]; ++i)
    for (int j = 0; j < blk.dims[1]; ++j)
      for (int k = 0; k < blk.dims[2]; ++k, ++q) {
        std::int64_t s[4];
        walk.corners(blk, i, j, k, s);
        double W = quad_area(field.get(s[0]), field.get(s[1]),
                             field.get(s[2]), field.get(s[3]));
        B[size_t(q)] = W * blk.inv_measure[size_t(q)];
      }
  return B;
}

}  // namespace hopf
