#include "hopf/topology.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>

#include "hopf/lattice.hpp"

namespace hopf {

namespace {

constexpr double kPi = 3.14159265358979323846;

// The one global orientation constant.  Plaquettes are traversed
// (s, s+mu, s+mu+nu, s+nu) and preimage curves follow grad(u) x grad(v);
// with those choices the 2D degree of the exact constructions and the
// preimage linking both come out positive.  The spectral (1/16pi^2) int B.A
// pairing under the right-handed epsilon^{xyz} is opposite to that
// convention for our stereographic chart, so it carries this factor: it
// pins the standard Hopf construction to Q = +1.
constexpr double kHopfOrientation = -1.0;

const PlaquetteBlock& block_for_pair(const LatticeGeometry& geom, int mu,
                                     int nu) {
  for (const PlaquetteBlock& b : geom.plaq)
    if (b.mu == mu && b.nu == nu) return b;
  throw TopologyError("no such plaquette orientation");
}

// Raw plaquette areas of one orientation block, flattened over block dims.
std::vector<double> block_areas(const Field& field,
                                const LatticeGeometry& /*geom*/,
                                const PlaquetteBlock& blk) {
  Indexer sites(field.spec);
  Indexer bidx(blk.dims[0], blk.dims[1], blk.dims[2]);
  std::vector<double> W(static_cast<size_t>(bidx.size()));
  std::int64_t q = 0;
  for (int i = 0; i < blk.dims[0]; ++i)
    for (int j = 0; j < blk.dims[1]; ++j)
      for (int k = 0; k < blk.dims[2]; ++k, ++q) {
        std::array<int, 3> c{i, j, k};
        std::array<int, 3> cm = c, cn = c, cmn = c;
        cm[size_t(blk.mu)] = sites.wrap(blk.mu, c[size_t(blk.mu)] + 1);
        cn[size_t(blk.nu)] = sites.wrap(blk.nu, c[size_t(blk.nu)] + 1);
        cmn[size_t(blk.mu)] = cm[size_t(blk.mu)];
        cmn[size_t(blk.nu)] = cn[size_t(blk.nu)];
        W[size_t(q)] = plaquette_area(
            field.get(sites.at(c[0], c[1], c[2])),
            field.get(sites.at(cm[0], cm[1], cm[2])),
            field.get(sites.at(cmn[0], cmn[1], cmn[2])),
            field.get(sites.at(cn[0], cn[1], cn[2])));
      }
  return W;
}

}  // namespace

ChargeReport degree_2d(const Field& field, const LatticeGeometry& geom) {
  if (geom.rank() != 2)
    throw TopologyError("degree_2d requires a 2D manifold");
  std::vector<double> W = block_areas(field, geom, geom.plaq[0]);
  double total = 0;
  for (double w : W) total += w;
  for (const CapBlock& cap : geom.caps) {
    double sign = cap.side == 0 ? -1.0 : 1.0;
    for (double w : cap_areas(field, geom, cap)) total += sign * w;
  }
  ChargeReport rep;
  rep.Q_numeric = total / (4.0 * kPi);
  rep.Q = int(std::lround(rep.Q_numeric));
  rep.residual = std::abs(rep.Q_numeric - rep.Q);
  return rep;
}

int net_flux(const Field& field, const LatticeGeometry& geom, int direction) {
  if (geom.rank() != 3)
    throw TopologyError("net_flux requires a 3D manifold");
  if (field.spec.kind == Manifold::S2xS1 && direction != 2)
    throw TopologyError(
        "net_flux on s2s1: only the S1 direction has closed cross-sections");
  if (field.spec.kind == Manifold::S3)
    throw TopologyError("net_flux: S3 has no closed coordinate cross-sections");
  if (direction < 0 || direction > 2) throw TopologyError("bad direction");

  int mu = direction == 0 ? 1 : 0;
  int nu = direction == 2 ? 1 : 2;
  const PlaquetteBlock& blk = block_for_pair(geom, mu, nu);
  std::vector<double> W = block_areas(field, geom, blk);
  Indexer bidx(blk.dims[0], blk.dims[1], blk.dims[2]);

  int levels = blk.dims[size_t(direction)];
  std::vector<double> flux(size_t(levels), 0.0);
  for (std::int64_t q = 0; q < bidx.size(); ++q)
    flux[size_t(bidx.coords(q)[size_t(direction)])] += W[size_t(q)];
  // boundary closures (the polar caps of the S2 cross-sections on S2xS1);
  // cap plaquettes are indexed (j,k) over axes 1,2 and belong to the slice
  // given by their `direction` coordinate
  for (const CapBlock& cap : geom.caps) {
    if (mu != 0 || cap.nu != nu) continue;
    double sign = cap.side == 0 ? -1.0 : 1.0;
    std::vector<double> W2 = cap_areas(field, geom, cap);
    Indexer cidx(1, field.spec.dims[1], field.spec.dims[2]);
    for (std::int64_t q = 0; q < std::int64_t(W2.size()); ++q) {
      auto c = cidx.coords(q);
      flux[size_t(c[size_t(direction)])] += sign * W2[size_t(q)];
    }
  }
  for (double& f : flux) f /= 4.0 * kPi;

  double q0 = flux[0];
  int Q = int(std::lround(q0));
  for (double f : flux)
    if (std::abs(f - Q) > 0.05)
      throw TopologyError(
          "net_flux: cross-sections disagree (field is discontinuous?)");
  return Q;
}

ChargeReport hopf_charge_t3(const Field& field, const LatticeGeometry& geom) {
  if (field.spec.kind != Manifold::T3)
    throw TopologyError("hopf_charge_t3 requires T3");
  std::vector<int> fluxes;
  for (int d = 0; d < 3; ++d) fluxes.push_back(net_flux(field, geom, d));
  for (int f : fluxes)
    if (f != 0)
      throw TopologyError(
          "hopf_charge_t3: nonzero net vortex flux, the pullback 2-form is "
          "not exact (map is algebraically essential)");

  // cell-indexed F_{mu nu} = plaquette area / (h_mu h_nu)
  std::array<std::vector<double>, 3> F;  // 0:(01) 1:(02) 2:(12)
  const int pmu[3] = {0, 0, 1}, pnu[3] = {1, 2, 2};
  for (int p = 0; p < 3; ++p) {
    F[size_t(p)] = block_areas(field, geom, block_for_pair(geom, pmu[p], pnu[p]));
    double hh = geom.h[size_t(pmu[p])] * geom.h[size_t(pnu[p])];
    for (double& w : F[size_t(p)]) w /= hh;
  }
  ChargeReport rep = hopf_charge_from_components(
      F[0], F[1], F[2],
      {field.spec.dims[0], field.spec.dims[1], field.spec.dims[2]}, geom.h);
  rep.net_fluxes = fluxes;
  return rep;
}

ChargeReport hopf_charge_from_components(
    const std::vector<double>& F01v, const std::vector<double>& F02v,
    const std::vector<double>& F12v, const std::array<int, 3>& dims,
    const std::array<double, 3>& h, double* recon_error) {
  ChargeReport rep;
  const int N0 = dims[0], N1 = dims[1], N2 = dims[2];
  const std::int64_t n = std::int64_t(N0) * N1 * N2;
  const double h0 = h[0], h1 = h[1], h2 = h[2];
  const std::array<const std::vector<double>*, 3> F = {&F01v, &F02v, &F12v};

  using cplx = std::complex<double>;
  std::array<std::vector<cplx>, 3> Fk;
  {
    std::vector<cplx> in(static_cast<size_t>(n));
    fftw_plan plan = fftw_plan_dft_3d(
        N0, N1, N2, reinterpret_cast<fftw_complex*>(in.data()),
        reinterpret_cast<fftw_complex*>(in.data()), FFTW_FORWARD,
        FFTW_ESTIMATE);
    for (int p = 0; p < 3; ++p) {
      for (std::int64_t i = 0; i < n; ++i)
        in[size_t(i)] = (*F[size_t(p)])[size_t(i)];
      fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                       reinterpret_cast<fftw_complex*>(in.data()));
      Fk[size_t(p)] = in;
    }
    fftw_destroy_plan(plan);
  }

  // Per mode solve dA = F in the divergence-free gauge,
  //   A_nu = sum_mu conj(D_mu) F_{mu nu} / |D|^2,  D_mu = (e^{i th_mu}-1)/h_mu,
  // check the reconstruction, and accumulate (1/16pi^2) int B.A via Parseval
  // with the half-cell staggering phases.
  Indexer idx(N0, N1, N2);
  double maxF = 0;
  for (int p = 0; p < 3; ++p)
    for (const cplx& z : Fk[size_t(p)]) maxF = std::max(maxF, std::abs(z));
  double recon_err = 0;
  cplx acc = 0;
  for (std::int64_t m = 0; m < n; ++m) {
    auto c = idx.coords(m);
    if (c[0] == 0 && c[1] == 0 && c[2] == 0) continue;  // zero mode: A = 0
    double th0 = 2.0 * kPi * c[0] / N0;
    double th1 = 2.0 * kPi * c[1] / N1;
    double th2 = 2.0 * kPi * c[2] / N2;
    cplx D0 = (std::polar(1.0, th0) - 1.0) / h0;
    cplx D1 = (std::polar(1.0, th1) - 1.0) / h1;
    cplx D2 = (std::polar(1.0, th2) - 1.0) / h2;
    double D2norm = std::norm(D0) + std::norm(D1) + std::norm(D2);
    cplx F01 = Fk[0][size_t(m)], F02 = Fk[1][size_t(m)], F12 = Fk[2][size_t(m)];
    cplx A0 = (-std::conj(D1) * F01 - std::conj(D2) * F02) / D2norm;
    cplx A1 = (std::conj(D0) * F01 - std::conj(D2) * F12) / D2norm;
    cplx A2 = (std::conj(D0) * F02 + std::conj(D1) * F12) / D2norm;

    recon_err = std::max(recon_err, std::abs(D0 * A1 - D1 * A0 - F01));
    recon_err = std::max(recon_err, std::abs(D0 * A2 - D2 * A0 - F02));
    recon_err = std::max(recon_err, std::abs(D1 * A2 - D2 * A1 - F12));

    // B^0 = F12, B^1 = -F02, B^2 = F01, with staggering offsets
    // (A_mu at half-step along mu, B^mu at half-steps along the others).
    // Half-sample shifts need centered frequencies in (-pi, pi]; the raw
    // 2*pi*k/N phases flip sign on the upper half of the spectrum and the
    // Hermitian pairs would cancel.
    double tc0 = 2 * c[0] <= N0 ? th0 : th0 - 2.0 * kPi;
    double tc1 = 2 * c[1] <= N1 ? th1 : th1 - 2.0 * kPi;
    double tc2 = 2 * c[2] <= N2 ? th2 : th2 - 2.0 * kPi;
    cplx ph0 = std::polar(1.0, 0.5 * (-tc0 + tc1 + tc2));
    cplx ph1 = std::polar(1.0, 0.5 * (tc0 - tc1 + tc2));
    cplx ph2 = std::polar(1.0, 0.5 * (tc0 + tc1 - tc2));
    acc += F12 * std::conj(A0 * ph0);
    acc += -F02 * std::conj(A1 * ph1);
    acc += F01 * std::conj(A2 * ph2);
  }
  if (recon_error) *recon_error = maxF > 0 ? recon_err / maxF : 0.0;
  if (maxF > 0 && recon_err / maxF > 1e-6)
    throw TopologyError(
        "hopf_charge_t3: vector potential cannot reproduce F (lattice "
        "monopoles present, field is discontinuous)");

  double Q = kHopfOrientation * acc.real() / double(n) * h0 * h1 * h2 /
             (16.0 * kPi * kPi);
  rep.Q_numeric = Q;
  rep.Q = int(std::lround(Q));
  rep.residual = std::abs(Q - rep.Q);
  return rep;
}

// ---------------------------------------------------------------------------
// preimage extraction
// ---------------------------------------------------------------------------

namespace {

struct FaceKey {
  std::array<std::int64_t, 3> v;  // sorted corner site ids
  bool operator<(const FaceKey& o) const { return v < o.v; }
};

struct FaceCross {
  bool present = false;
  double lam[3] = {0, 0, 0};  // barycentric over the sorted corners
};

// rotation taking p to the north pole (Rodrigues)
struct ChartRotation {
  double R[3][3];
  explicit ChartRotation(const Vec3& p) {
    Vec3 z{0, 0, 1};
    Vec3 axis = cross(p, z);
    double s = norm(axis), c = dot(p, z);
    if (s < 1e-14) {
      // p along +-z: identity or half-turn about x
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) R[i][j] = (i == j) ? 1.0 : 0.0;
      if (c < 0) { R[1][1] = -1.0; R[2][2] = -1.0; }
      return;
    }
    Vec3 k = {axis[0] / s, axis[1] / s, axis[2] / s};
    // R = c I + s [k]_x + (1-c) k k^T
    double K[3][3] = {{0, -k[2], k[1]}, {k[2], 0, -k[0]}, {-k[1], k[0], 0}};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        R[i][j] = c * ((i == j) ? 1.0 : 0.0) + s * K[i][j] +
                  (1 - c) * k[i] * k[j];
  }
  Vec3 apply(const Vec3& v) const {
    return {R[0][0] * v[0] + R[0][1] * v[1] + R[0][2] * v[2],
            R[1][0] * v[0] + R[1][1] * v[1] + R[1][2] * v[2],
            R[2][0] * v[0] + R[2][1] * v[1] + R[2][2] * v[2]};
  }
};

// Kuhn tetrahedra: insertion orders of the three axes, shared main diagonal.
const int kTetPerm[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1},
                            {0, 2, 1}, {1, 0, 2}, {2, 1, 0}};

struct Segment {
  FaceKey fa, fb;
  Vec3 pa, pb;  // index-space positions in the owning cell's frame
};

Vec3 solve3(const double M[3][3], const Vec3& rhs) {
  double det = M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
               M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
               M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
  double inv[3][3];
  inv[0][0] = (M[1][1] * M[2][2] - M[1][2] * M[2][1]) / det;
  inv[0][1] = (M[0][2] * M[2][1] - M[0][1] * M[2][2]) / det;
  inv[0][2] = (M[0][1] * M[1][2] - M[0][2] * M[1][1]) / det;
  inv[1][0] = (M[1][2] * M[2][0] - M[1][0] * M[2][2]) / det;
  inv[1][1] = (M[0][0] * M[2][2] - M[0][2] * M[2][0]) / det;
  inv[1][2] = (M[0][2] * M[1][0] - M[0][0] * M[1][2]) / det;
  inv[2][0] = (M[1][0] * M[2][1] - M[1][1] * M[2][0]) / det;
  inv[2][1] = (M[0][1] * M[2][0] - M[0][0] * M[2][1]) / det;
  inv[2][2] = (M[0][0] * M[1][1] - M[0][1] * M[1][0]) / det;
  return {inv[0][0] * rhs[0] + inv[0][1] * rhs[1] + inv[0][2] * rhs[2],
          inv[1][0] * rhs[0] + inv[1][1] * rhs[1] + inv[1][2] * rhs[2],
          inv[2][0] * rhs[0] + inv[2][1] * rhs[1] + inv[2][2] * rhs[2]};
}

}  // namespace

PreimageCurve preimage(const Field& field, const LatticeGeometry& geom,
                       Vec3 p, CurveProjection projection) {
  if (geom.rank() != 3)
    throw TopologyError("preimage extraction requires a 3D manifold");
  if (projection == CurveProjection::Stereo3 &&
      field.spec.kind == Manifold::T3)
    throw TopologyError("T3 curves have no 3D projection; use none");
  // deterministic generic tilt: keeps the level set away from the exact
  // lattice-aligned planes the symmetric ansatze produce
  p = normalized(Vec3{p[0] + 1.1e-4 * 0.9501, p[1] + 1.1e-4 * 0.2311,
                      p[2] + 1.1e-4 * 0.6068});

  Indexer sites(field.spec);
  const std::int64_t n = sites.size();
  std::vector<double> u(static_cast<size_t>(n)), v(static_cast<size_t>(n)), zc(static_cast<size_t>(n));

  // chart around p; nudge p deterministically off any exact site value
  for (int attempt = 0;; ++attempt) {
    ChartRotation rot(p);
    bool hit = false;
    for (std::int64_t s = 0; s < n && !hit; ++s) {
      Vec3 q = rot.apply(field.get(s));
      zc[size_t(s)] = q[2];
      if (q[2] > -0.7) {  // chart is only used on cells near p
        std::complex<double> w = vector_to_stereo(q);
        u[size_t(s)] = w.real();
        v[size_t(s)] = w.imag();
        if (std::norm(w) < 1e-24) hit = true;
      } else {
        u[size_t(s)] = 1e9;
        v[size_t(s)] = 1e9;
      }
    }
    if (!hit) break;
    if (attempt > 8) throw TopologyError("preimage: cannot find regular value");
    double ang = 1e-4 * (attempt + 1);
    p = normalized(Vec3{p[0] + ang, p[1] + 0.7 * ang, p[2] + 0.31 * ang});
  }

  // enumerate tetrahedra, compute face crossings once per face
  std::map<FaceKey, FaceCross> faces;
  std::vector<Segment> segments;
  bool degenerate = false;

  auto face_cross = [&](const std::array<std::int64_t, 3>& ids) -> FaceCross {
    FaceKey key{ids};
    std::sort(key.v.begin(), key.v.end());
    auto it = faces.find(key);
    if (it != faces.end()) return it->second;
    FaceCross fc;
    double ua = u[size_t(key.v[0])], ub = u[size_t(key.v[1])],
           uc = u[size_t(key.v[2])];
    double va = v[size_t(key.v[0])], vb = v[size_t(key.v[1])],
           vc = v[size_t(key.v[2])];
    double det = (ub - ua) * (vc - va) - (uc - ua) * (vb - va);
    if (std::abs(det) > 1e-300) {
      double lb = (-ua * (vc - va) + va * (uc - ua)) / det;
      double lc = (-va * (ub - ua) + ua * (vb - va)) / det;
      if (lb >= -1e-12 && lc >= -1e-12 && lb + lc <= 1.0 + 1e-12) {
        fc.present = true;
        fc.lam[0] = 1.0 - lb - lc;
        fc.lam[1] = lb;
        fc.lam[2] = lc;
      }
    }
    faces.emplace(key, fc);
    return fc;
  };

  const int span0 = geom.span(0), span1 = geom.span(1), span2 = geom.span(2);
  for (int i = 0; i < span0; ++i)
    for (int j = 0; j < span1; ++j)
      for (int k = 0; k < span2; ++k) {
        // cell corners: local offset -> (site id, local index coords)
        std::int64_t id[2][2][2];
        bool skip = false;
        for (int a = 0; a < 2 && !skip; ++a)
          for (int b = 0; b < 2 && !skip; ++b)
            for (int c = 0; c < 2 && !skip; ++c) {
              std::int64_t s = sites.at(sites.wrap(0, i + a),
                                        sites.wrap(1, j + b),
                                        sites.wrap(2, k + c));
              id[a][b][c] = s;
              if (zc[size_t(s)] < -0.5) skip = true;  // far from p
            }
        if (skip) continue;
        for (int t = 0; t < 6; ++t) {
          // tet vertices as local offsets
          std::array<std::array<int, 3>, 4> loc{};
          loc[0] = {0, 0, 0};
          loc[1] = loc[0];
          loc[1][kTetPerm[t][0]] = 1;
          loc[2] = loc[1];
          loc[2][kTetPerm[t][1]] = 1;
          loc[3] = {1, 1, 1};
          std::array<std::int64_t, 4> vid;
          for (int q = 0; q < 4; ++q)
            vid[size_t(q)] = id[loc[size_t(q)][0]][loc[size_t(q)][1]][loc[size_t(q)][2]];

          // face crossings (face q omits vertex q)
          FaceCross fc[4];
          std::array<std::int64_t, 3> fid[4];
          int found = 0;
          for (int q = 0; q < 4; ++q) {
            int w = 0;
            for (int r = 0; r < 4; ++r)
              if (r != q) fid[q][size_t(w++)] = vid[size_t(r)];
            fc[q] = face_cross(fid[q]);
            if (fc[q].present) ++found;
          }
          if (found == 0) continue;
          if (found != 2) {
            degenerate = true;
            continue;
          }
          int qa = -1, qb = -1;
          for (int q = 0; q < 4; ++q)
            if (fc[q].present) (qa < 0 ? qa : qb) = q;

          // positions in cell-local index coords via the sorted face corners
          auto face_point = [&](int q) -> Vec3 {
            FaceKey key{fid[q]};
            std::sort(key.v.begin(), key.v.end());
            Vec3 pos{0, 0, 0};
            for (int r = 0; r < 3; ++r) {
              // find local coords of corner key.v[r] within this tet's face
              for (int s = 0; s < 4; ++s)
                if (vid[size_t(s)] == key.v[size_t(r)]) {
                  for (int d = 0; d < 3; ++d)
                    pos[size_t(d)] += fc[q].lam[r] * loc[size_t(s)][size_t(d)];
                  break;
                }
            }
            return pos;
          };
          Vec3 pa = face_point(qa), pb = face_point(qb);

          // orient along grad(u) x grad(v)
          double M[3][3];
          for (int col = 1; col < 4; ++col)
            for (int d = 0; d < 3; ++d)
              M[d][col - 1] = loc[size_t(col)][size_t(d)] - loc[0][size_t(d)];
          // gradients solve M^T g = delta(values); M columns are edges
          double MT[3][3];
          for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) MT[a][b] = M[b][a];
          Vec3 du, dv;
          for (int d = 0; d < 3; ++d) {
            du[size_t(d)] = u[size_t(vid[size_t(d + 1)])] - u[size_t(vid[0])];
            dv[size_t(d)] = v[size_t(vid[size_t(d + 1)])] - v[size_t(vid[0])];
          }
          Vec3 gu = solve3(MT, du), gv = solve3(MT, dv);
          Vec3 dir = cross(gu, gv);
          Vec3 ab = {pb[0] - pa[0], pb[1] - pa[1], pb[2] - pa[2]};
          if (dot(ab, dir) < 0) {
            std::swap(qa, qb);
            std::swap(pa, pb);
          }

          Segment seg;
          seg.fa = FaceKey{fid[qa]};
          std::sort(seg.fa.v.begin(), seg.fa.v.end());
          seg.fb = FaceKey{fid[qb]};
          std::sort(seg.fb.v.begin(), seg.fb.v.end());
          seg.pa = {pa[0] + i, pa[1] + j, pa[2] + k};
          seg.pb = {pb[0] + i, pb[1] + j, pb[2] + k};
          segments.push_back(seg);
        }
      }

  // stitch: walk from segment to segment through shared faces; frames of
  // neighbouring cells can differ by an exact period vector of the lattice.
  std::map<FaceKey, std::vector<int>> by_face;
  for (size_t s = 0; s < segments.size(); ++s) {
    by_face[segments[s].fa].push_back(int(s));
    by_face[segments[s].fb].push_back(int(s));
  }
  for (auto& [key, lst] : by_face)
    if (lst.size() > 2) degenerate = true;

  PreimageCurve out;
  out.value = p;
  std::vector<char> used(segments.size(), 0);
  auto period_fix = [&](const Vec3& ref, const Vec3& pt) -> Vec3 {
    Vec3 r = pt;
    for (int d = 0; d < 3; ++d) {
      if (!geom.periodic[size_t(d)]) continue;
      double Nd = field.spec.dims[size_t(d)];
      r[size_t(d)] -= Nd * std::round((pt[size_t(d)] - ref[size_t(d)]) / Nd);
    }
    return r;
  };

  for (size_t start = 0; start < segments.size(); ++start) {
    if (used[start]) continue;
    used[start] = 1;
    std::vector<Vec3> pts;  // index-space, continued frame
    pts.push_back(segments[start].pa);
    pts.push_back(period_fix(segments[start].pa, segments[start].pb));
    FaceKey exit = segments[start].fb;
    FaceKey home = segments[start].fa;
    bool closed = false;
    for (;;) {
      if (!(exit < home) && !(home < exit)) {  // returned to the start face
        closed = true;
        break;
      }
      const std::vector<int>& cand = by_face[exit];
      int next = -1;
      for (int s : cand)
        if (!used[size_t(s)]) next = s;
      if (next < 0) break;
      used[size_t(next)] = 1;
      const Segment& sn = segments[size_t(next)];
      bool forward = !(sn.fa < exit) && !(exit < sn.fa);
      Vec3 near_pt = forward ? sn.pa : sn.pb;
      Vec3 far_pt = forward ? sn.pb : sn.pa;
      Vec3 ref = pts.back();
      Vec3 near_fixed = period_fix(ref, near_pt);
      Vec3 shift = {near_fixed[0] - near_pt[0], near_fixed[1] - near_pt[1],
                    near_fixed[2] - near_pt[2]};
      pts.push_back({far_pt[0] + shift[0], far_pt[1] + shift[1],
                     far_pt[2] + shift[2]});
      exit = forward ? sn.fb : sn.fa;
    }
    if (!closed) out.all_closed = false;
    if (pts.size() < 2) continue;

    // index space -> coordinates -> optional projection
    std::vector<Vec3> curve;
    curve.reserve(pts.size());
    for (const Vec3& q : pts) {
      Vec3 x;
      for (int d = 0; d < 3; ++d) {
        double idx_pos = q[size_t(d)];
        double off = geom.periodic[size_t(d)] ? 0.0 : 0.5;
        x[size_t(d)] = (idx_pos + off) * geom.h[size_t(d)];
      }
      if (projection == CurveProjection::Stereo3) {
        if (field.spec.kind == Manifold::S3) {
          double r = x[0], s = x[1], t = x[2];
          double X0 = std::cos(r) * std::cos(s), X1 = std::cos(r) * std::sin(s);
          double X2 = std::sin(r) * std::cos(t), X3 = std::sin(r) * std::sin(t);
          double den = 1.0 - X0;
          x = {X1 / den, X2 / den, X3 / den};
        } else {  // S2xS1 -> solid torus, excluded fiber at theta = pi
          double th = x[0], a = x[1], chi = x[2];
          double uu = th * std::cos(a), vv = th * std::sin(a);
          double R = kPi + 0.5;
          x = {(R + uu) * std::cos(chi), (R + uu) * std::sin(chi), vv};
        }
      }
      curve.push_back(x);
    }
    // The walk ends back on its starting face: the last point coincides with
    // the first up to rounding, except for components wrapping a period in
    // raw coordinates, which end one period vector away.
    if (closed && curve.size() > 2) {
      Vec3 d = {curve.back()[0] - curve.front()[0],
                curve.back()[1] - curve.front()[1],
                curve.back()[2] - curve.front()[2]};
      if (norm(d) < 1e-6) curve.back() = curve.front();
    }
    out.components.push_back(std::move(curve));
  }
  if (degenerate) out.all_closed = false;
  return out;
}

// ---------------------------------------------------------------------------
// Gauss linking
// ---------------------------------------------------------------------------

LinkingResult linking_number(const std::vector<Vec3>& c1,
                             const std::vector<Vec3>& c2) {
  auto strip = [](std::vector<Vec3> c) {
    if (c.size() > 1) {
      Vec3 d = {c.back()[0] - c.front()[0], c.back()[1] - c.front()[1],
                c.back()[2] - c.front()[2]};
      if (norm(d) < 1e-9) c.pop_back();
    }
    return c;
  };
  std::vector<Vec3> a = strip(c1), b = strip(c2);
  LinkingResult res;
  if (a.size() < 3 || b.size() < 3) {
    res.reliable = false;
    return res;
  }
  double max_seg = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    Vec3 d = {a[(i + 1) % a.size()][0] - a[i][0],
              a[(i + 1) % a.size()][1] - a[i][1],
              a[(i + 1) % a.size()][2] - a[i][2]};
    max_seg = std::max(max_seg, norm(d));
  }
  for (size_t i = 0; i < b.size(); ++i) {
    Vec3 d = {b[(i + 1) % b.size()][0] - b[i][0],
              b[(i + 1) % b.size()][1] - b[i][1],
              b[(i + 1) % b.size()][2] - b[i][2]};
    max_seg = std::max(max_seg, norm(d));
  }
  double min_dist = 1e300;
  double total = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    const Vec3& p0 = a[i];
    const Vec3& p1 = a[(i + 1) % a.size()];
    for (size_t j = 0; j < b.size(); ++j) {
      const Vec3& q0 = b[j];
      const Vec3& q1 = b[(j + 1) % b.size()];
      Vec3 d00 = {p0[0] - q0[0], p0[1] - q0[1], p0[2] - q0[2]};
      Vec3 d01 = {p0[0] - q1[0], p0[1] - q1[1], p0[2] - q1[2]};
      Vec3 d10 = {p1[0] - q0[0], p1[1] - q0[1], p1[2] - q0[2]};
      Vec3 d11 = {p1[0] - q1[0], p1[1] - q1[1], p1[2] - q1[2]};
      double n00 = norm(d00);
      min_dist = std::min(min_dist, n00);
      if (n00 < 1e-14 || norm(d01) < 1e-14 || norm(d10) < 1e-14 ||
          norm(d11) < 1e-14) {
        res.reliable = false;
        continue;
      }
      // Gauss-map image of the (segment x segment) rectangle is a spherical
      // quadrilateral; its signed area is the exact pair contribution.
      try {
        total += plaquette_area(normalized(d00), normalized(d10),
                                normalized(d11), normalized(d01));
      } catch (const IllConditionedPlaquette&) {
        res.reliable = false;  // segments (nearly) intersect
      }
    }
  }
  res.lk_numeric = total / (4.0 * kPi);
  res.lk = int(std::lround(res.lk_numeric));
  if (std::abs(res.lk_numeric - res.lk) > 0.05) res.reliable = false;
  if (min_dist < max_seg) res.reliable = false;  // closer than lattice scale
  return res;
}

LinkingResult total_linking(const PreimageCurve& f1, const PreimageCurve& f2) {
  LinkingResult res;
  res.lk_numeric = 0;
  for (const auto& a : f1.components)
    for (const auto& b : f2.components) {
      LinkingResult r = linking_number(a, b);
      res.lk_numeric += r.lk_numeric;
      res.reliable = res.reliable && r.reliable;
    }
  res.lk = int(std::lround(res.lk_numeric));
  if (!f1.all_closed || !f2.all_closed) res.reliable = false;
  return res;
}

}  // namespace hopf
