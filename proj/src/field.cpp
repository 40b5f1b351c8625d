#include "hopf/field.hpp"

#include <cmath>
#include <stdexcept>

#include "hopf/ansatz1d.hpp"
#include "hopf/geometry.hpp"
#include "hopf/lattice.hpp"

namespace hopf {

namespace {
constexpr double kPi = 3.14159265358979323846;

bool finite(std::complex<double> w) {
  return std::isfinite(w.real()) && std::isfinite(w.imag());
}

// C1 ramp used by the bubble/suspension initializers.
double smoothstep01(double u) {
  if (u <= 0) return 0;
  if (u >= 1) return 1;
  return u * u * (3 - 2 * u);
}

void require_kind(const ManifoldSpec& spec, Manifold kind, const char* who) {
  if (spec.kind != kind)
    throw std::invalid_argument(std::string(who) + " requires manifold " +
                                manifold_name(kind));
}
}  // namespace

Vec3 stereo_to_vector(std::complex<double> w) {
  if (!finite(w)) return {0.0, 0.0, -1.0};
  double n2 = std::norm(w);
  double d = 1.0 + n2;
  return {2.0 * w.real() / d, 2.0 * w.imag() / d, (1.0 - n2) / d};
}

std::complex<double> vector_to_stereo(const Vec3& v) {
  double d = 1.0 + v[2];
  if (d <= 0.0)
    return {std::numeric_limits<double>::infinity(), 0.0};
  return {v[0] / d, v[1] / d};
}

void Field::renormalize() {
  for (std::int64_t s = 0; s < n_sites(); ++s) {
    Vec3 v = get(s);
    double r = norm(v);
    set(s, {v[0] / r, v[1] / r, v[2] / r});
  }
}

Field make_constant_field(const ManifoldSpec& spec, const Vec3& v) {
  spec.validate();
  Field f;
  f.spec = spec;
  f.data.resize(size_t(3 * spec.n_sites()));
  Vec3 u = normalized(v);
  for (std::int64_t s = 0; s < spec.n_sites(); ++s) f.set(s, u);
  return f;
}

Field init_amn(const ManifoldSpec& spec, int m, int n,
               const ProfileSolution* profile) {
  require_kind(spec, Manifold::S3, "init_amn");
  spec.validate();
  if (m < 1 || n < 1) throw std::invalid_argument("init_amn: m,n must be >= 1");
  LatticeGeometry geom = build_geometry(spec);
  Field f;
  f.spec = spec;
  f.data.resize(size_t(3 * spec.n_sites()));
  Indexer idx(spec);
  for (int i = 0; i < idx.n[0]; ++i) {
    double r = geom.coord[0][size_t(i)];
    // target polar angle alpha measured from w=infinity; alpha=2r gives
    // |w| = cot(r), exact for m = n.
    double alpha = profile ? profile->eval(r) : 2.0 * r;
    double sa = std::sin(alpha), ca = std::cos(alpha);
    for (int j = 0; j < idx.n[1]; ++j) {
      double s = geom.coord[1][size_t(j)];
      for (int k = 0; k < idx.n[2]; ++k) {
        double t = geom.coord[2][size_t(k)];
        double psi = m * s - n * t;
        f.set(idx.at(i, j, k), {sa * std::cos(psi), sa * std::sin(psi), -ca});
      }
    }
  }
  f.renormalize();
  return f;
}

Field init_vav_s2s1(const ManifoldSpec& spec, const ProfileSolution& profile) {
  require_kind(spec, Manifold::S2xS1, "init_vav_s2s1");
  spec.validate();
  auto near = [](double a, double b) { return std::abs(a - b) < 1e-9; };
  if (profile.grid.empty() || !near(profile.grid.front(), 0.0) ||
      !near(profile.grid.back(), kPi) || !near(profile.eval(0.0), 0.0) ||
      !near(profile.eval(kPi / 2), kPi) || !near(profile.eval(kPi), 2 * kPi))
    throw std::invalid_argument(
        "init_vav_s2s1: profile must satisfy f(0)=0, f(pi/2)=pi, f(pi)=2pi");
  LatticeGeometry geom = build_geometry(spec);
  Field f;
  f.spec = spec;
  f.data.resize(size_t(3 * spec.n_sites()));
  Indexer idx(spec);
  for (int i = 0; i < idx.n[0]; ++i) {
    double theta = geom.coord[0][size_t(i)];
    double fv = profile.eval(theta);
    double sf = std::sin(fv), cf = std::cos(fv);
    double sign = theta <= kPi / 2 ? 1.0 : -1.0;  // vp+chi vs vp-chi
    for (int j = 0; j < idx.n[1]; ++j) {
      double a = geom.coord[1][size_t(j)];
      for (int k = 0; k < idx.n[2]; ++k) {
        double chi = geom.coord[2][size_t(k)];
        double psi = a + sign * chi;
        f.set(idx.at(i, j, k), {sf * std::cos(psi), sf * std::sin(psi), cf});
      }
    }
  }
  f.renormalize();
  return f;
}

// Degree-(+winding) bubble map T2 -> S2: the disk of radius rho0 around
// (pi,pi) covers the target once (azimuth = winding * polar angle around the
// center), everything outside is the south pole.
static Vec3 bubble_map(double y, double z, double rho0, int winding) {
  double dy = y - kPi, dz = z - kPi;
  double rho = std::sqrt(dy * dy + dz * dz);
  double theta_t = kPi * smoothstep01(rho / rho0);
  double az = winding * std::atan2(dz, dy);
  return {std::sin(theta_t) * std::cos(az), std::sin(theta_t) * std::sin(az),
          std::cos(theta_t)};
}

Field init_t3_vav(const ManifoldSpec& spec, int pairs) {
  require_kind(spec, Manifold::T3, "init_t3_vav");
  spec.validate();
  if (pairs < 1) throw std::invalid_argument("init_t3_vav: pairs must be >= 1");
  LatticeGeometry geom = build_geometry(spec);
  Field f;
  f.spec = spec;
  f.data.resize(size_t(3 * spec.n_sites()));
  Indexer idx(spec);
  const double rho0 = 0.95 * kPi;
  for (int i = 0; i < idx.n[0]; ++i) {
    double x = geom.coord[0][size_t(i)] / spec.period_factor(0);
    // Suspension coordinate: rho sweeps 0 -> pi -> 0 smoothly over the x
    // period; the two halves carry bubble maps of opposite winding, so the
    // composite T3 -> S3 map has degree 2*pairs and the pullback 2-form is
    // exact (all net fluxes vanish by construction).
    double rho = kPi * 0.5 * (1.0 - std::cos(x));
    int winding = x <= kPi ? pairs : -pairs;
    double cr = std::cos(rho), sr = std::sin(rho);
    for (int j = 0; j < idx.n[1]; ++j) {
      double y = geom.coord[1][size_t(j)] / spec.period_factor(1);
      for (int k = 0; k < idx.n[2]; ++k) {
        double z = geom.coord[2][size_t(k)] / spec.period_factor(2);
        Vec3 mv = bubble_map(y, z, rho0, winding);
        // unit quaternion, then the standard Hopf map
        double q0 = cr, q1 = sr * mv[0], q2 = sr * mv[1], q3 = sr * mv[2];
        f.set(idx.at(i, j, k),
              {2.0 * (q1 * q3 + q0 * q2), 2.0 * (q2 * q3 - q0 * q1),
               q0 * q0 + q3 * q3 - q1 * q1 - q2 * q2});
      }
    }
  }
  f.renormalize();
  return f;
}

Field init_baby_s2(const ManifoldSpec& spec, int Q) {
  require_kind(spec, Manifold::S2, "init_baby_s2");
  spec.validate();
  if (Q < 1) throw std::invalid_argument("init_baby_s2: Q must be >= 1");
  LatticeGeometry geom = build_geometry(spec);
  Field f;
  f.spec = spec;
  f.data.resize(size_t(3 * spec.n_sites()));
  Indexer idx(spec);
  // w = z^Q/|z|^{Q-1} with z = tan(theta/2) e^{ia}: same polar angle,
  // azimuth multiplied by Q.
  for (int i = 0; i < idx.n[0]; ++i) {
    double theta = geom.coord[0][size_t(i)];
    double st = std::sin(theta), ct = std::cos(theta);
    for (int j = 0; j < idx.n[1]; ++j) {
      double a = Q * geom.coord[1][size_t(j)];
      f.set(idx.at(i, j, 0), {st * std::cos(a), st * std::sin(a), ct});
    }
  }
  f.renormalize();
  return f;
}

Field init_baby_t2(const ManifoldSpec& spec) {
  require_kind(spec, Manifold::T2, "init_baby_t2");
  spec.validate();
  LatticeGeometry geom = build_geometry(spec);
  Field f;
  f.spec = spec;
  f.data.resize(size_t(3 * spec.n_sites()));
  Indexer idx(spec);
  for (int i = 0; i < idx.n[0]; ++i) {
    double x = geom.coord[0][size_t(i)] / spec.period_factor(0);
    double p1 = 1.0 - (2.0 / kPi) * std::abs(x - kPi);
    double fx = std::sqrt(std::max(0.0, 1.0 - p1 * p1));
    double sgn = x > kPi ? 1.0 : (x < kPi ? -1.0 : 0.0);
    for (int j = 0; j < idx.n[1]; ++j) {
      double y = geom.coord[1][size_t(j)] / spec.period_factor(1);
      f.set(idx.at(i, j, 0), {p1, sgn * fx * std::cos(y), fx * std::sin(y)});
    }
  }
  f.renormalize();
  return f;
}

Field init_baby_t2_q1(const ManifoldSpec& spec) {
  require_kind(spec, Manifold::T2, "init_baby_t2_q1");
  spec.validate();
  LatticeGeometry geom = build_geometry(spec);
  Field f;
  f.spec = spec;
  f.data.resize(size_t(3 * spec.n_sites()));
  Indexer idx(spec);
  const double rho0 = 0.95 * kPi;
  for (int i = 0; i < idx.n[0]; ++i) {
    double x = geom.coord[0][size_t(i)] / spec.period_factor(0);
    for (int j = 0; j < idx.n[1]; ++j) {
      double y = geom.coord[1][size_t(j)] / spec.period_factor(1);
      f.set(idx.at(i, j, 0), bubble_map(x, y, rho0, 1));
    }
  }
  f.renormalize();
  return f;
}

Field perturb(const Field& field, double amplitude, std::uint64_t seed) {
  if (amplitude < 0) throw std::invalid_argument("perturb: amplitude >= 0");
  if (amplitude == 0.0) return field;
  Field out = field;
  for (std::int64_t s = 0; s < field.n_sites(); ++s) {
    // counter-based stream: one SplitMix64 state per (seed, site)
    std::uint64_t state = seed ^ (0x9e3779b97f4a7c15ULL * (std::uint64_t(s) + 1));
    Vec3 u = {uniform_pm1(state), uniform_pm1(state), uniform_pm1(state)};
    Vec3 phi = field.get(s);
    double up = dot(u, phi);
    Vec3 tang = {u[0] - up * phi[0], u[1] - up * phi[1], u[2] - up * phi[2]};
    out.set(s, normalized(axpy(amplitude, tang, phi)));
  }
  return out;
}

double continuity_check(const Field& field) {
  const ManifoldSpec& spec = field.spec;
  Indexer idx(spec);
  double worst = 0;
  for (int axis = 0; axis < spec.rank(); ++axis) {
    bool periodic =
        !(axis == 0 && !manifold_is_flat(spec.kind));  // r/theta are open
    int span = periodic ? spec.dims[size_t(axis)] : spec.dims[size_t(axis)] - 1;
    for (int i = 0; i < idx.n[0]; ++i)
      for (int j = 0; j < idx.n[1]; ++j)
        for (int k = 0; k < idx.n[2]; ++k) {
          std::array<int, 3> c{i, j, k};
          if (c[size_t(axis)] >= span) continue;
          std::array<int, 3> d = c;
          d[size_t(axis)] = idx.wrap(axis, c[size_t(axis)] + 1);
          Vec3 a = field.get(idx.at(c[0], c[1], c[2]));
          Vec3 b = field.get(idx.at(d[0], d[1], d[2]));
          double ang = std::atan2(norm(cross(a, b)), dot(a, b));
          if (ang > worst) worst = ang;
        }
  }
  return worst;
}

}  // namespace hopf
